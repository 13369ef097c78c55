#include <catch2/catch_amalgamated.hpp>

#include "stargl/gbdt.hpp"
#include "stargl/rng.hpp"

using namespace stargl;

namespace {

bool trees_equal(const Tree& a, const Tree& b) {
  if (a.nodes.size() != b.nodes.size()) return false;
  for (std::size_t i = 0; i < a.nodes.size(); ++i) {
    const TreeNode &x = a.nodes[i], &y = b.nodes[i];
    if (x.feature != y.feature || x.left != y.left || x.right != y.right ||
        x.threshold != y.threshold || x.weight != y.weight)
      return false;
  }
  return true;
}

}  // namespace

TEST_CASE("gbdt constant target is reproduced exactly", "[gbdt]") {
  RMat x(8, 2);
  Rng rng(4);
  for (int i = 0; i < 8; ++i)
    for (int c = 0; c < 2; ++c) x(i, c) = rng.gaussian();
  const RVec y = RVec::Constant(8, -1.75);
  GbdtConfig params;
  params.rounds = 5;
  const GbdtEnsemble model = gbdt_fit(x, y, params, 3);
  REQUIRE(model.base == -1.75);
  for (const Tree& t : model.trees) {
    REQUIRE(t.nodes.size() == 1);
    REQUIRE(t.nodes[0].weight == 0.0);
  }
  RVec probe(2);
  probe << 100.0, -100.0;
  REQUIRE(gbdt_predict(model, probe) == -1.75);
}

TEST_CASE("gbdt depth-0 single tree predicts the mean", "[gbdt]") {
  RMat x(6, 1);
  x << 1, 2, 3, 4, 5, 6;
  RVec y(6);
  y << 2, 4, 6, 8, 10, 12;
  GbdtConfig params;
  params.rounds = 1;
  params.max_depth = 0;
  params.reg_lambda = 0.0;
  params.learning_rate = 1.0;
  params.row_subsample = 1.0;
  params.feature_subsample = 1.0;
  const GbdtEnsemble model = gbdt_fit(x, y, params, 1);
  REQUIRE(gbdt_predict(model, RVec::Constant(1, 3.0)) == Catch::Approx(7.0).margin(1e-12));
}

TEST_CASE("gbdt learns a step function with a hand-checked first tree", "[gbdt]") {
  const int n = 100;
  RMat x(n, 1);
  RVec y(n);
  for (int i = 0; i < n; ++i) {
    x(i, 0) = i;             // threshold at the median 49.5
    y(i) = (i < n / 2) ? 0.0 : 1.0;
  }
  GbdtConfig params;
  params.rounds = 50;
  params.max_depth = 1;
  params.learning_rate = 0.1;
  params.reg_lambda = 1.0;
  params.row_subsample = 1.0;
  params.feature_subsample = 1.0;
  const GbdtEnsemble model = gbdt_fit(x, y, params, 7);

  // Round-1 closed form: base 0.5, residual gradient +-0.5 per side, so each
  // leaf weight is -G/(H+lambda) = -(+-25)/(50+1).
  const Tree& first = model.trees.front();
  REQUIRE(first.nodes[0].feature == 0);
  REQUIRE(first.nodes[0].threshold == Catch::Approx(49.5).margin(1e-12));
  const double want = 25.0 / 51.0;
  const double left = first.nodes[first.nodes[0].left].weight;
  const double right = first.nodes[first.nodes[0].right].weight;
  REQUIRE(left == Catch::Approx(-want).margin(1e-12));
  REQUIRE(right == Catch::Approx(want).margin(1e-12));

  double mse = 0.0;
  for (int i = 0; i < n; ++i) {
    const double p = gbdt_predict(model, x.row(i).transpose());
    mse += (p - y(i)) * (p - y(i));
  }
  REQUIRE(mse / n < 0.01);
}

TEST_CASE("gbdt root split matches a brute-force gain search", "[gbdt]") {
  Rng rng(12);
  const int n = 40;
  RMat x(n, 3);
  RVec y(n);
  for (int i = 0; i < n; ++i) {
    for (int c = 0; c < 3; ++c) x(i, c) = rng.gaussian();
    y(i) = 2.0 * x(i, 1) + 0.3 * rng.gaussian();
  }
  GbdtConfig params;
  params.rounds = 1;
  params.max_depth = 1;
  params.row_subsample = 1.0;
  params.feature_subsample = 1.0;
  const GbdtEnsemble model = gbdt_fit(x, y, params, 5);
  const Tree& tree = model.trees.front();
  REQUIRE(tree.nodes[0].feature >= 0);

  // Brute force over all features and midpoint thresholds on the residuals
  // g_i = base - y_i (h_i = 1).
  const double base = y.mean();
  double best_gain = 0.0;
  int best_feature = -1;
  double best_threshold = 0.0;
  for (int fi = 0; fi < 3; ++fi) {
    std::vector<double> vals(x.col(fi).data(), x.col(fi).data() + n);
    std::sort(vals.begin(), vals.end());
    for (int i = 0; i + 1 < n; ++i) {
      if (vals[i] == vals[i + 1]) continue;
      const double thr = 0.5 * (vals[i] + vals[i + 1]);
      double gl = 0.0, hl = 0.0, g = 0.0, h = 0.0;
      for (int r = 0; r < n; ++r) {
        const double grad = base - y(r);
        g += grad;
        h += 1.0;
        if (x(r, fi) < thr) {
          gl += grad;
          hl += 1.0;
        }
      }
      const double gr = g - gl, hr = h - hl;
      const double gain = 0.5 * (gl * gl / (hl + params.reg_lambda) +
                                 gr * gr / (hr + params.reg_lambda) -
                                 g * g / (h + params.reg_lambda));
      if (gain > best_gain) {
        best_gain = gain;
        best_feature = fi;
        best_threshold = thr;
      }
    }
  }
  REQUIRE(tree.nodes[0].feature == best_feature);
  REQUIRE(tree.nodes[0].threshold == Catch::Approx(best_threshold).margin(1e-12));
  REQUIRE(best_gain >= 0.0);
}

TEST_CASE("gbdt training loss is non-increasing on random data", "[gbdt]") {
  for (int trial = 0; trial < 20; ++trial) {
    Rng rng(100 + trial);
    const int n = 80;
    RMat x(n, 5);
    RVec y(n);
    for (int i = 0; i < n; ++i) {
      for (int c = 0; c < 5; ++c) x(i, c) = rng.gaussian();
      y(i) = rng.gaussian();
    }
    GbdtConfig params;
    params.rounds = 40;
    const GbdtEnsemble model = gbdt_fit(x, y, params, trial);
    REQUIRE(static_cast<int>(model.train_loss.size()) == params.rounds);
    for (std::size_t r = 1; r < model.train_loss.size(); ++r)
      REQUIRE(model.train_loss[r] <= model.train_loss[r - 1] + 1e-12);
  }
}

TEST_CASE("gbdt shrinkage zero keeps the base predictor", "[gbdt]") {
  Rng rng(31);
  RMat x(20, 2);
  RVec y(20);
  for (int i = 0; i < 20; ++i) {
    x(i, 0) = rng.gaussian();
    x(i, 1) = rng.gaussian();
    y(i) = x(i, 0);
  }
  GbdtConfig params;
  params.rounds = 10;
  params.learning_rate = 0.0;
  const GbdtEnsemble model = gbdt_fit(x, y, params, 2);
  for (int i = 0; i < 20; ++i)
    REQUIRE(gbdt_predict(model, x.row(i).transpose()) == model.base);
}

TEST_CASE("gbdt subsampled training is bit-deterministic per seed", "[gbdt]") {
  Rng rng(77);
  const int n = 60;
  RMat x(n, 4);
  RVec y(n);
  for (int i = 0; i < n; ++i) {
    for (int c = 0; c < 4; ++c) x(i, c) = rng.gaussian();
    y(i) = x(i, 2) * x(i, 2) + 0.1 * rng.gaussian();
  }
  GbdtConfig params;
  params.rounds = 15;
  const GbdtEnsemble a = gbdt_fit(x, y, params, 9);
  const GbdtEnsemble b = gbdt_fit(x, y, params, 9);
  REQUIRE(a.trees.size() == b.trees.size());
  for (std::size_t t = 0; t < a.trees.size(); ++t) REQUIRE(trees_equal(a.trees[t], b.trees[t]));
  REQUIRE(a.train_loss == b.train_loss);

  const GbdtEnsemble c = gbdt_fit(x, y, params, 10);
  bool any_diff = false;
  for (std::size_t t = 0; t < a.trees.size() && !any_diff; ++t)
    any_diff = !trees_equal(a.trees[t], c.trees[t]);
  REQUIRE(any_diff);
}

TEST_CASE("gbdt recorded loss agrees with recomputed predictions", "[gbdt]") {
  Rng rng(91);
  const int n = 50;
  RMat x(n, 3);
  RVec y(n);
  for (int i = 0; i < n; ++i) {
    for (int c = 0; c < 3; ++c) x(i, c) = rng.gaussian();
    y(i) = std::sin(x(i, 0)) + 0.05 * rng.gaussian();
  }
  GbdtConfig params;
  params.rounds = 25;
  const GbdtEnsemble model = gbdt_fit(x, y, params, 6);
  double mse = 0.0;
  for (int i = 0; i < n; ++i) {
    const double p = gbdt_predict(model, x.row(i).transpose());
    mse += (p - y(i)) * (p - y(i));
  }
  mse /= n;
  REQUIRE(mse == Catch::Approx(model.train_loss.back()).epsilon(1e-12));
}

TEST_CASE("gbdt predict and flops conventions", "[gbdt]") {
  SECTION("empty ensemble returns the base score") {
    GbdtEnsemble e;
    e.base = 3.25;
    e.n_features = 2;
    REQUIRE(gbdt_predict(e, RVec::Zero(2)) == 3.25);
    REQUIRE(gbdt_flops(e) == 1);
  }

  SECTION("single split tree routes below threshold to the left") {
    GbdtEnsemble e;
    e.base = 1.0;
    e.eta = 0.5;
    e.n_features = 1;
    Tree t;
    t.nodes = {TreeNode{0, 2.0, 1, 2, 0.0}, TreeNode{-1, 0, -1, -1, 4.0},
               TreeNode{-1, 0, -1, -1, -4.0}};
    e.trees.push_back(t);
    REQUIRE(gbdt_predict(e, RVec::Constant(1, 1.0)) == Catch::Approx(1.0 + 0.5 * 4.0));
    REQUIRE(gbdt_predict(e, RVec::Constant(1, 2.0)) == Catch::Approx(1.0 - 0.5 * 4.0));  // tie right
    REQUIRE(gbdt_flops(e) == 4);  // 1 compare + 1 madd (2) + base add
    REQUIRE_THROWS_AS(gbdt_predict(e, RVec::Zero(3)), DimensionError);
  }

  SECTION("T=200 depth-4 convention arithmetic") {
    GbdtEnsemble e;
    Tree chain;
    // full-depth right spine of depth 4
    for (int d = 0; d < 4; ++d) {
      const int self = static_cast<int>(chain.nodes.size());
      chain.nodes.push_back(TreeNode{0, 0.0, self + 1, self + 2, 0.0});
      chain.nodes.push_back(TreeNode{-1, 0, -1, -1, 0.0});
    }
    chain.nodes.push_back(TreeNode{-1, 0, -1, -1, 0.0});
    e.trees.assign(200, chain);
    REQUIRE(gbdt_flops(e) == 200 * 4 + 400 + 1);
  }
}

TEST_CASE("gbdt rejects bad input", "[gbdt]") {
  RMat x(4, 1);
  x << 1, 2, 3, 4;
  RVec y(4);
  y << 1, 2, std::numeric_limits<double>::quiet_NaN(), 4;
  REQUIRE_THROWS_AS(gbdt_fit(x, y, GbdtConfig{}, 0), DataError);
  RVec good = RVec::Ones(3);
  REQUIRE_THROWS_AS(gbdt_fit(x, good, GbdtConfig{}, 0), DimensionError);
}
