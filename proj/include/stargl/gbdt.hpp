#ifndef STARGL_GBDT_HPP_
#define STARGL_GBDT_HPP_

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <vector>

#include "stargl/config.hpp"
#include "stargl/rng.hpp"
#include "stargl/types.hpp"

namespace stargl {

// feature < 0 marks a leaf. Traversal goes left when value < threshold,
// ties to the right.
struct TreeNode {
  int feature = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double weight = 0.0;
};

struct Tree {
  std::vector<TreeNode> nodes;  // pre-order, root at 0

  double value(const double* x) const {
    int node = 0;
    while (nodes[node].feature >= 0)
      node = (x[nodes[node].feature] < nodes[node].threshold) ? nodes[node].left
                                                              : nodes[node].right;
    return nodes[node].weight;
  }

  int depth() const {
    if (nodes.empty()) return 0;
    int best = 0;
    std::vector<std::pair<int, int>> stack{{0, 0}};
    while (!stack.empty()) {
      auto [node, d] = stack.back();
      stack.pop_back();
      if (nodes[node].feature < 0) {
        best = std::max(best, d);
      } else {
        stack.push_back({nodes[node].left, d + 1});
        stack.push_back({nodes[node].right, d + 1});
      }
    }
    return best;
  }
};

// prediction = base + eta * sum of tree outputs.
struct GbdtEnsemble {
  double base = 0.0;
  double eta = 0.1;
  double lambda = 1.0;
  double gamma = 0.0;
  int max_depth = 4;
  int rounds = 0;
  double row_subsample = 1.0;
  double feature_subsample = 1.0;
  std::uint64_t seed = 0;
  int n_features = 0;
  std::vector<Tree> trees;
  std::vector<double> train_loss;  // full-set MSE after each round
};

namespace gbdt_detail {

struct SplitChoice {
  double gain = 0.0;
  int feature = -1;
  double threshold = 0.0;
};

// Renumber a scratch tree (level-order construction) into pre-order.
inline Tree to_preorder(const std::vector<TreeNode>& scratch) {
  Tree out;
  if (scratch.empty()) return out;
  std::vector<std::pair<int, int>> stack{{0, -1}};  // (scratch index, parent out index as left? encoded below)
  // Recursive emit keeps it simple; depth is tiny.
  struct Emit {
    const std::vector<TreeNode>& in;
    std::vector<TreeNode>& out;
    int operator()(int idx) {
      const int self = static_cast<int>(out.size());
      out.push_back(in[idx]);
      if (in[idx].feature >= 0) {
        out[self].left = (*this)(in[idx].left);
        out[self].right = (*this)(in[idx].right);
      }
      return self;
    }
  };
  Emit emit{scratch, out.nodes};
  emit(0);
  return out;
}

inline std::vector<int> sample_without_replacement(Rng& rng, int n, int k) {
  std::vector<int> pool(n);
  std::iota(pool.begin(), pool.end(), 0);
  for (int i = 0; i < k; ++i) {
    const int j = i + static_cast<int>(rng.uniform_index(n - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(k);
  std::sort(pool.begin(), pool.end());
  return pool;
}

}  // namespace gbdt_detail

// Squared-error gradient boosting with exact greedy splits (candidate
// thresholds are midpoints of consecutive distinct sorted values) and the
// XGBoost second-order gain. For squared loss g_i = pred_i - y_i, h_i = 1.
// The full-training-set MSE is recorded per round and kept non-increasing:
// if a subsampled tree would raise it, its leaf weights are halved (down to
// zero) until it does not.
inline GbdtEnsemble gbdt_fit(const RMat& x, const RVec& y, const GbdtConfig& params,
                             std::uint64_t seed) {
  const int n = static_cast<int>(x.rows());
  const int f = static_cast<int>(x.cols());
  if (n < 2) throw DataError("gbdt_fit: need at least 2 samples");
  if (x.rows() != y.size()) throw DimensionError("gbdt_fit: row/target count mismatch");
  for (Eigen::Index i = 0; i < y.size(); ++i)
    if (!std::isfinite(y(i))) throw DataError("gbdt_fit: non-finite target at row " + std::to_string(i));

  GbdtEnsemble model;
  model.base = y.mean();
  model.eta = params.learning_rate;
  model.lambda = params.reg_lambda;
  model.gamma = params.min_gain;
  model.max_depth = params.max_depth;
  model.rounds = params.rounds;
  model.row_subsample = params.row_subsample;
  model.feature_subsample = params.feature_subsample;
  model.seed = seed;
  model.n_features = f;

  // Presorted row orders per feature, shared across rounds.
  std::vector<std::vector<int>> order(f);
  for (int fi = 0; fi < f; ++fi) {
    order[fi].resize(n);
    std::iota(order[fi].begin(), order[fi].end(), 0);
    std::stable_sort(order[fi].begin(), order[fi].end(),
                     [&](int a, int b) { return x(a, fi) < x(b, fi); });
  }

  RVec pred = RVec::Constant(n, model.base);
  auto mse = [&](const RVec& p) { return (p - y).squaredNorm() / n; };
  double cur_loss = mse(pred);
  // Row-major copy so tree evaluation can walk contiguous feature rows.
  const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> x_rows = x;

  const int k_rows = std::max(1, static_cast<int>(std::llround(params.row_subsample * n)));
  const int k_feats = std::max(1, static_cast<int>(std::llround(params.feature_subsample * f)));

  for (int round = 0; round < params.rounds; ++round) {
    Rng rng(derive_seed(seed, 0x67626474ULL, static_cast<std::uint64_t>(round)));  // "gbdt"
    const std::vector<int> rows = gbdt_detail::sample_without_replacement(rng, n, std::min(k_rows, n));
    const std::vector<int> feats =
        gbdt_detail::sample_without_replacement(rng, f, std::min(k_feats, f));

    std::vector<char> in_sample(n, 0);
    for (int r : rows) in_sample[r] = 1;
    std::vector<int> node_of(n, -1);
    for (int r : rows) node_of[r] = 0;

    // Scratch tree grown level-wise.
    std::vector<TreeNode> scratch(1);
    std::vector<double> node_g(1, 0.0), node_h(1, 0.0);
    std::vector<int> node_cnt(1, 0);
    for (int r : rows) {
      node_g[0] += pred(r) - y(r);
      node_h[0] += 1.0;
      node_cnt[0] += 1;
    }
    std::vector<int> active{0};

    for (int depth = 0; depth < params.max_depth && !active.empty(); ++depth) {
      const int n_nodes = static_cast<int>(scratch.size());
      std::vector<gbdt_detail::SplitChoice> best(n_nodes);
      std::vector<char> is_active(n_nodes, 0);
      for (int node : active) is_active[node] = 1;
      // Per-node scan state for the current feature.
      std::vector<double> gl(n_nodes), last_v(n_nodes);
      std::vector<int> cnt_l(n_nodes);
      std::vector<char> started(n_nodes);

      for (int fi : feats) {
        std::fill(gl.begin(), gl.end(), 0.0);
        std::fill(cnt_l.begin(), cnt_l.end(), 0);
        std::fill(started.begin(), started.end(), 0);
        for (int r : order[fi]) {
          const int node = node_of[r];
          if (node < 0 || !is_active[node]) continue;  // out of sample or not being grown
          const double v = x(r, fi);
          if (started[node] && v != last_v[node] && cnt_l[node] > 0 && cnt_l[node] < node_cnt[node]) {
            const double thr = 0.5 * (last_v[node] + v);
            if (thr > last_v[node] && thr <= v) {  // midpoint not degenerate under rounding
              const double g_l = gl[node], h_l = cnt_l[node];
              const double g_r = node_g[node] - g_l, h_r = node_h[node] - h_l;
              const double gain = 0.5 * (g_l * g_l / (h_l + params.reg_lambda) +
                                         g_r * g_r / (h_r + params.reg_lambda) -
                                         node_g[node] * node_g[node] /
                                             (node_h[node] + params.reg_lambda)) -
                                  params.min_gain;
              if (gain > best[node].gain) {
                best[node].gain = gain;
                best[node].feature = fi;
                best[node].threshold = thr;
              }
            }
          }
          gl[node] += pred(r) - y(r);
          cnt_l[node] += 1;
          last_v[node] = v;
          started[node] = 1;
        }
      }

      std::vector<int> next_active;
      for (int node : active) {
        if (best[node].feature < 0 || !(best[node].gain > 0.0)) continue;
        const int left = static_cast<int>(scratch.size());
        const int right = left + 1;
        scratch[node].feature = best[node].feature;
        scratch[node].threshold = best[node].threshold;
        scratch[node].left = left;
        scratch[node].right = right;
        scratch.emplace_back();
        scratch.emplace_back();
        node_g.resize(scratch.size(), 0.0);
        node_h.resize(scratch.size(), 0.0);
        node_cnt.resize(scratch.size(), 0);
        next_active.push_back(left);
        next_active.push_back(right);
      }
      // Route rows of split nodes to their children.
      if (!next_active.empty()) {
        for (int r : rows) {
          int node = node_of[r];
          if (node < 0 || scratch[node].feature < 0) continue;
          node = (x(r, scratch[node].feature) < scratch[node].threshold) ? scratch[node].left
                                                                         : scratch[node].right;
          node_of[r] = node;
          node_g[node] += pred(r) - y(r);
          node_h[node] += 1.0;
          node_cnt[node] += 1;
        }
      }
      active = std::move(next_active);
    }

    for (TreeNode& nd : scratch)
      if (nd.feature < 0 && nd.left < 0) nd.weight = 0.0;
    // Leaf weights: -G/(H + lambda) over the rows that landed in the leaf.
    for (std::size_t i = 0; i < scratch.size(); ++i)
      if (scratch[i].feature < 0)
        scratch[i].weight =
            (node_h[i] > 0.0) ? -node_g[i] / (node_h[i] + params.reg_lambda) : 0.0;

    Tree tree = gbdt_detail::to_preorder(scratch);

    // Monotone-loss safeguard: scale the tree back if the full-set MSE
    // would increase (rare with subsampling, but the loss contract is hard).
    RVec delta(n);
    for (int r = 0; r < n; ++r) delta(r) = tree.value(x_rows.data() + static_cast<std::size_t>(r) * f);
    double scale = 1.0;
    double new_loss = mse(pred + model.eta * scale * delta);
    int halvings = 0;
    while (new_loss > cur_loss && halvings < 40) {
      scale *= 0.5;
      new_loss = mse(pred + model.eta * scale * delta);
      ++halvings;
    }
    if (new_loss > cur_loss) {
      scale = 0.0;
      new_loss = cur_loss;
    }
    if (scale != 1.0)
      for (TreeNode& nd : tree.nodes)
        if (nd.feature < 0) nd.weight *= scale;
    pred += model.eta * scale * delta;
    cur_loss = new_loss;
    model.trees.push_back(std::move(tree));
    model.train_loss.push_back(cur_loss);
  }
  return model;
}

inline double gbdt_predict(const GbdtEnsemble& model, const RVec& x) {
  if (static_cast<int>(x.size()) != model.n_features)
    throw DimensionError("gbdt_predict: feature length " + std::to_string(x.size()) +
                         " != " + std::to_string(model.n_features));
  double acc = 0.0;
  for (const Tree& t : model.trees) acc += t.value(x.data());
  return model.base + model.eta * acc;
}

// Worst-case FLOPs per inference under the documented convention:
// one comparison per tree level (1 FLOP each) + one multiply-add per tree
// for the shrinkage accumulation (2 FLOPs) + 1 add for the base score.
inline std::size_t gbdt_flops(const GbdtEnsemble& model) {
  std::size_t flops = 1;
  for (const Tree& t : model.trees) flops += static_cast<std::size_t>(t.depth()) + 2;
  return flops;
}

}  // namespace stargl

#endif  // STARGL_GBDT_HPP_
