#ifndef STARGL_RFT_HPP_
#define STARGL_RFT_HPP_

#include <algorithm>
#include <limits>
#include <numeric>
#include <vector>

#include "stargl/types.hpp"

namespace stargl {

struct RftScore {
  int feature = -1;
  double loss = 0.0;       // minimal weighted MSE over thresholds
  double threshold = 0.0;  // argmin threshold
  bool unsplittable = false;  // constant feature: loss falls back to Var(y)
};

// Per-target-dimension ordered feature selections.
struct RftSelection {
  std::vector<std::vector<int>> selected;  // [target dim][rank] -> feature index
  int select_count = 0;

  int dims() const { return static_cast<int>(selected.size()); }
};

namespace rft_detail {

inline double variance(const RVec& y) {
  const double mean = y.mean();
  return (y.array() - mean).square().sum() / static_cast<double>(y.size());
}

}  // namespace rft_detail

// Threshold-split relevance: B thresholds uniform strictly inside
// [min z, max z]; each side predicts its mean; the score is the minimal
// size-weighted MSE. Smaller is more predictive.
inline RftScore rft_score(const RVec& z, const RVec& y, int b, int feature_index = -1) {
  if (z.size() != y.size()) throw DimensionError("rft_score: feature/target lengths differ");
  const Eigen::Index n = z.size();
  if (n < 2) throw DataError("rft_score: need at least 2 samples");
  if (b < 1) throw DomainError("rft_score: threshold count must be >= 1");

  RftScore score;
  score.feature = feature_index;

  const double zmin = z.minCoeff();
  const double zmax = z.maxCoeff();
  if (zmin == zmax) {
    score.unsplittable = true;
    score.loss = rft_detail::variance(y);
    score.threshold = zmin;
    return score;
  }

  // Sort once; prefix sums give each side's SSE in O(1) per threshold.
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int c) { return z(a) < z(c); });
  std::vector<double> pre_y(n + 1, 0.0), pre_y2(n + 1, 0.0);
  for (Eigen::Index i = 0; i < n; ++i) {
    pre_y[i + 1] = pre_y[i] + y(order[i]);
    pre_y2[i + 1] = pre_y2[i] + y(order[i]) * y(order[i]);
  }

  double best = std::numeric_limits<double>::infinity();
  double best_t = 0.0;
  Eigen::Index pos = 0;  // count of sorted samples strictly below the threshold
  for (int tb = 1; tb <= b; ++tb) {
    const double t = zmin + (zmax - zmin) * tb / (b + 1);
    while (pos < n && z(order[pos]) < t) ++pos;
    const Eigen::Index n_l = pos, n_r = n - pos;
    if (n_l == 0 || n_r == 0) continue;  // empty side: threshold skipped
    const double sse_l = pre_y2[n_l] - pre_y[n_l] * pre_y[n_l] / n_l;
    const double sum_r = pre_y[n] - pre_y[n_l];
    const double sum2_r = pre_y2[n] - pre_y2[n_l];
    const double sse_r = sum2_r - sum_r * sum_r / n_r;
    const double wmse = (sse_l + sse_r) / static_cast<double>(n);
    if (wmse < best) {
      best = wmse;
      best_t = t;
    }
  }
  if (!std::isfinite(best)) {  // all thresholds skipped (cannot happen with interior thresholds)
    score.unsplittable = true;
    score.loss = rft_detail::variance(y);
    score.threshold = zmin;
    return score;
  }
  score.loss = std::max(best, 0.0);
  score.threshold = best_t;
  return score;
}

// Scores every (feature, target-dim) pair and keeps the f_s best features
// per dimension, ascending loss, ties to the lower feature index. With
// shared = true a single list is chosen by mean rank across dimensions.
inline RftSelection rft_select(const RMat& features, const RMat& targets, int b, int f_s,
                               bool shared = false) {
  const int f = static_cast<int>(features.cols());
  const int d = static_cast<int>(targets.cols());
  if (features.rows() != targets.rows())
    throw DimensionError("rft_select: sample counts differ");
  if (f_s < 1) throw DomainError("rft_select: select_count must be >= 1");
  const int keep = std::min(f_s, f);

  RftSelection sel;
  sel.select_count = keep;
  sel.selected.resize(d);

  RMat losses(f, d);
  for (int fi = 0; fi < f; ++fi) {
    const RVec z = features.col(fi);
    for (int di = 0; di < d; ++di) losses(fi, di) = rft_score(z, targets.col(di), b, fi).loss;
  }

  auto ranked = [&](const RVec& loss_col) {
    std::vector<int> idx(f);
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int c) {
      if (loss_col(a) != loss_col(c)) return loss_col(a) < loss_col(c);
      return a < c;
    });
    return idx;
  };

  if (shared) {
    // Mean rank across target dims, then one shared list.
    RVec mean_rank = RVec::Zero(f);
    for (int di = 0; di < d; ++di) {
      const std::vector<int> idx = ranked(losses.col(di));
      for (int rank = 0; rank < f; ++rank) mean_rank(idx[rank]) += rank;
    }
    const std::vector<int> idx = ranked(mean_rank);
    std::vector<int> chosen(idx.begin(), idx.begin() + keep);
    for (int di = 0; di < d; ++di) sel.selected[di] = chosen;
  } else {
    for (int di = 0; di < d; ++di) {
      const std::vector<int> idx = ranked(losses.col(di));
      sel.selected[di].assign(idx.begin(), idx.begin() + keep);
    }
  }
  return sel;
}

}  // namespace stargl

#endif  // STARGL_RFT_HPP_
