#ifndef STARGL_SAAB_HPP_
#define STARGL_SAAB_HPP_

#include <array>
#include <string>
#include <vector>

#include "stargl/tensor.hpp"
#include "stargl/types.hpp"

namespace stargl {

// One Saab stage: a DC anchor (implicit constant 1/sqrt(d)) plus orthonormal
// AC anchors from PCA of the DC-removed residuals, pruned by cumulative
// energy. Anchors are applied as plain projections at transform time; the
// fit-time residual mean enters only the covariance.
struct SaabStage {
  std::string axis;   // antenna | amplitude | phase | pilot
  int patch_len = 0;  // d
  RMat ac_anchors;    // d x m, orthonormal, each orthogonal to the DC anchor
  RVec energies;      // AC eigenvalues kept, non-increasing
  double dc_energy = 0.0;        // mean squared DC coefficient at fit time
  double total_ac_energy = 0.0;  // sum of all AC eigenvalues before pruning
  double bias = 0.0;             // max training patch norm
  double tau = 1.0;
  bool degenerate = false;  // all-AC-energy-zero inputs: DC only

  int channels() const { return 1 + static_cast<int>(ac_anchors.cols()); }

  RVec dc_anchor() const {
    return RVec::Constant(patch_len, 1.0 / std::sqrt(static_cast<double>(patch_len)));
  }
};

struct SaabModel {
  std::array<SaabStage, 4> stages;  // antenna -> amplitude -> phase -> pilot
  int in_m2 = 0, in_np = 0, in_n = 0, in_k = 0;  // input shape (2M, N_p, N, K_amp)
  bool nonneg = false;

  int feature_len() const {
    int f = 1;
    for (const SaabStage& s : stages) f *= s.channels();
    return f;
  }
};

namespace saab_detail {

// out[0] = DC coefficient, out[1..m] = AC projections (+ bias in nonneg mode).
inline void apply_stage(const SaabStage& st, bool nonneg, const double* fiber, double* out) {
  const double inv_sqrt_d = 1.0 / std::sqrt(static_cast<double>(st.patch_len));
  double dc = 0.0;
  for (int i = 0; i < st.patch_len; ++i) dc += fiber[i];
  out[0] = dc * inv_sqrt_d;
  const int m = static_cast<int>(st.ac_anchors.cols());
  for (int a = 0; a < m; ++a) {
    double acc = 0.0;
    const double* col = st.ac_anchors.col(a).data();
    for (int i = 0; i < st.patch_len; ++i) acc += col[i] * fiber[i];
    out[1 + a] = acc + (nonneg ? st.bias : 0.0);
  }
}

// Fits one stage from a fiber matrix (rows = patches, cols = d).
inline SaabStage fit_stage(const RMat& fibers, const std::string& axis, double tau) {
  SaabStage st;
  st.axis = axis;
  st.patch_len = static_cast<int>(fibers.cols());
  st.tau = tau;
  const Eigen::Index n = fibers.rows();
  const int d = st.patch_len;
  const RVec dc = st.dc_anchor();

  double max_norm2 = 0.0;
  double mean_energy = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double e = fibers.row(i).squaredNorm();
    max_norm2 = std::max(max_norm2, e);
    mean_energy += e;
  }
  mean_energy /= std::max<Eigen::Index>(n, 1);
  st.bias = std::sqrt(max_norm2);

  const RVec dc_coefs = fibers * dc;
  st.dc_energy = dc_coefs.squaredNorm() / std::max<Eigen::Index>(n, 1);

  if (d == 1) {  // no AC subspace exists
    st.ac_anchors = RMat::Zero(1, 0);
    st.energies = RVec::Zero(0);
    return st;
  }

  // Work in the (d-1)-dim orthocomplement of the DC direction so the PCA
  // basis is exactly orthogonal to DC regardless of eigenvalue ties.
  Eigen::HouseholderQR<RMat> qr(dc);
  const RMat q_full = qr.householderQ() * RMat::Identity(d, d);
  const RMat q_perp = q_full.rightCols(d - 1);

  const RMat q_coords = fibers * q_perp;  // residual coordinates, n x (d-1)
  const RVec mean = q_coords.colwise().mean();
  RMat centered = q_coords.rowwise() - mean.transpose();
  RMat cov = (centered.transpose() * centered) / static_cast<double>(n);

  Eigen::SelfAdjointEigenSolver<RMat> es(cov);
  RVec evals = es.eigenvalues();  // ascending
  const RMat evecs = es.eigenvectors();
  for (Eigen::Index i = 0; i < evals.size(); ++i) evals(i) = std::max(evals(i), 0.0);
  const double total = evals.sum();
  st.total_ac_energy = total;

  if (total <= 1e-20 * std::max(mean_energy, 1e-300)) {
    st.degenerate = true;
    st.ac_anchors = RMat::Zero(d, 0);
    st.energies = RVec::Zero(0);
    return st;
  }

  // Keep the smallest m whose cumulative energy reaches tau.
  int m = 0;
  double cum = 0.0;
  for (int i = 0; i < d - 1; ++i) {
    cum += evals(d - 2 - i);
    ++m;
    if (cum >= tau * total * (1.0 - 1e-12)) break;
  }
  st.energies.resize(m);
  st.ac_anchors.resize(d, m);
  for (int i = 0; i < m; ++i) {
    st.energies(i) = evals(d - 2 - i);
    RVec anchor = q_perp * evecs.col(d - 2 - i);
    // Deterministic sign: largest-magnitude entry positive.
    Eigen::Index imax = 0;
    anchor.cwiseAbs().maxCoeff(&imax);
    if (anchor(imax) < 0.0) anchor = -anchor;
    st.ac_anchors.col(i) = anchor;
  }
  return st;
}

// Per-sample stage application over one axis of a flat 4-ish-D buffer.
// The data layout contracts below are local to this file; see transform().
struct ShapedData {
  // dims[0] slowest ... dims[3] fastest
  std::array<int, 4> dims{1, 1, 1, 1};
  std::vector<double> v;

  std::size_t idx(int a, int b, int c, int d) const {
    return ((static_cast<std::size_t>(a) * dims[1] + b) * dims[2] + c) * dims[3] + d;
  }
};

}  // namespace saab_detail

// Fiber counts per stage for one sample, given kept channel counts. Used by
// both the transform below and the FLOPs accounting.
inline std::array<std::size_t, 4> saab_fiber_counts(const SaabModel& model) {
  const std::size_t c1 = model.stages[0].channels();
  const std::size_t c2 = model.stages[1].channels();
  const std::size_t c3 = model.stages[2].channels();
  return {
      static_cast<std::size_t>(model.in_np) * model.in_n * model.in_k,  // stage 1
      c1 * model.in_np * model.in_n,                                    // stage 2
      c1 * c2 * model.in_np,                                            // stage 3
      c1 * c2 * c3,                                                     // stage 4
  };
}

namespace saab_detail {

// Full four-stage transform of one tensor. Feature order: index =
// ((e*C3 + c)*C2 + b)*C1 + a with a,b,c,e the per-stage channel indices
// (stage 4 slowest, stage 1 fastest).
inline RVec transform(const SaabModel& model, const Tensor4C& t) {
  const int m2 = model.in_m2, np = model.in_np, n = model.in_n, kk = model.in_k;
  const int c1 = model.stages[0].channels();
  const int c2 = model.stages[1].channels();
  const int c3 = model.stages[2].channels();
  const int c4 = model.stages[3].channels();

  std::vector<double> fiber(std::max({m2, kk, n, np}));
  std::vector<double> coef(std::max({c1, c2, c3, c4}));

  // Stage 1 (antenna): [a][i][j][k]
  ShapedData s1;
  s1.dims = {c1, np, n, kk};
  s1.v.resize(static_cast<std::size_t>(c1) * np * n * kk);
  for (int i = 0; i < np; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < kk; ++k) {
        real_antenna_fiber(t, i, j, k, fiber.data());
        apply_stage(model.stages[0], model.nonneg, fiber.data(), coef.data());
        for (int a = 0; a < c1; ++a) s1.v[s1.idx(a, i, j, k)] = coef[a];
      }

  // Stage 2 (amplitude axis k): [a][b][i][j]
  ShapedData s2;
  s2.dims = {c1, c2, np, n};
  s2.v.resize(static_cast<std::size_t>(c1) * c2 * np * n);
  for (int a = 0; a < c1; ++a)
    for (int i = 0; i < np; ++i)
      for (int j = 0; j < n; ++j) {
        for (int k = 0; k < kk; ++k) fiber[k] = s1.v[s1.idx(a, i, j, k)];
        apply_stage(model.stages[1], model.nonneg, fiber.data(), coef.data());
        for (int b = 0; b < c2; ++b) s2.v[s2.idx(a, b, i, j)] = coef[b];
      }

  // Stage 3 (phase axis j): [a][b][c][i]
  ShapedData s3;
  s3.dims = {c1, c2, c3, np};
  s3.v.resize(static_cast<std::size_t>(c1) * c2 * c3 * np);
  for (int a = 0; a < c1; ++a)
    for (int b = 0; b < c2; ++b)
      for (int i = 0; i < np; ++i) {
        for (int j = 0; j < n; ++j) fiber[j] = s2.v[s2.idx(a, b, i, j)];
        apply_stage(model.stages[2], model.nonneg, fiber.data(), coef.data());
        for (int c = 0; c < c3; ++c) s3.v[s3.idx(a, b, c, i)] = coef[c];
      }

  // Stage 4 (pilot axis i) + final feature permutation.
  RVec out(model.feature_len());
  for (int a = 0; a < c1; ++a)
    for (int b = 0; b < c2; ++b)
      for (int c = 0; c < c3; ++c) {
        for (int i = 0; i < np; ++i) fiber[i] = s3.v[s3.idx(a, b, c, i)];
        apply_stage(model.stages[3], model.nonneg, fiber.data(), coef.data());
        for (int e = 0; e < c4; ++e)
          out((((static_cast<Eigen::Index>(e) * c3 + c) * c2 + b) * c1 + a)) = coef[e];
      }
  return out;
}

}  // namespace saab_detail

// Fits the four-stage model on training tensors. Stages are fit in order;
// each subsequent stage sees the data as transformed by the ones before it
// through the same code path used at inference time.
inline SaabModel saab_fit(const std::vector<Tensor4C>& tensors, double tau, bool nonneg = false) {
  if (tensors.size() < 2) throw DataError("saab_fit: need at least 2 training tensors");
  if (!(tau > 0.0 && tau <= 1.0)) throw DomainError("saab_fit: tau must be in (0, 1]");
  for (const Tensor4C& t : tensors)
    if (!t.same_shape(tensors.front()))
      throw DimensionError("saab_fit: tensor shapes disagree: " + t.shape_string() + " vs " +
                           tensors.front().shape_string());

  SaabModel model;
  model.nonneg = nonneg;
  model.in_m2 = 2 * tensors.front().m;
  model.in_np = tensors.front().n_p;
  model.in_n = tensors.front().n;
  model.in_k = tensors.front().k_amp;
  const int np = model.in_np, n = model.in_n, kk = model.in_k;
  const std::size_t n_samples = tensors.size();

  // ---- stage 1 ----
  {
    const std::size_t per = static_cast<std::size_t>(np) * n * kk;
    RMat fibers(n_samples * per, model.in_m2);
    std::vector<double> buf(model.in_m2);
    std::size_t row = 0;
    for (const Tensor4C& t : tensors)
      for (int i = 0; i < np; ++i)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < kk; ++k) {
            real_antenna_fiber(t, i, j, k, buf.data());
            for (int c = 0; c < model.in_m2; ++c) fibers(row, c) = buf[c];
            ++row;
          }
    model.stages[0] = saab_detail::fit_stage(fibers, "antenna", tau);
  }

  // Transformed copies of every sample after stage 1, laid out [a][i][j][k].
  const int c1 = model.stages[0].channels();
  std::vector<saab_detail::ShapedData> data(n_samples);
  {
    std::vector<double> fiber(model.in_m2), coef(c1);
    for (std::size_t s = 0; s < n_samples; ++s) {
      data[s].dims = {c1, np, n, kk};
      data[s].v.resize(static_cast<std::size_t>(c1) * np * n * kk);
      for (int i = 0; i < np; ++i)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < kk; ++k) {
            real_antenna_fiber(tensors[s], i, j, k, fiber.data());
            saab_detail::apply_stage(model.stages[0], nonneg, fiber.data(), coef.data());
            for (int a = 0; a < c1; ++a) data[s].v[data[s].idx(a, i, j, k)] = coef[a];
          }
    }
  }

  // ---- stage 2 (amplitude axis) ----
  {
    const std::size_t per = static_cast<std::size_t>(c1) * np * n;
    RMat fibers(n_samples * per, kk);
    std::size_t row = 0;
    for (std::size_t s = 0; s < n_samples; ++s)
      for (int a = 0; a < c1; ++a)
        for (int i = 0; i < np; ++i)
          for (int j = 0; j < n; ++j) {
            for (int k = 0; k < kk; ++k) fibers(row, k) = data[s].v[data[s].idx(a, i, j, k)];
            ++row;
          }
    model.stages[1] = saab_detail::fit_stage(fibers, "amplitude", tau);
  }
  const int c2 = model.stages[1].channels();
  {
    std::vector<double> fiber(kk), coef(c2);
    for (std::size_t s = 0; s < n_samples; ++s) {
      saab_detail::ShapedData next;
      next.dims = {c1, c2, np, n};
      next.v.resize(static_cast<std::size_t>(c1) * c2 * np * n);
      for (int a = 0; a < c1; ++a)
        for (int i = 0; i < np; ++i)
          for (int j = 0; j < n; ++j) {
            for (int k = 0; k < kk; ++k) fiber[k] = data[s].v[data[s].idx(a, i, j, k)];
            saab_detail::apply_stage(model.stages[1], nonneg, fiber.data(), coef.data());
            for (int b = 0; b < c2; ++b) next.v[next.idx(a, b, i, j)] = coef[b];
          }
      data[s] = std::move(next);
    }
  }

  // ---- stage 3 (phase axis) ----
  {
    const std::size_t per = static_cast<std::size_t>(c1) * c2 * np;
    RMat fibers(n_samples * per, n);
    std::size_t row = 0;
    for (std::size_t s = 0; s < n_samples; ++s)
      for (int a = 0; a < c1; ++a)
        for (int b = 0; b < c2; ++b)
          for (int i = 0; i < np; ++i) {
            for (int j = 0; j < n; ++j) fibers(row, j) = data[s].v[data[s].idx(a, b, i, j)];
            ++row;
          }
    model.stages[2] = saab_detail::fit_stage(fibers, "phase", tau);
  }
  const int c3 = model.stages[2].channels();
  {
    std::vector<double> fiber(n), coef(c3);
    for (std::size_t s = 0; s < n_samples; ++s) {
      saab_detail::ShapedData next;
      next.dims = {c1, c2, c3, np};
      next.v.resize(static_cast<std::size_t>(c1) * c2 * c3 * np);
      for (int a = 0; a < c1; ++a)
        for (int b = 0; b < c2; ++b)
          for (int i = 0; i < np; ++i) {
            for (int j = 0; j < n; ++j) fiber[j] = data[s].v[data[s].idx(a, b, i, j)];
            saab_detail::apply_stage(model.stages[2], nonneg, fiber.data(), coef.data());
            for (int c = 0; c < c3; ++c) next.v[next.idx(a, b, c, i)] = coef[c];
          }
      data[s] = std::move(next);
    }
  }

  // ---- stage 4 (pilot axis) ----
  {
    const std::size_t per = static_cast<std::size_t>(c1) * c2 * c3;
    RMat fibers(n_samples * per, np);
    std::size_t row = 0;
    for (std::size_t s = 0; s < n_samples; ++s)
      for (int a = 0; a < c1; ++a)
        for (int b = 0; b < c2; ++b)
          for (int c = 0; c < c3; ++c) {
            for (int i = 0; i < np; ++i) fibers(row, i) = data[s].v[data[s].idx(a, b, c, i)];
            ++row;
          }
    model.stages[3] = saab_detail::fit_stage(fibers, "pilot", tau);
  }
  return model;
}

// Deterministic feature extraction; shares the code path used at fit time.
inline RVec saab_apply(const SaabModel& model, const Tensor4C& tensor) {
  if (2 * tensor.m != model.in_m2 || tensor.n_p != model.in_np || tensor.n != model.in_n ||
      tensor.k_amp != model.in_k)
    throw DimensionError("saab_apply: tensor shape " + tensor.shape_string() +
                         " does not match model input");
  return saab_detail::transform(model, tensor);
}

}  // namespace stargl

#endif  // STARGL_SAAB_HPP_
