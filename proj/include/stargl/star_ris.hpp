#ifndef STARGL_STAR_RIS_HPP_
#define STARGL_STAR_RIS_HPP_

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "stargl/types.hpp"

namespace stargl {

enum class Side { r, t };

inline const char* side_name(Side s) { return s == Side::r ? "r" : "t"; }

// Per-element transmission/reflection coefficients under energy splitting:
// alpha_r^2 + alpha_t^2 = 1 element-wise, alpha in (0, 1], theta in [0, 2pi).
struct StarRisConfig {
  RVec theta_r;
  RVec theta_t;
  RVec alpha_r;
  RVec alpha_t;

  int elements() const { return static_cast<int>(theta_r.size()); }

  void validate() const {
    const auto n = theta_r.size();
    if (theta_t.size() != n || alpha_r.size() != n || alpha_t.size() != n)
      throw DimensionError("StarRisConfig: field lengths disagree");
    for (Eigen::Index i = 0; i < n; ++i) {
      if (!(alpha_r(i) > 0.0 && alpha_r(i) <= 1.0))
        throw ConstraintError("StarRisConfig: alpha_r out of (0,1] at element " + std::to_string(i));
      if (!(alpha_t(i) > 0.0 && alpha_t(i) <= 1.0))
        throw ConstraintError("StarRisConfig: alpha_t out of (0,1] at element " + std::to_string(i));
      const double coupling = alpha_r(i) * alpha_r(i) + alpha_t(i) * alpha_t(i);
      if (std::abs(coupling - 1.0) > 1e-9)
        throw ConstraintError("StarRisConfig: alpha_r^2+alpha_t^2 != 1 at element " +
                              std::to_string(i) + " (got " + std::to_string(coupling) + ")");
      if (!(theta_r(i) >= 0.0 && theta_r(i) < 2.0 * kPi))
        throw ConstraintError("StarRisConfig: theta_r out of [0,2pi) at element " + std::to_string(i));
      if (!(theta_t(i) >= 0.0 && theta_t(i) < 2.0 * kPi))
        throw ConstraintError("StarRisConfig: theta_t out of [0,2pi) at element " + std::to_string(i));
    }
  }
};

inline double wrap_phase(double theta) {
  double t = std::fmod(theta, 2.0 * kPi);
  if (t < 0.0) t += 2.0 * kPi;
  if (t >= 2.0 * kPi) t = 0.0;  // fmod rounding at the boundary
  return t + 0.0;               // negative zero -> positive zero
}

// Phi_side = diag(alpha_side,n e^{j theta_side,n}).
inline CMat phi_matrix(const StarRisConfig& config, Side side) {
  config.validate();
  const RVec& alpha = (side == Side::r) ? config.alpha_r : config.alpha_t;
  const RVec& theta = (side == Side::r) ? config.theta_r : config.theta_t;
  const int n = config.elements();
  CMat phi = CMat::Zero(n, n);
  for (int i = 0; i < n; ++i) phi(i, i) = alpha(i) * std::exp(kJ * theta(i));
  return phi;
}

// Diagonal of phi_matrix without materializing the N x N matrix.
inline CVec phi_diagonal(const StarRisConfig& config, Side side) {
  const RVec& alpha = (side == Side::r) ? config.alpha_r : config.alpha_t;
  const RVec& theta = (side == Side::r) ? config.theta_r : config.theta_t;
  CVec d(alpha.size());
  for (Eigen::Index i = 0; i < alpha.size(); ++i) d(i) = alpha(i) * std::exp(kJ * theta(i));
  return d;
}

// DFT phase codebook over the N_h x N_v grid. Codeword (n_h, n_v) has entry
// exp(-j 2pi (n_v v / N_v + n_h h / N_h)) at flat element index v*N_h + h,
// matching the steering_ris element ordering. Codeword flat index is
// n_v * N_h + n_h.
struct PhaseCodebook {
  int n_h = 0;
  int n_v = 0;
  std::vector<CVec> codewords;

  int size() const { return static_cast<int>(codewords.size()); }
  int flat_index(int nh, int nv) const { return nv * n_h + nh; }
  const CVec& at(int nh, int nv) const { return codewords[flat_index(nh, nv)]; }
};

inline PhaseCodebook dft_codebook(int n_h, int n_v) {
  if (n_h < 1 || n_v < 1) throw DomainError("dft_codebook: grid dims must be >= 1");
  PhaseCodebook cb;
  cb.n_h = n_h;
  cb.n_v = n_v;
  cb.codewords.resize(static_cast<std::size_t>(n_h) * n_v);
  for (int nv = 0; nv < n_v; ++nv) {
    for (int nh = 0; nh < n_h; ++nh) {
      CVec c(n_h * n_v);
      for (int v = 0; v < n_v; ++v) {
        for (int h = 0; h < n_h; ++h) {
          const double phase = 2.0 * kPi * (static_cast<double>(nv) * v / n_v +
                                            static_cast<double>(nh) * h / n_h);
          c(v * n_h + h) = std::exp(-kJ * phase);
        }
      }
      cb.codewords[cb.flat_index(nh, nv)] = std::move(c);
    }
  }
  return cb;
}

// K_amp energy-splitting levels, uniform in alpha_r^2 and strictly inside
// (0, 1) so both sides stay in the open interval.
struct AmplitudeGrid {
  std::vector<double> alpha_r;
  std::vector<double> alpha_t;

  int size() const { return static_cast<int>(alpha_r.size()); }
};

inline AmplitudeGrid amplitude_grid(int k_amp) {
  if (k_amp < 1) throw DomainError("amplitude_grid: K_amp must be >= 1");
  AmplitudeGrid g;
  g.alpha_r.reserve(k_amp);
  g.alpha_t.reserve(k_amp);
  for (int k = 1; k <= k_amp; ++k) {
    const double ar2 = static_cast<double>(k) / (k_amp + 1);
    g.alpha_r.push_back(std::sqrt(ar2));
    g.alpha_t.push_back(std::sqrt(1.0 - ar2));
  }
  return g;
}

// CSV image of a codebook for inspection: flat index, grid indices, then the
// per-element phases in radians.
inline std::string codebook_csv(const PhaseCodebook& cb) {
  std::string out = "flat_index,n_h,n_v";
  for (int e = 0; e < cb.n_h * cb.n_v; ++e) out += ",phase_" + std::to_string(e);
  out += "\n";
  char buf[64];
  for (int nv = 0; nv < cb.n_v; ++nv)
    for (int nh = 0; nh < cb.n_h; ++nh) {
      out += std::to_string(cb.flat_index(nh, nv)) + "," + std::to_string(nh) + "," +
             std::to_string(nv);
      const CVec& c = cb.at(nh, nv);
      for (Eigen::Index e = 0; e < c.size(); ++e) {
        std::snprintf(buf, sizeof(buf), ",%.10g", wrap_phase(std::arg(c(e))));
        out += buf;
      }
      out += "\n";
    }
  return out;
}

// Uniform ES config: same phases from one codeword on both sides, one
// amplitude level applied to all N elements. This is the shape swept during
// sounding and used as the BCD starting point.
inline StarRisConfig uniform_config(const CVec& codeword, double alpha_r, double alpha_t) {
  const int n = static_cast<int>(codeword.size());
  StarRisConfig cfg;
  cfg.theta_r.resize(n);
  cfg.theta_t.resize(n);
  cfg.alpha_r = RVec::Constant(n, alpha_r);
  cfg.alpha_t = RVec::Constant(n, alpha_t);
  for (int i = 0; i < n; ++i) {
    const double th = wrap_phase(std::arg(codeword(i)));
    cfg.theta_r(i) = th;
    cfg.theta_t(i) = th;
  }
  return cfg;
}

}  // namespace stargl

#endif  // STARGL_STAR_RIS_HPP_
