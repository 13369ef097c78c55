#ifndef STARGL_CODEC_HPP_
#define STARGL_CODEC_HPP_

#include <cmath>

#include "stargl/config.hpp"
#include "stargl/rate_oracle.hpp"
#include "stargl/star_ris.hpp"
#include "stargl/types.hpp"

namespace stargl {

// Regression target layout, in this order:
//   [cos theta_r (N), sin theta_r (N), cos theta_t (N), sin theta_t (N),
//    alpha_r (N), Re w (M), Im w (M)]   ->  D = 5N + 2M.
// Phases use the trigonometric embedding; amplitudes ride along because the
// decoder needs them to rebuild a full ES configuration.
struct TargetCodec {
  int n = 0;  // RIS elements
  int m = 0;  // BS antennas

  int dim() const { return 5 * n + 2 * m; }

  int cos_r(int e) const { return e; }
  int sin_r(int e) const { return n + e; }
  int cos_t(int e) const { return 2 * n + e; }
  int sin_t(int e) const { return 3 * n + e; }
  int alpha_r_at(int e) const { return 4 * n + e; }
  int w_re(int mm) const { return 5 * n + mm; }
  int w_im(int mm) const { return 5 * n + m + mm; }
};

struct DecodeStats {
  int degenerate_phases = 0;  // (cos, sin) pairs with norm < 1e-9
  int zero_precoders = 0;     // all-zero predicted w replaced by a beacon
};

inline RVec encode_targets(const PrecodingSolution& sol, const TargetCodec& codec) {
  if (sol.ris.elements() != codec.n || static_cast<int>(sol.w.size()) != codec.m)
    throw DimensionError("encode_targets: solution shape does not match codec");
  RVec u(codec.dim());
  for (int e = 0; e < codec.n; ++e) {
    u(codec.cos_r(e)) = std::cos(sol.ris.theta_r(e));
    u(codec.sin_r(e)) = std::sin(sol.ris.theta_r(e));
    u(codec.cos_t(e)) = std::cos(sol.ris.theta_t(e));
    u(codec.sin_t(e)) = std::sin(sol.ris.theta_t(e));
    u(codec.alpha_r_at(e)) = sol.ris.alpha_r(e);
  }
  for (int mm = 0; mm < codec.m; ++mm) {
    u(codec.w_re(mm)) = sol.w(mm).real();
    u(codec.w_im(mm)) = sol.w(mm).imag();
  }
  return u;
}

// Rebuilds a feasible solution from a (possibly noisy) prediction:
// theta = atan2(sin, cos); alpha_r clipped into the open ES interval;
// w rescaled to exactly sqrt(P_t). Rates are left at zero -- this function
// is on the CSI-free path and never sees a channel.
inline PrecodingSolution decode_targets(const RVec& u, const TargetCodec& codec,
                                        const SystemConfig& cfg, DecodeStats* stats = nullptr) {
  if (static_cast<int>(u.size()) != codec.dim())
    throw DimensionError("decode_targets: vector length " + std::to_string(u.size()) +
                         " != D = " + std::to_string(codec.dim()));
  constexpr double eps_alpha = 1e-3;
  const double alpha_max = std::sqrt(1.0 - eps_alpha * eps_alpha);

  PrecodingSolution sol;
  sol.ris.theta_r.resize(codec.n);
  sol.ris.theta_t.resize(codec.n);
  sol.ris.alpha_r.resize(codec.n);
  sol.ris.alpha_t.resize(codec.n);
  auto angle_of = [&](double c, double s) {
    if (c * c + s * s < 1e-18) {  // norm < 1e-9
      if (stats) stats->degenerate_phases += 1;
      return 0.0;
    }
    return wrap_phase(std::atan2(s, c));
  };
  for (int e = 0; e < codec.n; ++e) {
    sol.ris.theta_r(e) = angle_of(u(codec.cos_r(e)), u(codec.sin_r(e)));
    sol.ris.theta_t(e) = angle_of(u(codec.cos_t(e)), u(codec.sin_t(e)));
    const double ar = std::clamp(u(codec.alpha_r_at(e)), eps_alpha, alpha_max);
    sol.ris.alpha_r(e) = ar;
    sol.ris.alpha_t(e) = std::sqrt(1.0 - ar * ar);
  }
  CVec w(codec.m);
  for (int mm = 0; mm < codec.m; ++mm) w(mm) = cxd(u(codec.w_re(mm)), u(codec.w_im(mm)));
  const double norm = w.norm();
  if (norm <= 0.0) {
    if (stats) stats->zero_precoders += 1;
    w = CVec::Zero(codec.m);
    w(0) = 1.0;
  }
  sol.w = w * (std::sqrt(cfg.p_t) / w.norm());
  sol.ris.validate();
  return sol;
}

}  // namespace stargl

#endif  // STARGL_CODEC_HPP_
