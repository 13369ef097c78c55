#ifndef STARGL_SOUNDING_HPP_
#define STARGL_SOUNDING_HPP_

#include <cstdint>
#include <tuple>
#include <vector>

#include "stargl/channel.hpp"
#include "stargl/config.hpp"
#include "stargl/rng.hpp"
#include "stargl/star_ris.hpp"
#include "stargl/tensor.hpp"
#include "stargl/types.hpp"

namespace stargl {

// Orthogonal uplink pilots. Column i is the pilot vector for snapshot i
// across the stacked user antennas; rows [0, N_r) belong to user r and
// rows [N_r, N_r+N_t) to user t. Built from the N_p-point DFT with each
// user's rows scaled so its pilot energy is 1 per symbol.
struct PilotPlan {
  CMat p;        // (N_r + N_t) x N_p
  int n_r = 0;
  int n_t = 0;
  double power_scale = 1.0;  // applied at sounding time (pilot_snr_db override)

  int n_p() const { return static_cast<int>(p.cols()); }
};

inline PilotPlan make_pilots(const SystemConfig& cfg) {
  PilotPlan plan;
  plan.n_r = cfg.n_r;
  plan.n_t = cfg.n_t;
  const int n_p = cfg.n_r + cfg.n_t;
  plan.p.resize(n_p, n_p);
  for (int a = 0; a < n_p; ++a) {
    const int n_user = (a < cfg.n_r) ? cfg.n_r : cfg.n_t;
    const double scale = 1.0 / std::sqrt(static_cast<double>(n_user));
    for (int b = 0; b < n_p; ++b)
      plan.p(a, b) = scale * std::exp(-kJ * (2.0 * kPi * a * b / n_p));
  }
  return plan;
}

// Table-ordered sweep: pilot index outermost, codebook index, amplitude
// level innermost.
struct SoundingEntry {
  int pilot = 0;
  int codeword = 0;
  int level = 0;
};

using SoundingSchedule = std::vector<SoundingEntry>;

inline SoundingSchedule make_schedule(int n_p, int n, int k_amp) {
  SoundingSchedule s;
  s.reserve(static_cast<std::size_t>(n_p) * n * k_amp);
  for (int i = 0; i < n_p; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < k_amp; ++k) s.push_back({i, j, k});
  return s;
}

// y = H^H Phi_r G_r p_r + H^H Phi_t G_t p_t + v,  v ~ CN(0, sigma2_ul I_M).
inline CVec uplink_snapshot(const ChannelRealization& ch, const StarRisConfig& config,
                            const CVec& pilot, double sigma2_ul, std::uint64_t noise_seed) {
  config.validate();
  const int n_r = static_cast<int>(ch.g_user_r.cols());
  const int n_t = static_cast<int>(ch.g_user_t.cols());
  if (pilot.size() != n_r + n_t)
    throw DimensionError("uplink_snapshot: pilot length " + std::to_string(pilot.size()) +
                         " != N_r+N_t = " + std::to_string(n_r + n_t));
  const CVec p_r = pilot.head(n_r);
  const CVec p_t = pilot.tail(n_t);
  const CVec d_r = phi_diagonal(config, Side::r);
  const CVec d_t = phi_diagonal(config, Side::t);
  const CVec via_ris = d_r.cwiseProduct(ch.g_user_r * p_r) + d_t.cwiseProduct(ch.g_user_t * p_t);
  CVec y = ch.h_bs_ris.adjoint() * via_ris;
  if (sigma2_ul > 0.0) {
    Rng rng(noise_seed);
    for (Eigen::Index mm = 0; mm < y.size(); ++mm) y(mm) += rng.complex_gaussian(sigma2_ul);
  }
  return y;
}

// Runs the full hierarchical sweep. Noise is seeded per (i, j, k) so
// results do not depend on fill order.
inline ReceivedPilotTensor sound_with_schedule(const ChannelRealization& ch, const SystemConfig& cfg,
                                               const PilotPlan& plan, const PhaseCodebook& codebook,
                                               const AmplitudeGrid& grid,
                                               const SoundingSchedule& schedule,
                                               std::uint64_t noise_seed) {
  const int n = cfg.ris_elements();
  if (codebook.size() != n)
    throw DimensionError("sound: codebook size " + std::to_string(codebook.size()) +
                         " != N = " + std::to_string(n));
  ReceivedPilotTensor out;
  out.noise_seed = noise_seed;
  out.r = Tensor4C(cfg.m_bs, plan.n_p(), n, grid.size());
  for (const SoundingEntry& e : schedule) {
    const StarRisConfig ris =
        uniform_config(codebook.codewords[e.codeword], grid.alpha_r[e.level], grid.alpha_t[e.level]);
    const CVec pilot = plan.power_scale * plan.p.col(e.pilot);
    const CVec y = uplink_snapshot(ch, ris, pilot, cfg.sigma2_ul,
                                   derive_seed(noise_seed, e.pilot, e.codeword, e.level));
    for (int mm = 0; mm < cfg.m_bs; ++mm) out.r(mm, e.pilot, e.codeword, e.level) = y(mm);
  }
  return out;
}

inline ReceivedPilotTensor sound(const ChannelRealization& ch, const SystemConfig& cfg,
                                 const PilotPlan& plan, const PhaseCodebook& codebook,
                                 const AmplitudeGrid& grid, std::uint64_t noise_seed) {
  return sound_with_schedule(ch, cfg, plan, codebook, grid,
                             make_schedule(plan.n_p(), cfg.ris_elements(), grid.size()), noise_seed);
}

// Pilot power scale from the optional pilot_snr_db override: pilots are
// unit-energy per user per symbol by construction, so the per-user receive
// SNR target is scale^2 / sigma2_ul.
inline double pilot_power_scale(const SoundingConfig& snd, double sigma2_ul) {
  if (!snd.pilot_snr_db) return 1.0;
  return std::sqrt(sigma2_ul * std::pow(10.0, *snd.pilot_snr_db / 10.0));
}

}  // namespace stargl

#endif  // STARGL_SOUNDING_HPP_
