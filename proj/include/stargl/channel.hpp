#ifndef STARGL_CHANNEL_HPP_
#define STARGL_CHANNEL_HPP_

#include <cmath>
#include <cstdint>
#include <vector>

#include "stargl/config.hpp"
#include "stargl/rng.hpp"
#include "stargl/types.hpp"

namespace stargl {

// ULA steering vector a_N(psi) = [1, e^{j pi psi}, ..., e^{j(N-1) pi psi}]
// (half-wavelength spacing folded into the pi factor).
inline CVec steering_ula(int n_elems, double psi) {
  if (n_elems < 1) throw DomainError("steering_ula: n_elems must be >= 1");
  CVec a(n_elems);
  for (int k = 0; k < n_elems; ++k) a(k) = std::exp(kJ * (kPi * psi * k));
  return a;
}

// UPA steering for the RIS grid: a_{N_v}(sin varphi) kron a_{N_h}(cos varphi sin phi).
// Flat element index is v * N_h + h.
inline CVec steering_ris(const SystemConfig& cfg, double phi, double varphi) {
  const CVec av = steering_ula(cfg.n_v, std::sin(varphi));
  const CVec ah = steering_ula(cfg.n_h, std::cos(varphi) * std::sin(phi));
  CVec a(cfg.ris_elements());
  for (int v = 0; v < cfg.n_v; ++v)
    for (int h = 0; h < cfg.n_h; ++h) a(v * cfg.n_h + h) = av(v) * ah(h);
  return a;
}

// beta = L (d/d0)^{-zeta}
inline double path_loss(const ChannelParams& params, double d) {
  if (d <= 0.0) throw DomainError("path_loss: distance must be > 0, got " + std::to_string(d));
  return params.pathloss_ref_gain *
         std::pow(d / params.pathloss_ref_distance, -params.pathloss_exponent);
}

struct NlosPath {
  double phi_ris = 0.0;     // azimuth at the RIS
  double varphi_ris = 0.0;  // elevation at the RIS
  double psi_other = 0.0;   // AOD at the BS / AOA at the user, per link
  cxd gain{0.0, 0.0};
};

// All angles drawn for one realization. LOS angles are uniform on [0, pi]
// like the NLOS ones; geometry enters only through the path-loss distances.
struct AngleSet {
  double los_phi_arr_ris = 0.0, los_varphi_arr_ris = 0.0;  // arrival at RIS (BS->RIS link)
  double los_phi_dep_ris = 0.0, los_varphi_dep_ris = 0.0;  // departure at RIS (RIS->user links)
  double los_aod_bs = 0.0;
  double los_aoa_user_r = 0.0;
  double los_aoa_user_t = 0.0;
  std::vector<NlosPath> nlos_bs_ris;
  std::vector<NlosPath> nlos_user_r;
  std::vector<NlosPath> nlos_user_t;
};

struct ChannelRealization {
  CMat h_bs_ris;   // H, N x M
  CMat g_user_r;   // G_r, N x N_r (so G_r^H is the downlink N_r x N matrix)
  CMat g_user_t;   // G_t, N x N_t
  double beta_q = 0.0;
  double beta_r = 0.0;
  double beta_t = 0.0;
  AngleSet angles;
};

namespace detail {

// Rank-1 LOS factor: column (conjugated arrival-side vector) times row.
inline CMat rank1(const CVec& col_conj_side, const CVec& row_side) {
  return col_conj_side.conjugate() * row_side.transpose();
}

}  // namespace detail

// One Rician realization of (H, G_r, G_t); bit-reproducible for a fixed
// seed (fixed draw order: H angles/paths, then user r, then user t).
inline ChannelRealization draw_channel(const SystemConfig& cfg, const ChannelParams& params,
                                       std::uint64_t seed) {
  cfg.validate();
  params.validate();
  Rng rng(derive_seed(seed, 0x6368616eULL));  // "chan"
  const int n = cfg.ris_elements();

  ChannelRealization ch;
  ch.beta_q = path_loss(params, (cfg.pos_bs - cfg.pos_ris).norm());
  ch.beta_r = path_loss(params, (cfg.pos_user_r - cfg.pos_ris).norm());
  ch.beta_t = path_loss(params, (cfg.pos_user_t - cfg.pos_ris).norm());

  const double k = params.k_rice;
  const double w_los = std::sqrt(k / (k + 1.0));
  const double w_nlos = std::sqrt(1.0 / (k + 1.0));
  AngleSet& an = ch.angles;

  // H = sqrt(beta_q) (w_los Hbar + w_nlos Htilde), N x M.
  an.los_phi_arr_ris = rng.uniform(0.0, kPi);
  an.los_varphi_arr_ris = rng.uniform(0.0, kPi);
  an.los_aod_bs = rng.uniform(0.0, kPi);
  CMat h_bar = detail::rank1(steering_ris(cfg, an.los_phi_arr_ris, an.los_varphi_arr_ris),
                             steering_ula(cfg.m_bs, an.los_aod_bs));
  CMat h_tilde = CMat::Zero(n, cfg.m_bs);
  an.nlos_bs_ris.resize(params.paths_bs_ris);
  for (NlosPath& p : an.nlos_bs_ris) {
    p.phi_ris = rng.uniform(0.0, kPi);
    p.varphi_ris = rng.uniform(0.0, kPi);
    p.psi_other = rng.uniform(0.0, kPi);
    p.gain = rng.complex_gaussian(1.0 / params.paths_bs_ris);
    h_tilde += p.gain * detail::rank1(steering_ris(cfg, p.phi_ris, p.varphi_ris),
                                      steering_ula(cfg.m_bs, p.psi_other));
  }
  ch.h_bs_ris = std::sqrt(ch.beta_q) * (w_los * h_bar + w_nlos * h_tilde);

  // Shared LOS departure angles at the RIS for both user links.
  an.los_phi_dep_ris = rng.uniform(0.0, kPi);
  an.los_varphi_dep_ris = rng.uniform(0.0, kPi);
  const CVec a_dep = steering_ris(cfg, an.los_phi_dep_ris, an.los_varphi_dep_ris);

  // G_l^H = sqrt(beta_l)(w_los conj(a_user) a_dep^T + w_nlos sum_l z conj(a_user,l) a_ris,l^T),
  // shape N_l x N; stored as G_l = (G_l^H)^H.
  auto draw_user_link = [&](int n_ant, int n_paths, double beta, double& los_aoa,
                            std::vector<NlosPath>& paths) {
    los_aoa = rng.uniform(0.0, kPi);
    CMat g_h_bar = detail::rank1(steering_ula(n_ant, los_aoa), a_dep);
    CMat g_h_tilde = CMat::Zero(n_ant, n);
    paths.resize(n_paths);
    for (NlosPath& p : paths) {
      p.psi_other = rng.uniform(0.0, kPi);
      p.phi_ris = rng.uniform(0.0, kPi);
      p.varphi_ris = rng.uniform(0.0, kPi);
      p.gain = rng.complex_gaussian(1.0 / n_paths);
      g_h_tilde += p.gain * detail::rank1(steering_ula(n_ant, p.psi_other),
                                          steering_ris(cfg, p.phi_ris, p.varphi_ris));
    }
    CMat g_h = std::sqrt(beta) * (w_los * g_h_bar + w_nlos * g_h_tilde);
    return CMat(g_h.adjoint());
  };

  ch.g_user_r =
      draw_user_link(cfg.n_r, params.paths_ris_user_r, ch.beta_r, an.los_aoa_user_r, an.nlos_user_r);
  ch.g_user_t =
      draw_user_link(cfg.n_t, params.paths_ris_user_t, ch.beta_t, an.los_aoa_user_t, an.nlos_user_t);
  return ch;
}

}  // namespace stargl

#endif  // STARGL_CHANNEL_HPP_
