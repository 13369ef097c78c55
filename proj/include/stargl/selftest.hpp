#ifndef STARGL_SELFTEST_HPP_
#define STARGL_SELFTEST_HPP_

#include <cstdio>
#include <functional>
#include <string>

#include "stargl/stargl.hpp"

namespace stargl {

// Fast built-in checks of the worked examples behind each operation, so a
// fresh checkout can be sanity-checked without the full test suite:
// `starris_gl selftest`. Returns the number of failures.
inline int run_selftest() {
  int failures = 0;
  auto check = [&](const char* name, bool ok) {
    std::printf("[%s] %s\n", ok ? "PASS" : "FAIL", name);
    if (!ok) ++failures;
  };
  auto near = [](double a, double b, double tol) { return std::abs(a - b) <= tol; };

  // steering vectors
  {
    const CVec a1 = steering_ula(1, 0.7);
    check("steering_ula single element", a1.size() == 1 && std::abs(a1(0) - cxd(1, 0)) < 1e-12);
    const CVec a2 = steering_ula(2, 1.0);
    check("steering_ula e^{j pi} = -1", std::abs(a2(1) - cxd(-1, 0)) < 1e-12);
    const CVec a4 = steering_ula(4, 0.5);
    bool ok = true;
    for (int k = 0; k < 4; ++k)
      ok = ok && near(wrap_phase(std::arg(a4(k))), wrap_phase(kPi * 0.5 * k), 1e-12);
    check("steering_ula quarter-turn phases", ok);
    SystemConfig sc;
    sc.n_h = 2; sc.n_v = 2; sc.m_bs = 1;
    const CVec ar = steering_ris(sc, kPi / 2, 0.0);
    check("steering_ris 2x2 kron expansion",
          std::abs(ar(0) - cxd(1, 0)) < 1e-12 && std::abs(ar(1) - cxd(-1, 0)) < 1e-12 &&
              std::abs(ar(2) - cxd(1, 0)) < 1e-12 && std::abs(ar(3) - cxd(-1, 0)) < 1e-12);
    sc.n_h = 3; sc.n_v = 2;
    const CVec a0 = steering_ris(sc, 0.0, 0.0);
    check("steering_ris zero angles all ones", (a0.array() - cxd(1, 0)).abs().maxCoeff() < 1e-12);
  }

  // path loss
  {
    ChannelParams p;
    check("path_loss reference distance", near(path_loss(p, 1.0), 0.1, 1e-15));
    check("path_loss at 20 m", near(path_loss(p, 20.0), 2.5e-4, 1e-12));
    ChannelParams flat = p;
    flat.pathloss_exponent = 0.0;
    check("path_loss zero exponent", near(path_loss(flat, 123.0), 0.1, 1e-15));
    bool threw = false;
    try {
      path_loss(p, 0.0);
    } catch (const DomainError&) {
      threw = true;
    }
    check("path_loss rejects d <= 0", threw);
  }

  // channel determinism
  {
    SystemConfig sc;
    ChannelParams p;
    const ChannelRealization c1 = draw_channel(sc, p, 7);
    const ChannelRealization c2 = draw_channel(sc, p, 7);
    check("draw_channel bit-reproducible", c1.h_bs_ris == c2.h_bs_ris &&
                                               c1.g_user_r == c2.g_user_r &&
                                               c1.g_user_t == c2.g_user_t);
  }

  // STAR-RIS coupling and codebook
  {
    StarRisConfig c;
    c.theta_r = RVec::Zero(2);
    c.theta_t = RVec::Zero(2);
    c.alpha_r = RVec::Constant(2, 0.6);
    c.alpha_t = RVec::Constant(2, 0.8);
    const CMat phi = phi_matrix(c, Side::r);
    check("phi_matrix diagonal 3-4-5", std::abs(phi(0, 0) - cxd(0.6, 0)) < 1e-12 &&
                                           std::abs(phi(0, 1)) == 0.0);
    bool threw = false;
    try {
      StarRisConfig bad = c;
      bad.alpha_r(0) = 1.0;
      bad.alpha_t(0) = 0.0;
      phi_matrix(bad, Side::t);
    } catch (const ConstraintError&) {
      threw = true;
    }
    check("phi_matrix rejects alpha = 0 boundary", threw);

    const PhaseCodebook cb1 = dft_codebook(1, 1);
    check("dft_codebook trivial", cb1.size() == 1 && std::abs(cb1.codewords[0](0) - cxd(1, 0)) < 1e-12);
    const PhaseCodebook cb2 = dft_codebook(2, 1);
    check("dft_codebook 2x1 codewords",
          std::abs(cb2.codewords[1](1) - cxd(-1, 0)) < 1e-12 &&
              std::abs(cb2.codewords[0](1) - cxd(1, 0)) < 1e-12);
    const PhaseCodebook cb4 = dft_codebook(2, 2);
    bool gram_ok = cb4.size() == 4;
    for (int i = 0; i < 4 && gram_ok; ++i)
      for (int k = 0; k < 4; ++k) {
        const double g = std::abs(cb4.codewords[i].dot(cb4.codewords[k]));
        gram_ok = gram_ok && near(g, i == k ? 4.0 : 0.0, 1e-9);
      }
    check("dft_codebook 2x2 Gram = 4I", gram_ok);

    const AmplitudeGrid g1 = amplitude_grid(1);
    check("amplitude_grid symmetric split",
          near(g1.alpha_r[0] * g1.alpha_r[0], 0.5, 1e-12) && near(g1.alpha_t[0], g1.alpha_r[0], 1e-12));
    const AmplitudeGrid g3 = amplitude_grid(3);
    bool grid_ok = near(g3.alpha_r[0] * g3.alpha_r[0], 0.25, 1e-12) &&
                   near(g3.alpha_r[1] * g3.alpha_r[1], 0.5, 1e-12) &&
                   near(g3.alpha_r[2] * g3.alpha_r[2], 0.75, 1e-12);
    for (int k = 0; k < 3; ++k)
      grid_ok = grid_ok && near(g3.alpha_r[k] * g3.alpha_r[k] + g3.alpha_t[k] * g3.alpha_t[k], 1.0, 1e-12);
    check("amplitude_grid levels and coupling", grid_ok);
  }

  // pilots and sounding shapes
  {
    SystemConfig sc;
    sc.n_r = 1; sc.n_t = 1;
    const PilotPlan plan = make_pilots(sc);
    const CMat gram = plan.p * plan.p.adjoint();
    check("pilot rows orthogonal", std::abs(gram(0, 1)) < 1e-12 && std::abs(gram(1, 0)) < 1e-12);
    check("pilot scaling c*I", near(gram(0, 0).real(), gram(1, 1).real(), 1e-12));

    SystemConfig s8;
    const ChannelRealization ch = draw_channel(s8, ChannelParams{}, 3);
    const PhaseCodebook cb = dft_codebook(s8.n_h, s8.n_v);
    const AmplitudeGrid grid = amplitude_grid(4);
    const ReceivedPilotTensor t = sound(ch, s8, make_pilots(s8), cb, grid, 5);
    check("sound tensor shape 8x2x16x4",
          t.r.m == 8 && t.r.n_p == 2 && t.r.n == 16 && t.r.k_amp == 4);
    const ReceivedPilotTensor t2 = sound(ch, s8, make_pilots(s8), cb, grid, 5);
    check("sound deterministic per seed", t.r.data == t2.r.data);
  }

  // rate arithmetic on a hand-built scalar link
  {
    SystemConfig sc;
    sc.m_bs = 1; sc.n_h = 1; sc.n_v = 1; sc.sigma2_dl = 1.0; sc.p_t = 1.0;
    ChannelRealization ch;
    ch.h_bs_ris = CMat::Ones(1, 1);
    ch.g_user_r = CMat::Ones(1, 1);
    ch.g_user_t = CMat::Ones(1, 1);
    StarRisConfig ris;
    ris.theta_r = RVec::Zero(1);
    ris.theta_t = RVec::Zero(1);
    ris.alpha_r = RVec::Constant(1, std::sqrt(0.5));
    ris.alpha_t = RVec::Constant(1, std::sqrt(0.5));
    CVec w = CVec::Zero(1);
    check("rate zero signal", rate(ch, ris, w, Side::r, 1.0) == 0.0);
    w(0) = std::sqrt(2.0) * std::sqrt(0.5) / ris.alpha_r(0) / 1.0;  // |h_eff w|^2 = 1 => snr 1
    // direct construction: h_eff = conj(h) alpha g = alpha; pick w so snr = 1 and 3
    w(0) = 1.0 / ris.alpha_r(0);
    check("rate snr=1 is 1 bit", near(rate(ch, ris, w, Side::r, 1.0), 1.0, 1e-12));
    w(0) = std::sqrt(3.0) / ris.alpha_r(0);
    check("rate snr=3 is 2 bits", near(rate(ch, ris, w, Side::r, 1.0), 2.0, 1e-12));
  }

  // RFT hand-enumerated example
  {
    RVec z(4), y(4);
    z << 1, 2, 3, 4;
    y << 1, 2, 3, 4;
    const RftScore s = rft_score(z, y, 3);
    check("rft (1,2,3,4) WMSE 0.25 exactly", s.loss == 0.25);
    RVec yc = RVec::Constant(4, 3.0);
    check("rft constant target zero loss", rft_score(z, yc, 3).loss == 0.0);
    RVec z2(4), y2(4);
    z2 << 0, 0, 1, 1;
    y2 << 0, 0, 1, 1;
    check("rft perfect split", rft_score(z2, y2, 1).loss == 0.0);
  }

  // GBDT conventions
  {
    GbdtEnsemble e;
    e.trees.resize(1);
    e.trees[0].nodes = {TreeNode{0, 0.5, 1, 2, 0.0}, TreeNode{-1, 0, -1, -1, 1.0},
                        TreeNode{-1, 0, -1, -1, -1.0}};
    check("gbdt_flops T=1 depth=1 is 4", gbdt_flops(e) == 4);
    GbdtEnsemble none;
    check("gbdt_flops zero trees is 1", gbdt_flops(none) == 1);

    RMat x(6, 1);
    x << 0, 1, 2, 3, 4, 5;
    RVec y = RVec::Constant(6, 2.5);
    GbdtConfig p;
    p.rounds = 3;
    p.row_subsample = 1.0;
    p.feature_subsample = 1.0;
    const GbdtEnsemble fit = gbdt_fit(x, y, p, 1);
    check("gbdt constant target exact", gbdt_predict(fit, RVec::Constant(1, 9.0)) == 2.5);
  }

  // codec round trip pieces
  {
    SystemConfig sc;
    sc.m_bs = 2; sc.n_h = 2; sc.n_v = 1;
    const TargetCodec codec{2, 2};
    RVec u = RVec::Zero(codec.dim());
    u(codec.cos_r(0)) = 0.0; u(codec.sin_r(0)) = 1.0;   // theta = pi/2
    u(codec.cos_r(1)) = 2.0; u(codec.sin_r(1)) = 0.0;   // theta = 0 despite magnitude
    u(codec.cos_t(0)) = 1.0; u(codec.cos_t(1)) = 1.0;
    u(codec.alpha_r_at(0)) = 0.6; u(codec.alpha_r_at(1)) = 0.8;
    u(codec.w_re(0)) = 3.0;
    const PrecodingSolution sol = decode_targets(u, codec, sc);
    check("decode atan2 (0,1) -> pi/2", near(sol.ris.theta_r(0), kPi / 2, 1e-12));
    check("decode atan2 magnitude-blind", sol.ris.theta_r(1) == 0.0);
    check("decode precoder rescaled to sqrt(P_t)", near(sol.w.squaredNorm(), sc.p_t, 1e-9 * sc.p_t));
  }

  std::printf("%s: %d check(s) failed\n", failures == 0 ? "selftest OK" : "selftest FAILED", failures);
  return failures;
}

}  // namespace stargl

#endif  // STARGL_SELFTEST_HPP_
