#include <catch2/catch_amalgamated.hpp>

#include "stargl/codec.hpp"
#include "stargl/sweep.hpp"

using namespace stargl;

TEST_CASE("encode_targets worked examples", "[codec]") {
  const TargetCodec codec{3, 2};
  REQUIRE(codec.dim() == 5 * 3 + 2 * 2);

  PrecodingSolution sol;
  sol.ris.theta_r = RVec::Zero(3);
  sol.ris.theta_t = RVec::Constant(3, kPi / 2);
  sol.ris.alpha_r = RVec::Constant(3, 0.6);
  sol.ris.alpha_t = RVec::Constant(3, 0.8);
  sol.w = CVec::Zero(2);
  sol.w(0) = cxd(1.0, -2.0);

  const RVec u = encode_targets(sol, codec);
  for (int e = 0; e < 3; ++e) {
    REQUIRE(u(codec.cos_r(e)) == 1.0);
    REQUIRE(u(codec.sin_r(e)) == 0.0);
    REQUIRE(u(codec.cos_t(e)) == Catch::Approx(0.0).margin(1e-15));
    REQUIRE(u(codec.sin_t(e)) == Catch::Approx(1.0).margin(1e-15));
    REQUIRE(u(codec.alpha_r_at(e)) == 0.6);
    // trig embedding is on the unit circle by construction
    REQUIRE(u(codec.cos_r(e)) * u(codec.cos_r(e)) + u(codec.sin_r(e)) * u(codec.sin_r(e)) ==
            Catch::Approx(1.0).margin(1e-15));
  }
  REQUIRE(u(codec.w_re(0)) == 1.0);
  REQUIRE(u(codec.w_im(0)) == -2.0);
}

TEST_CASE("decode_targets worked examples", "[codec]") {
  SystemConfig cfg;
  cfg.m_bs = 2;
  cfg.n_h = 2;
  cfg.n_v = 1;
  const TargetCodec codec{2, 2};

  RVec u = RVec::Zero(codec.dim());
  u(codec.cos_r(0)) = 0.0;
  u(codec.sin_r(0)) = 1.0;   // pi/2
  u(codec.cos_r(1)) = 2.0;   // unnormalized (2, 0) -> theta 0
  u(codec.cos_t(0)) = 1.0;   // theta_t(1) pair left at (0, 0): degenerate
  u(codec.alpha_r_at(0)) = 0.6;
  u(codec.alpha_r_at(1)) = 5.0;  // clipped to the upper end
  u(codec.w_re(0)) = 7.0;        // wrong norm, rescaled
  DecodeStats stats;
  const PrecodingSolution sol = decode_targets(u, codec, cfg, &stats);

  REQUIRE(sol.ris.theta_r(0) == Catch::Approx(kPi / 2).margin(1e-12));
  REQUIRE(sol.ris.theta_r(1) == 0.0);
  REQUIRE(sol.ris.alpha_r(0) == Catch::Approx(0.6).margin(1e-12));
  REQUIRE(sol.ris.alpha_r(1) == Catch::Approx(std::sqrt(1.0 - 1e-6)).margin(1e-12));
  REQUIRE(sol.ris.alpha_t(1) == Catch::Approx(1e-3).margin(1e-12));
  REQUIRE(sol.w.squaredNorm() == Catch::Approx(cfg.p_t).epsilon(1e-12));
  // (cos, sin) ~ (0, 0) counts as degenerate and falls back to theta = 0
  REQUIRE(stats.degenerate_phases == 1);
  REQUIRE(sol.ris.theta_t(1) == 0.0);
  REQUIRE_THROWS_AS(decode_targets(RVec::Zero(3), codec, cfg), DimensionError);
}

TEST_CASE("decode handles an all-zero precoder prediction", "[codec]") {
  SystemConfig cfg;
  cfg.m_bs = 2;
  const TargetCodec codec{1, 2};
  RVec u = RVec::Zero(codec.dim());
  u(codec.cos_r(0)) = 1.0;
  u(codec.cos_t(0)) = 1.0;
  u(codec.alpha_r_at(0)) = 0.5;
  DecodeStats stats;
  const PrecodingSolution sol = decode_targets(u, codec, cfg, &stats);
  REQUIRE(stats.zero_precoders == 1);
  REQUIRE(sol.w.squaredNorm() == Catch::Approx(cfg.p_t).epsilon(1e-12));
}

TEST_CASE("encode/decode round trip preserves the achieved rate", "[codec]") {
  SystemConfig cfg;
  cfg.m_bs = 4;
  cfg.n_h = 2;
  cfg.n_v = 2;
  const TargetCodec codec{4, 4};
  const PhaseCodebook cb = dft_codebook(2, 2);
  const AmplitudeGrid grid = amplitude_grid(6);
  ChannelParams params;
  for (int seed = 0; seed < 20; ++seed) {
    const ChannelRealization ch = draw_channel(cfg, params, 7000 + seed);
    const PrecodingSolution sol = random_baseline(ch, cfg, cb, grid, seed);
    const RVec u = encode_targets(sol, codec);
    const PrecodingSolution back = decode_targets(u, codec, cfg);
    const PrecodingSolution eval =
        evaluate_solution(ch, cfg, back, BcdObjective::sum_rate);
    REQUIRE(eval.rate_r == Catch::Approx(sol.rate_r).margin(1e-9));
    REQUIRE(eval.rate_t == Catch::Approx(sol.rate_t).margin(1e-9));
    // phases round-trip mod 2pi, amplitudes within the clip tolerance
    for (int e = 0; e < 4; ++e) {
      REQUIRE(wrap_phase(back.ris.theta_r(e)) ==
              Catch::Approx(wrap_phase(sol.ris.theta_r(e))).margin(1e-9));
      REQUIRE(back.ris.alpha_r(e) == Catch::Approx(sol.ris.alpha_r(e)).margin(1e-3));
    }
  }
}
