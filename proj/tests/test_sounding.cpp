#include <algorithm>
#include <catch2/catch_amalgamated.hpp>

#include "stargl/sounding.hpp"

using namespace stargl;

TEST_CASE("make_pilots worked examples", "[sounding]") {
  SECTION("single-antenna users give the 2-point DFT up to scaling") {
    SystemConfig cfg;
    cfg.n_r = 1;
    cfg.n_t = 1;
    const PilotPlan plan = make_pilots(cfg);
    REQUIRE(plan.n_p() == 2);
    // rows proportional to [1, 1] and [1, -1]
    REQUIRE(std::abs(plan.p(0, 0) - plan.p(0, 1)) < 1e-12);
    REQUIRE(std::abs(plan.p(1, 0) + plan.p(1, 1)) < 1e-12);
    const CMat gram = plan.p * plan.p.adjoint();
    REQUIRE(std::abs(gram(0, 1)) < 1e-12);
    REQUIRE(gram(0, 0).real() == Catch::Approx(gram(1, 1).real()).margin(1e-12));
  }

  SECTION("4+4 antennas: 8x8 plan with diagonal row Gram") {
    SystemConfig cfg;
    cfg.n_r = 4;
    cfg.n_t = 4;
    const PilotPlan plan = make_pilots(cfg);
    REQUIRE(plan.p.rows() == 8);
    REQUIRE(plan.p.cols() == 8);
    const CMat gram = plan.p * plan.p.adjoint();
    for (int a = 0; a < 8; ++a)
      for (int b = 0; b < 8; ++b)
        if (a != b) REQUIRE(std::abs(gram(a, b)) < 1e-12);
    // each user's pilot energy is 1 per symbol
    for (int col = 0; col < 8; ++col) {
      REQUIRE(plan.p.col(col).head(4).squaredNorm() == Catch::Approx(1.0).margin(1e-12));
      REQUIRE(plan.p.col(col).tail(4).squaredNorm() == Catch::Approx(1.0).margin(1e-12));
    }
  }
}

namespace {

StarRisConfig es_config(int n, double alpha_t, double theta) {
  StarRisConfig c;
  c.theta_r = RVec::Constant(n, theta);
  c.theta_t = RVec::Constant(n, theta);
  c.alpha_t = RVec::Constant(n, alpha_t);
  c.alpha_r = RVec::Constant(n, std::sqrt(1.0 - alpha_t * alpha_t));
  return c;
}

}  // namespace

TEST_CASE("uplink_snapshot worked examples", "[sounding]") {
  SECTION("zero pilot, zero noise gives the zero vector") {
    SystemConfig cfg;
    const ChannelRealization ch = draw_channel(cfg, ChannelParams{}, 2);
    const CVec y = uplink_snapshot(ch, es_config(cfg.ris_elements(), 0.5, 0.3),
                                   CVec::Zero(2), 0.0, 0);
    REQUIRE(y.norm() == 0.0);
  }

  SECTION("user-t contribution is linear in alpha_t when p_r = 0") {
    SystemConfig cfg;
    const ChannelRealization ch = draw_channel(cfg, ChannelParams{}, 2);
    CVec pilot = CVec::Zero(2);
    pilot(1) = cxd(1.0, 0.0);  // user t only
    const CVec y1 = uplink_snapshot(ch, es_config(cfg.ris_elements(), 0.4, 0.7), pilot, 0.0, 0);
    const CVec y2 = uplink_snapshot(ch, es_config(cfg.ris_elements(), 0.2, 0.7), pilot, 0.0, 0);
    REQUIRE((y1 - 2.0 * y2).norm() < 1e-12 * y1.norm());
  }

  SECTION("scalar hand computation") {
    SystemConfig cfg;
    cfg.m_bs = 1;
    cfg.n_h = 1;
    cfg.n_v = 1;
    ChannelRealization ch;
    ch.h_bs_ris = CMat::Constant(1, 1, cxd(0.3, -0.6));
    ch.g_user_r = CMat::Constant(1, 1, cxd(-1.1, 0.4));
    ch.g_user_t = CMat::Constant(1, 1, cxd(0.9, 0.2));
    StarRisConfig ris = es_config(1, 0.8, 0.0);
    ris.theta_r(0) = 1.2;
    const double alpha_r = ris.alpha_r(0);
    CVec pilot = CVec::Zero(2);
    pilot(0) = cxd(1.0, 0.0);  // unit pilot to user r only
    const CVec y = uplink_snapshot(ch, ris, pilot, 0.0, 0);
    const cxd want = std::conj(ch.h_bs_ris(0, 0)) * alpha_r * std::exp(kJ * 1.2) * ch.g_user_r(0, 0);
    REQUIRE(std::abs(y(0) - want) < 1e-12);
  }

  SECTION("pilot length is checked") {
    SystemConfig cfg;
    const ChannelRealization ch = draw_channel(cfg, ChannelParams{}, 2);
    REQUIRE_THROWS_AS(
        uplink_snapshot(ch, es_config(cfg.ris_elements(), 0.5, 0.0), CVec::Zero(5), 0.0, 0),
        DimensionError);
  }
}

TEST_CASE("sound shapes, determinism and noise statistics", "[sounding]") {
  SystemConfig cfg;  // M=8, N_r=N_t=1, N=16
  const PhaseCodebook cb = dft_codebook(cfg.n_h, cfg.n_v);
  const AmplitudeGrid grid = amplitude_grid(4);
  const PilotPlan plan = make_pilots(cfg);
  const ChannelRealization ch = draw_channel(cfg, ChannelParams{}, 6);

  SECTION("tensor shape bookkeeping") {
    const ReceivedPilotTensor t = sound(ch, cfg, plan, cb, grid, 1);
    REQUIRE(t.r.m == 8);
    REQUIRE(t.r.n_p == 2);
    REQUIRE(t.r.n == 16);
    REQUIRE(t.r.k_amp == 4);
  }

  SECTION("deterministic per noise seed") {
    const ReceivedPilotTensor a = sound(ch, cfg, plan, cb, grid, 42);
    const ReceivedPilotTensor b = sound(ch, cfg, plan, cb, grid, 42);
    REQUIRE(a.r.data == b.r.data);
  }

  SECTION("zero channels leave pure noise at the uplink noise power") {
    SystemConfig noisy = cfg;
    noisy.sigma2_ul = 2.5;  // large so the check is about the draw, not the channel
    ChannelRealization zero = ch;
    zero.h_bs_ris.setZero();
    double acc = 0.0;
    std::size_t count = 0;
    for (int rep = 0; rep < 8; ++rep) {
      const ReceivedPilotTensor t = sound(zero, noisy, plan, cb, grid, 100 + rep);
      for (const cxd& v : t.r.data) acc += std::norm(v);
      count += t.r.data.size();
    }
    REQUIRE(acc / count == Catch::Approx(2.5).epsilon(0.10));
  }

  SECTION("noiseless tensor is invariant to the noise seed and linear in pilots") {
    SystemConfig clean = cfg;
    clean.sigma2_ul = 0.0;
    const ReceivedPilotTensor a = sound(ch, clean, plan, cb, grid, 1);
    const ReceivedPilotTensor b = sound(ch, clean, plan, cb, grid, 999);
    REQUIRE(a.r.data == b.r.data);

    PilotPlan doubled = plan;
    doubled.p *= 2.0;
    const ReceivedPilotTensor c = sound(ch, clean, doubled, cb, grid, 1);
    for (std::size_t i = 0; i < a.r.data.size(); ++i)
      REQUIRE(std::abs(c.r.data[i] - 2.0 * a.r.data[i]) < 1e-12 * std::abs(a.r.data[i] + 1e-30));
  }
}

TEST_CASE("schedule permutation consistency", "[sounding]") {
  SystemConfig cfg;
  cfg.m_bs = 3;
  cfg.n_h = 2;
  cfg.n_v = 2;
  const PhaseCodebook cb = dft_codebook(2, 2);
  const AmplitudeGrid grid = amplitude_grid(3);
  const PilotPlan plan = make_pilots(cfg);
  const ChannelRealization ch = draw_channel(cfg, ChannelParams{}, 8);

  SoundingSchedule schedule = make_schedule(plan.n_p(), 4, 3);
  REQUIRE(schedule.size() == 2u * 4u * 3u);
  // lexicographic order: pilot outer, codeword middle, level inner
  REQUIRE(schedule[0].pilot == 0);
  REQUIRE(schedule[0].codeword == 0);
  REQUIRE(schedule[0].level == 0);
  REQUIRE(schedule[1].level == 1);
  REQUIRE(schedule[3].codeword == 1);

  const ReceivedPilotTensor canonical = sound(ch, cfg, plan, cb, grid, 21);
  SoundingSchedule shuffled = schedule;
  std::reverse(shuffled.begin(), shuffled.end());
  std::swap(shuffled[0], shuffled[7]);
  const ReceivedPilotTensor permuted = sound_with_schedule(ch, cfg, plan, cb, grid, shuffled, 21);
  REQUIRE(canonical.r.data == permuted.r.data);
}
