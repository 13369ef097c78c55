#ifndef STARGL_SWEEP_HPP_
#define STARGL_SWEEP_HPP_

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "stargl/channel.hpp"
#include "stargl/config.hpp"
#include "stargl/model.hpp"
#include "stargl/rate_oracle.hpp"
#include "stargl/sounding.hpp"
#include "stargl/threading.hpp"

namespace stargl {

enum class SweepAxis { power, elements, distance };

inline SweepAxis parse_axis(const std::string& name) {
  if (name == "power") return SweepAxis::power;
  if (name == "elements") return SweepAxis::elements;
  if (name == "distance") return SweepAxis::distance;
  throw ConfigError("sweep axis must be power, elements or distance, got '" + name + "'");
}

inline const char* axis_name(SweepAxis a) {
  switch (a) {
    case SweepAxis::power: return "power";
    case SweepAxis::elements: return "elements";
    default: return "distance";
  }
}

// Point configs: power in dBm; elements as a square N (N_h = N_v = sqrt N);
// distance moves user r along the RIS -> user-r ray (path loss only).
inline ToolConfig sweep_point_config(const ToolConfig& base, SweepAxis axis, double value) {
  ToolConfig c = base;
  switch (axis) {
    case SweepAxis::power:
      c.system.p_t = dbm_to_watt(value);
      break;
    case SweepAxis::elements: {
      const int n = static_cast<int>(std::llround(value));
      const int side = static_cast<int>(std::llround(std::sqrt(static_cast<double>(n))));
      if (side * side != n)
        throw ConfigError("elements sweep: value " + std::to_string(n) +
                          " is not a perfect square (the RIS is an N_h x N_v UPA)");
      c.system.n_h = side;
      c.system.n_v = side;
      break;
    }
    case SweepAxis::distance: {
      const Vec3 dir = (base.system.pos_user_r - base.system.pos_ris).normalized();
      c.system.pos_user_r = base.system.pos_ris + value * dir;
      break;
    }
  }
  return c;
}

// Fills the rate fields of a decoded solution against a known channel; this
// is the evaluation harness side, where CSI is legitimately available.
inline PrecodingSolution evaluate_solution(const ChannelRealization& ch, const SystemConfig& cfg,
                                           PrecodingSolution sol, BcdObjective objective) {
  sol.rate_r = rate(ch, sol.ris, sol.w, Side::r, cfg.sigma2_dl);
  sol.rate_t = rate(ch, sol.ris, sol.w, Side::t, cfg.sigma2_dl);
  sol.objective = objective == BcdObjective::sum_rate ? sol.rate_r + sol.rate_t
                                                      : std::min(sol.rate_r, sol.rate_t);
  return sol;
}

struct SweepRow {
  std::string axis;
  double value = 0.0;
  std::string scheme;
  double mean = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  int n = 0;
};

struct ExperimentReport {
  std::string axis;
  std::vector<double> values;
  std::vector<std::string> schemes;
  std::vector<SweepRow> rows;
  std::uint64_t base_seed = 0;
  int n_eval = 0;
  double gl_bcd_ratio = 0.0;  // mean over points where both schemes ran
  double runtime_seconds = 0.0;
  std::string config_hash;
  std::size_t flops_gl = 0;   // per-inference counts at the base config,
  std::size_t flops_bcd = 0;  // filled when a model is in play
};

inline std::uint64_t eval_channel_seed(std::uint64_t base_seed, std::uint64_t index) {
  return derive_seed(base_seed, 0x6576616cULL, index);  // "eval"
}

// Per-point model lookup for the gl scheme; return nullptr when gl is not
// evaluated at that point. The provider owns the model's lifetime.
using ModelProvider = std::function<const GlModel*(const ToolConfig& point_cfg, double value)>;

inline SweepRow evaluate_scheme_point(const ToolConfig& cfg, const std::string& scheme,
                                      SweepAxis axis, double value, int n_eval,
                                      std::uint64_t base_seed, const GlModel* model,
                                      int threads = 0) {
  const SystemConfig& sys = cfg.system;
  const BcdObjective objective = parse_objective(cfg.bcd.objective);
  std::vector<double> vals(n_eval);

  const PhaseCodebook codebook = dft_codebook(sys.n_h, sys.n_v);
  const AmplitudeGrid grid = amplitude_grid(cfg.sounding.amplitude_levels);
  PilotPlan plan = make_pilots(sys);
  plan.power_scale = pilot_power_scale(cfg.sounding, sys.sigma2_ul);

  parallel_for(static_cast<std::size_t>(n_eval), threads, [&](std::size_t i) {
    const std::uint64_t seed = eval_channel_seed(base_seed, i);
    const ChannelRealization ch = draw_channel(sys, cfg.channel, seed);
    if (scheme == "bcd") {
      vals[i] = bcd_optimize(ch, sys, cfg.bcd, seed).solution.objective;
    } else if (scheme == "random") {
      vals[i] = random_baseline(ch, sys, codebook, grid, seed, cfg.bcd.objective).objective;
    } else if (scheme == "gl") {
      if (model == nullptr) throw ConfigError("sweep: gl scheme requested without a model");
      const ReceivedPilotTensor t =
          sound(ch, sys, plan, codebook, grid, sample_noise_seed(seed));
      const PrecodingSolution sol =
          evaluate_solution(ch, sys, infer(*model, t.r, sys), objective);
      vals[i] = sol.objective;
    } else {
      throw ConfigError("sweep: unknown scheme '" + scheme + "'");
    }
  });

  double mean = 0.0;
  for (double v : vals) mean += v;
  mean /= n_eval;
  double var = 0.0;
  for (double v : vals) var += (v - mean) * (v - mean);
  var = (n_eval > 1) ? var / (n_eval - 1) : 0.0;
  const double ci = 1.96 * std::sqrt(var / n_eval);

  SweepRow row;
  row.axis = axis_name(axis);
  row.value = value;
  row.scheme = scheme;
  row.mean = mean;
  row.ci_low = mean - ci;
  row.ci_high = mean + ci;
  row.n = n_eval;
  return row;
}

// Evaluation channels are drawn from base_seed and shared across axis points
// and schemes (paired comparisons; strict per-channel monotonicity along
// power/distance carries to the means).
inline ExperimentReport run_sweep(const ToolConfig& cfg, SweepAxis axis,
                                  const std::vector<double>& values,
                                  const std::vector<std::string>& schemes, int n_eval,
                                  std::uint64_t base_seed, const ModelProvider& model_provider,
                                  int threads = 0) {
  const auto t0 = std::chrono::steady_clock::now();
  ExperimentReport report;
  report.axis = axis_name(axis);
  report.values = values;
  report.schemes = schemes;
  report.base_seed = base_seed;
  report.n_eval = n_eval;
  report.config_hash = config_hash(cfg);

  double ratio_sum = 0.0;
  int ratio_count = 0;
  for (double value : values) {
    const ToolConfig point = sweep_point_config(cfg, axis, value);
    double bcd_mean = 0.0, gl_mean = 0.0;
    bool have_bcd = false, have_gl = false;
    for (const std::string& scheme : schemes) {
      const GlModel* model =
          (scheme == "gl" && model_provider) ? model_provider(point, value) : nullptr;
      const SweepRow row =
          evaluate_scheme_point(point, scheme, axis, value, n_eval, base_seed, model, threads);
      if (scheme == "bcd") {
        bcd_mean = row.mean;
        have_bcd = true;
      }
      if (scheme == "gl") {
        gl_mean = row.mean;
        have_gl = true;
      }
      report.rows.push_back(row);
    }
    if (have_bcd && have_gl && bcd_mean > 0.0) {
      ratio_sum += gl_mean / bcd_mean;
      ++ratio_count;
    }
  }
  if (ratio_count > 0) report.gl_bcd_ratio = ratio_sum / ratio_count;
  report.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

// CSV emission. The leading comment line ties the artifact to its manifest;
// fixed %.10g formatting keeps reruns byte-identical.
inline std::string report_csv(const ExperimentReport& report, const std::string& manifest_ref) {
  std::string out;
  out += "# manifest=" + manifest_ref + " config_hash=" + report.config_hash + "\n";
  out += "axis,value,scheme,mean_rate,ci_low,ci_high,n_eval\n";
  char buf[256];
  for (const SweepRow& r : report.rows) {
    std::snprintf(buf, sizeof(buf), "%s,%.10g,%s,%.10g,%.10g,%.10g,%d\n", r.axis.c_str(), r.value,
                  r.scheme.c_str(), r.mean, r.ci_low, r.ci_high, r.n);
    out += buf;
  }
  return out;
}

}  // namespace stargl

#endif  // STARGL_SWEEP_HPP_
