#ifndef STARGL_CONFIG_HPP_
#define STARGL_CONFIG_HPP_

#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "stargl/types.hpp"

namespace stargl {

using json = nlohmann::json;

// Geometry, antenna counts and link budget for one simulated deployment.
// Powers are stored linear (watts); the config file takes dBm.
struct SystemConfig {
  int m_bs = 8;               // BS antenna count M
  int n_r = 1;                // reflection-user antennas
  int n_t = 1;                // transmission-user antennas
  int n_h = 4;                // RIS horizontal grid
  int n_v = 4;                // RIS vertical grid
  Vec3 pos_bs{0.0, 20.0, 0.0};
  Vec3 pos_ris{0.0, 0.0, 0.0};
  Vec3 pos_user_r{5.0, 10.0, 0.0};
  Vec3 pos_user_t{-5.0, -10.0, 0.0};
  double sigma2_dl = dbm_to_watt(-100.0);  // downlink noise power, watts
  double sigma2_ul = dbm_to_watt(-100.0);  // uplink pilot noise power, watts
  double p_t = dbm_to_watt(30.0);          // transmit power budget, watts
  int n_streams = 1;

  int ris_elements() const { return n_h * n_v; }

  void validate() const {
    if (m_bs < 1) throw ConfigError("system: m_bs must be >= 1");
    if (n_r < 1 || n_t < 1) throw ConfigError("system: user antenna counts must be >= 1");
    if (n_h < 1 || n_v < 1) throw ConfigError("system: RIS grid dims must be >= 1");
    if (n_streams != 1) throw ConfigError("system: only single-stream broadcast (n_streams = 1) is supported");
    if (sigma2_dl <= 0.0 || sigma2_ul <= 0.0 || p_t <= 0.0)
      throw ConfigError("system: all powers must be > 0");
  }
};

// Large-scale and small-scale fading parameters. k_rice is linear.
// NLOS gains are CN(0, 1/L) with L the path count of the link itself.
struct ChannelParams {
  double k_rice = 10.0;
  int paths_bs_ris = 5;       // L_q
  int paths_ris_user_r = 5;   // L_r
  int paths_ris_user_t = 5;   // L_t
  double pathloss_ref_gain = 0.1;      // L in beta = L (d/d0)^-zeta
  double pathloss_ref_distance = 1.0;  // d0, meters
  double pathloss_exponent = 2.0;      // zeta

  void validate() const {
    if (k_rice < 0.0) throw ConfigError("channel: k_rice must be >= 0");
    if (paths_bs_ris < 1 || paths_ris_user_r < 1 || paths_ris_user_t < 1)
      throw ConfigError("channel: path counts must be >= 1");
    if (pathloss_ref_distance <= 0.0) throw ConfigError("channel: pathloss_ref_distance must be > 0");
  }
};

struct SoundingConfig {
  int amplitude_levels = 4;               // K_amp (distinct from the Rician factor)
  std::optional<double> pilot_snr_db{};   // when set, rescales pilot power to this SNR over sigma2_ul
};

struct BcdConfig {
  std::string objective = "sum_rate";  // or "min_rate"
  int max_iters = 30;
  double rel_tol = 1e-6;
  int phase_grid = 16;
  int amplitude_grid = 8;
  double step_init = 1.0;
  double step_shrink = 0.5;
  int max_backtracks = 30;
  int w_inner_iters = 40;

  void validate() const {
    if (objective != "sum_rate" && objective != "min_rate")
      throw ConfigError("bcd: objective must be sum_rate or min_rate");
    if (max_iters < 1) throw ConfigError("bcd: max_iters must be >= 1");
    if (rel_tol <= 0.0) throw ConfigError("bcd: rel_tol must be > 0");
    if (phase_grid < 1 || amplitude_grid < 1) throw ConfigError("bcd: grids must be >= 1");
  }
};

struct SaabConfig {
  double energy_threshold = 0.995;  // tau, per stage
  bool nonneg_bias = false;
};

struct RftConfig {
  int threshold_bins = 16;       // B
  int select_count = 256;        // F_s
  bool shared_selection = false; // one selection via mean rank instead of per-dim
};

struct GbdtConfig {
  int rounds = 200;
  int max_depth = 4;
  double learning_rate = 0.1;
  double reg_lambda = 1.0;
  double min_gain = 0.0;  // gamma
  double row_subsample = 0.8;
  double feature_subsample = 0.8;
};

struct DataConfig {
  int n_train = 2000;
  int n_test = 500;
  double validation_fraction = 0.1;
  std::uint64_t base_seed = 1;
};

struct SweepConfig {
  int n_eval = 100;
  bool retrain_power = false;
  bool retrain_elements = true;
  bool retrain_distance = false;
};

struct ToolConfig {
  SystemConfig system;
  ChannelParams channel;
  SoundingConfig sounding;
  BcdConfig bcd;
  SaabConfig saab;
  RftConfig rft;
  GbdtConfig gbdt;
  DataConfig data;
  SweepConfig sweep;
};

namespace detail {

inline Vec3 vec3_from_json(const json& j, const std::string& key) {
  if (!j.is_array() || j.size() != 3)
    throw ConfigError("" + key + " must be a 3-element array");
  return Vec3(j[0].get<double>(), j[1].get<double>(), j[2].get<double>());
}

inline json vec3_to_json(const Vec3& v) { return json::array({v[0], v[1], v[2]}); }

}  // namespace detail

// Canonical JSON image of a ToolConfig. Also serves as the key schema:
// any key in a config file that does not appear here is rejected.
inline json config_to_json(const ToolConfig& c) {
  json j;
  j["system"] = {
      {"m_bs", c.system.m_bs},
      {"n_r", c.system.n_r},
      {"n_t", c.system.n_t},
      {"n_h", c.system.n_h},
      {"n_v", c.system.n_v},
      {"pos_bs", detail::vec3_to_json(c.system.pos_bs)},
      {"pos_ris", detail::vec3_to_json(c.system.pos_ris)},
      {"pos_user_r", detail::vec3_to_json(c.system.pos_user_r)},
      {"pos_user_t", detail::vec3_to_json(c.system.pos_user_t)},
      {"noise_dbm", watt_to_dbm(c.system.sigma2_dl)},
      {"uplink_noise_dbm", watt_to_dbm(c.system.sigma2_ul)},
      {"power_dbm", watt_to_dbm(c.system.p_t)},
      {"n_streams", c.system.n_streams},
  };
  j["channel"] = {
      {"k_rice", c.channel.k_rice},
      {"paths_bs_ris", c.channel.paths_bs_ris},
      {"paths_ris_user_r", c.channel.paths_ris_user_r},
      {"paths_ris_user_t", c.channel.paths_ris_user_t},
      {"pathloss_ref_gain", c.channel.pathloss_ref_gain},
      {"pathloss_ref_distance", c.channel.pathloss_ref_distance},
      {"pathloss_exponent", c.channel.pathloss_exponent},
  };
  j["sounding"] = {{"amplitude_levels", c.sounding.amplitude_levels}};
  if (c.sounding.pilot_snr_db)
    j["sounding"]["pilot_snr_db"] = *c.sounding.pilot_snr_db;
  else
    j["sounding"]["pilot_snr_db"] = nullptr;
  j["bcd"] = {
      {"objective", c.bcd.objective},
      {"max_iters", c.bcd.max_iters},
      {"rel_tol", c.bcd.rel_tol},
      {"phase_grid", c.bcd.phase_grid},
      {"amplitude_grid", c.bcd.amplitude_grid},
      {"step_init", c.bcd.step_init},
      {"step_shrink", c.bcd.step_shrink},
      {"max_backtracks", c.bcd.max_backtracks},
      {"w_inner_iters", c.bcd.w_inner_iters},
  };
  j["saab"] = {
      {"energy_threshold", c.saab.energy_threshold},
      {"nonneg_bias", c.saab.nonneg_bias},
  };
  j["rft"] = {
      {"threshold_bins", c.rft.threshold_bins},
      {"select_count", c.rft.select_count},
      {"shared_selection", c.rft.shared_selection},
  };
  j["gbdt"] = {
      {"rounds", c.gbdt.rounds},
      {"max_depth", c.gbdt.max_depth},
      {"learning_rate", c.gbdt.learning_rate},
      {"reg_lambda", c.gbdt.reg_lambda},
      {"min_gain", c.gbdt.min_gain},
      {"row_subsample", c.gbdt.row_subsample},
      {"feature_subsample", c.gbdt.feature_subsample},
  };
  j["data"] = {
      {"n_train", c.data.n_train},
      {"n_test", c.data.n_test},
      {"validation_fraction", c.data.validation_fraction},
      {"base_seed", c.data.base_seed},
  };
  j["sweep"] = {
      {"n_eval", c.sweep.n_eval},
      {"retrain_power", c.sweep.retrain_power},
      {"retrain_elements", c.sweep.retrain_elements},
      {"retrain_distance", c.sweep.retrain_distance},
  };
  return j;
}

namespace detail {

// Recursively reject keys absent from the schema. Typos in config files
// must fail loudly instead of silently using defaults.
inline void check_unknown_keys(const json& input, const json& schema, const std::string& path) {
  if (!input.is_object()) return;
  for (auto it = input.begin(); it != input.end(); ++it) {
    const std::string sub = path.empty() ? it.key() : path + "." + it.key();
    if (!schema.contains(it.key())) throw ConfigError("unknown key '" + sub + "'");
    if (it.value().is_object()) check_unknown_keys(it.value(), schema.at(it.key()), sub);
  }
}

template <typename T>
void maybe_get(const json& j, const char* key, T& out) {
  if (j.contains(key) && !j.at(key).is_null()) out = j.at(key).get<T>();
}

}  // namespace detail

// Applies a (partial) JSON object on top of defaults. Unknown keys are
// hard errors; missing keys keep their default.
inline ToolConfig config_from_json(const json& j) {
  ToolConfig c;
  detail::check_unknown_keys(j, config_to_json(c), "");
  if (j.contains("system")) {
    const json& s = j.at("system");
    detail::maybe_get(s, "m_bs", c.system.m_bs);
    detail::maybe_get(s, "n_r", c.system.n_r);
    detail::maybe_get(s, "n_t", c.system.n_t);
    detail::maybe_get(s, "n_h", c.system.n_h);
    detail::maybe_get(s, "n_v", c.system.n_v);
    if (s.contains("pos_bs")) c.system.pos_bs = detail::vec3_from_json(s.at("pos_bs"), "system.pos_bs");
    if (s.contains("pos_ris")) c.system.pos_ris = detail::vec3_from_json(s.at("pos_ris"), "system.pos_ris");
    if (s.contains("pos_user_r"))
      c.system.pos_user_r = detail::vec3_from_json(s.at("pos_user_r"), "system.pos_user_r");
    if (s.contains("pos_user_t"))
      c.system.pos_user_t = detail::vec3_from_json(s.at("pos_user_t"), "system.pos_user_t");
    double noise_dbm = watt_to_dbm(c.system.sigma2_dl);
    double ul_noise_dbm = watt_to_dbm(c.system.sigma2_ul);
    double power_dbm = watt_to_dbm(c.system.p_t);
    detail::maybe_get(s, "noise_dbm", noise_dbm);
    detail::maybe_get(s, "uplink_noise_dbm", ul_noise_dbm);
    detail::maybe_get(s, "power_dbm", power_dbm);
    c.system.sigma2_dl = dbm_to_watt(noise_dbm);
    c.system.sigma2_ul = dbm_to_watt(ul_noise_dbm);
    c.system.p_t = dbm_to_watt(power_dbm);
    detail::maybe_get(s, "n_streams", c.system.n_streams);
  }
  if (j.contains("channel")) {
    const json& s = j.at("channel");
    detail::maybe_get(s, "k_rice", c.channel.k_rice);
    detail::maybe_get(s, "paths_bs_ris", c.channel.paths_bs_ris);
    detail::maybe_get(s, "paths_ris_user_r", c.channel.paths_ris_user_r);
    detail::maybe_get(s, "paths_ris_user_t", c.channel.paths_ris_user_t);
    detail::maybe_get(s, "pathloss_ref_gain", c.channel.pathloss_ref_gain);
    detail::maybe_get(s, "pathloss_ref_distance", c.channel.pathloss_ref_distance);
    detail::maybe_get(s, "pathloss_exponent", c.channel.pathloss_exponent);
  }
  if (j.contains("sounding")) {
    const json& s = j.at("sounding");
    detail::maybe_get(s, "amplitude_levels", c.sounding.amplitude_levels);
    if (s.contains("pilot_snr_db") && !s.at("pilot_snr_db").is_null())
      c.sounding.pilot_snr_db = s.at("pilot_snr_db").get<double>();
  }
  if (j.contains("bcd")) {
    const json& s = j.at("bcd");
    detail::maybe_get(s, "objective", c.bcd.objective);
    detail::maybe_get(s, "max_iters", c.bcd.max_iters);
    detail::maybe_get(s, "rel_tol", c.bcd.rel_tol);
    detail::maybe_get(s, "phase_grid", c.bcd.phase_grid);
    detail::maybe_get(s, "amplitude_grid", c.bcd.amplitude_grid);
    detail::maybe_get(s, "step_init", c.bcd.step_init);
    detail::maybe_get(s, "step_shrink", c.bcd.step_shrink);
    detail::maybe_get(s, "max_backtracks", c.bcd.max_backtracks);
    detail::maybe_get(s, "w_inner_iters", c.bcd.w_inner_iters);
  }
  if (j.contains("saab")) {
    const json& s = j.at("saab");
    detail::maybe_get(s, "energy_threshold", c.saab.energy_threshold);
    detail::maybe_get(s, "nonneg_bias", c.saab.nonneg_bias);
  }
  if (j.contains("rft")) {
    const json& s = j.at("rft");
    detail::maybe_get(s, "threshold_bins", c.rft.threshold_bins);
    detail::maybe_get(s, "select_count", c.rft.select_count);
    detail::maybe_get(s, "shared_selection", c.rft.shared_selection);
  }
  if (j.contains("gbdt")) {
    const json& s = j.at("gbdt");
    detail::maybe_get(s, "rounds", c.gbdt.rounds);
    detail::maybe_get(s, "max_depth", c.gbdt.max_depth);
    detail::maybe_get(s, "learning_rate", c.gbdt.learning_rate);
    detail::maybe_get(s, "reg_lambda", c.gbdt.reg_lambda);
    detail::maybe_get(s, "min_gain", c.gbdt.min_gain);
    detail::maybe_get(s, "row_subsample", c.gbdt.row_subsample);
    detail::maybe_get(s, "feature_subsample", c.gbdt.feature_subsample);
  }
  if (j.contains("data")) {
    const json& s = j.at("data");
    detail::maybe_get(s, "n_train", c.data.n_train);
    detail::maybe_get(s, "n_test", c.data.n_test);
    detail::maybe_get(s, "validation_fraction", c.data.validation_fraction);
    detail::maybe_get(s, "base_seed", c.data.base_seed);
  }
  if (j.contains("sweep")) {
    const json& s = j.at("sweep");
    detail::maybe_get(s, "n_eval", c.sweep.n_eval);
    detail::maybe_get(s, "retrain_power", c.sweep.retrain_power);
    detail::maybe_get(s, "retrain_elements", c.sweep.retrain_elements);
    detail::maybe_get(s, "retrain_distance", c.sweep.retrain_distance);
  }
  c.system.validate();
  c.channel.validate();
  c.bcd.validate();
  if (c.sounding.amplitude_levels < 1) throw ConfigError("sounding: amplitude_levels must be >= 1");
  if (c.saab.energy_threshold <= 0.0 || c.saab.energy_threshold > 1.0)
    throw ConfigError("saab: energy_threshold must be in (0, 1]");
  if (c.rft.threshold_bins < 1 || c.rft.select_count < 1)
    throw ConfigError("rft: threshold_bins and select_count must be >= 1");
  if (c.gbdt.rounds < 1 || c.gbdt.max_depth < 0) throw ConfigError("gbdt: invalid tree parameters");
  if (c.data.n_train < 2) throw ConfigError("data: n_train must be >= 2");
  if (c.data.validation_fraction <= 0.0 || c.data.validation_fraction >= 1.0)
    throw ConfigError("data: validation_fraction must be in (0, 1)");
  return c;
}

inline ToolConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw ConfigError("parse failure in '" + path + "': " + e.what());
  }
  return config_from_json(j);
}

// FNV-1a over a byte string.
inline std::uint64_t fnv1a(const void* data, std::size_t len, std::uint64_t h = 0xcbf29ce484222325ULL) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string hash_hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

// Hash of the canonical config dump; datasets, models and reports carry it
// so mismatched artifacts are refused instead of silently reinterpreted.
inline std::string config_hash(const ToolConfig& c) {
  const std::string dump = config_to_json(c).dump();
  return hash_hex(fnv1a(dump.data(), dump.size()));
}

// Applies one "key.path=value" override onto a JSON config image.
inline void apply_override(json& j, const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos) throw ConfigError("override: expected key.path=value, got '" + spec + "'");
  const std::string path = spec.substr(0, eq);
  const std::string value = spec.substr(eq + 1);
  json* node = &j;
  std::size_t start = 0;
  std::vector<std::string> parts;
  while (true) {
    const auto dot = path.find('.', start);
    parts.push_back(path.substr(start, dot == std::string::npos ? std::string::npos : dot - start));
    if (dot == std::string::npos) break;
    start = dot + 1;
  }
  for (std::size_t i = 0; i + 1 < parts.size(); ++i) node = &((*node)[parts[i]]);
  json parsed = json::parse(value, nullptr, false);
  if (parsed.is_discarded()) parsed = value;  // bare strings need no quotes
  (*node)[parts.back()] = parsed;
}

}  // namespace stargl

#endif  // STARGL_CONFIG_HPP_
