// starris_gl: command-line driver for the STAR-RIS green-learning toolkit.
//
// Subcommands: gen-data | train | eval | sweep | flops | selftest.
// Every run writes a manifest first; result files reference it by name.

#include <cstdio>
#include <cstdlib>
#include <deque>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "stargl/selftest.hpp"
#include "stargl/stargl.hpp"

namespace {

using namespace stargl;

struct CommonArgs {
  std::string config_path;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int threads = 0;
  std::string out_dir = "out";
  std::vector<std::string> overrides;
};

ToolConfig load_effective_config(const CommonArgs& args) {
  json j = json::object();
  if (!args.config_path.empty()) {
    std::ifstream in(args.config_path);
    if (!in) throw ConfigError("cannot open '" + args.config_path + "'");
    in >> j;
  }
  for (const std::string& o : args.overrides) apply_override(j, o);
  return config_from_json(j);
}

std::string effective_out_dir(const CommonArgs& args) {
  if (const char* env = std::getenv("STARRIS_GL_OUT"); env != nullptr && env[0] != '\0')
    return env;
  return args.out_dir;
}

std::uint64_t effective_seed(const CommonArgs& args, const ToolConfig& cfg) {
  return args.seed_set ? args.seed : cfg.data.base_seed;
}

void write_text(const std::string& path, const std::string& text) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc | std::ios::binary);
    if (!out) throw DataError("cannot write '" + tmp + "'");
    out << text;
  }
  std::filesystem::rename(tmp, path);
}

// "a,b,c" or "a..b" or "a..b:step" (default step 10).
std::vector<double> parse_values(const std::string& spec) {
  std::vector<double> out;
  const auto dots = spec.find("..");
  if (dots != std::string::npos) {
    const double lo = std::stod(spec.substr(0, dots));
    std::string rest = spec.substr(dots + 2);
    double step = 10.0;
    if (const auto colon = rest.find(':'); colon != std::string::npos) {
      step = std::stod(rest.substr(colon + 1));
      rest = rest.substr(0, colon);
    }
    const double hi = std::stod(rest);
    if (step <= 0.0) throw ConfigError("sweep: step must be > 0");
    for (double v = lo; v <= hi + 1e-9; v += step) out.push_back(v);
    return out;
  }
  std::size_t start = 0;
  while (start <= spec.size()) {
    const auto comma = spec.find(',', start);
    const std::string tok =
        spec.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    if (!tok.empty()) out.push_back(std::stod(tok));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (out.empty()) throw ConfigError("sweep: no axis values parsed from '" + spec + "'");
  return out;
}

std::vector<std::string> parse_schemes(const std::string& spec) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= spec.size()) {
    const auto comma = spec.find(',', start);
    const std::string tok =
        spec.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    if (!tok.empty()) {
      if (tok != "bcd" && tok != "gl" && tok != "random")
        throw ConfigError("scheme must be bcd, gl or random, got '" + tok + "'");
      out.push_back(tok);
    }
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

GlModel load_model_checked(const std::string& path, const ToolConfig& cfg) {
  GlModel model = load_model(path);
  const std::string expect = config_hash(cfg);
  if (model.config_hash != expect)
    throw ConfigError("model config hash " + model.config_hash + " does not match config " +
                      expect + " (refusing to mix artifacts across configs)");
  return model;
}

std::string flops_table(const FlopsReport& r) {
  char buf[512];
  std::string out;
  out += "scheme        flops          note\n";
  std::snprintf(buf, sizeof(buf), "gl            %-14zu saab=%zu gbdt=%zu decode=%zu\n", r.gl_total,
                r.saab, r.gbdt, r.decode);
  out += buf;
  std::snprintf(buf, sizeof(buf), "bcd           %-14zu per_iter=%zu x iter_cap\n", r.bcd_total,
                r.bcd_per_iter);
  out += buf;
  std::snprintf(buf, sizeof(buf), "gl/bcd ratio  %.6f\n", r.gl_bcd_ratio);
  out += buf;
  std::snprintf(buf, sizeof(buf),
                "reference (M=8, Nr=Nt=1): bcd(es)=%.4gM gl=%.4gM | (M=8, Nr=Nt=4): bcd(es)=%.4gM "
                "gl=%.4gM\n",
                r.ref_bcd_small / 1e6, r.ref_gl_small / 1e6, r.ref_bcd_large / 1e6,
                r.ref_gl_large / 1e6);
  out += buf;
  out +=
      "convention: real madd=2, complex madd=8, |z|^2=3, atan2=10, sqrt=4, compare=1 flops;\n"
      "gl counts saab projections + tree traversals + target decoding; bcd counts per-iteration\n"
      "matrix work times the configured iteration cap.\n";
  return out;
}

std::string flops_csv(const FlopsReport& r, const std::string& manifest_ref,
                      const std::string& cfg_hash) {
  char buf[256];
  std::string out = "# manifest=" + manifest_ref + " config_hash=" + cfg_hash + "\n";
  out += "scheme,flops,saab,gbdt,decode,reference_flops\n";
  std::snprintf(buf, sizeof(buf), "gl,%zu,%zu,%zu,%zu,%.0f\n", r.gl_total, r.saab, r.gbdt, r.decode,
                r.ref_gl_small);
  out += buf;
  std::snprintf(buf, sizeof(buf), "bcd,%zu,,,,%.0f\n", r.bcd_total, r.ref_bcd_small);
  out += buf;
  return out;
}

int dispatch(const std::string& command, const CommonArgs& args, const std::string& dataset_path,
             const std::string& model_path, const std::string& values_spec,
             const std::string& axis_name_arg, const std::string& schemes_spec, int n_override,
             int n_eval_override) {
  if (command == "selftest") return run_selftest() == 0 ? 0 : 1;

  const ToolConfig cfg = load_effective_config(args);
  const std::string out_dir = effective_out_dir(args);
  const std::uint64_t seed = effective_seed(args, cfg);
  const std::string cfg_hash = config_hash(cfg);
  std::filesystem::create_directories(out_dir);

  if (command == "gen-data") {
    const int n = n_override > 0 ? n_override : cfg.data.n_train;
    const std::string out_path = out_dir + "/dataset.sglc";
    RunManifest manifest{"gen-data", cfg_hash, seed, {out_path}};
    const std::string mpath = write_manifest(manifest, out_dir);
    if (std::filesystem::exists(out_path)) {
      // Resumable: an existing dataset for the same config and seed stands.
      const Dataset existing = load_dataset(out_path);
      if (existing.config_hash == cfg_hash && existing.base_seed == seed &&
          existing.size() >= n) {
        std::printf("gen-data: '%s' already has %d sample(s) for this config; nothing to do\n",
                    out_path.c_str(), existing.size());
        return 0;
      }
    }
    const Dataset ds = generate_dataset(cfg, n, seed, args.threads);
    save_dataset(ds, out_path);
    std::printf("gen-data: wrote %d samples to %s (manifest %s)\n", ds.size(), out_path.c_str(),
                mpath.c_str());
    return 0;
  }

  if (command == "train") {
    const std::string ds_path = dataset_path.empty() ? out_dir + "/dataset.sglc" : dataset_path;
    const std::string out_path = out_dir + "/model.sglc";
    RunManifest manifest{"train", cfg_hash, seed, {out_path}};
    const std::string mpath = write_manifest(manifest, out_dir);
    const Dataset ds = load_dataset(ds_path);
    if (ds.config_hash != cfg_hash)
      throw ConfigError("dataset config hash " + ds.config_hash + " does not match config " +
                        cfg_hash + " (refusing to mix artifacts across configs)");
    const GlModel model = train(ds, cfg, args.threads);
    save_model(model, out_path);
    std::printf("train: %d samples -> model %s (hash %s, F=%d, manifest %s)\n", ds.size(),
                out_path.c_str(), model_hash(model).c_str(), model.saab.feature_len(),
                mpath.c_str());
    return 0;
  }

  if (command == "eval") {
    const std::string mdl_path = model_path.empty() ? out_dir + "/model.sglc" : model_path;
    const GlModel model = load_model_checked(mdl_path, cfg);
    const int n_eval = n_eval_override > 0 ? n_eval_override : cfg.sweep.n_eval;
    const std::string out_path = out_dir + "/eval.csv";
    RunManifest manifest{"eval", cfg_hash, seed, {out_path}};
    const std::string mpath = write_manifest(manifest, out_dir);
    const std::vector<double> point{watt_to_dbm(cfg.system.p_t)};
    ExperimentReport report =
        run_sweep(cfg, SweepAxis::power, point, {"bcd", "gl", "random"}, n_eval, seed,
                  [&](const ToolConfig&, double) { return &model; }, args.threads);
    const FlopsReport fr = flops_report(model, cfg.system, cfg.bcd);
    report.flops_gl = fr.gl_total;
    report.flops_bcd = fr.bcd_total;
    write_text(out_path, report_csv(report, manifest.filename()));
    std::printf("eval: %s (gl/bcd rate ratio %.4f; flops gl %zu vs bcd %zu, manifest %s)\n",
                out_path.c_str(), report.gl_bcd_ratio, report.flops_gl, report.flops_bcd,
                mpath.c_str());
    return 0;
  }

  if (command == "sweep") {
    const SweepAxis axis = parse_axis(axis_name_arg);
    const std::vector<double> values = parse_values(values_spec);
    const std::vector<std::string> schemes =
        schemes_spec.empty() ? std::vector<std::string>{"bcd", "gl", "random"}
                             : parse_schemes(schemes_spec);
    const int n_eval = n_eval_override > 0 ? n_eval_override : cfg.sweep.n_eval;
    const std::string out_path = out_dir + "/sweep_" + axis_name_arg + ".csv";
    RunManifest manifest{"sweep " + axis_name_arg + " " + values_spec, cfg_hash, seed, {out_path}};
    const std::string mpath = write_manifest(manifest, out_dir);

    const bool need_gl =
        std::find(schemes.begin(), schemes.end(), std::string("gl")) != schemes.end();
    const bool retrain = (axis == SweepAxis::power && cfg.sweep.retrain_power) ||
                         (axis == SweepAxis::elements && cfg.sweep.retrain_elements) ||
                         (axis == SweepAxis::distance && cfg.sweep.retrain_distance);
    GlModel base_model;
    if (need_gl && !retrain) {
      const std::string mdl_path = model_path.empty() ? out_dir + "/model.sglc" : model_path;
      base_model = load_model_checked(mdl_path, cfg);
    }
    std::deque<GlModel> point_models;  // keeps retrained models alive (stable addresses)
    ModelProvider provider = [&](const ToolConfig& point_cfg, double value) -> const GlModel* {
      if (!retrain) return &base_model;
      std::printf("sweep: retraining at %s = %g\n", axis_name_arg.c_str(), value);
      const Dataset ds = generate_dataset(point_cfg, point_cfg.data.n_train, seed, args.threads);
      point_models.push_back(train(ds, point_cfg, args.threads));
      return &point_models.back();
    };
    ExperimentReport report =
        run_sweep(cfg, axis, values, schemes, n_eval, seed, provider, args.threads);
    if (need_gl && !retrain) {
      const FlopsReport fr = flops_report(base_model, cfg.system, cfg.bcd);
      report.flops_gl = fr.gl_total;
      report.flops_bcd = fr.bcd_total;
    }
    write_text(out_path, report_csv(report, manifest.filename()));
    std::printf("sweep: %zu rows -> %s (runtime %.1f s, manifest %s)\n", report.rows.size(),
                out_path.c_str(), report.runtime_seconds, mpath.c_str());
    return 0;
  }

  if (command == "flops") {
    GlModel model;
    bool trained = false;
    if (!model_path.empty()) {
      model = load_model_checked(model_path, cfg);
      trained = true;
    } else if (std::filesystem::exists(out_dir + "/model.sglc")) {
      model = load_model_checked(out_dir + "/model.sglc", cfg);
      trained = true;
    } else {
      model = nominal_gl_model(cfg);
    }
    const FlopsReport r = flops_report(model, cfg.system, cfg.bcd);
    const std::string out_path = out_dir + "/flops.csv";
    RunManifest manifest{"flops", cfg_hash, seed, {out_path}};
    const std::string mpath = write_manifest(manifest, out_dir);
    write_text(out_path, flops_csv(r, manifest.filename(), cfg_hash));
    std::printf("%s%s(manifest %s)\n", flops_table(r).c_str(),
                trained ? "" : "note: untrained nominal model shape (worst case)\n", mpath.c_str());
    return 0;
  }

  throw ConfigError("unknown command '" + command + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"STAR-RIS mmWave green-learning toolkit"};
  app.require_subcommand(1);

  CommonArgs args;
  std::string dataset_path, model_path, values_spec, axis_arg, schemes_spec;
  int n_override = 0, n_eval_override = 0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", args.config_path, "JSON config file (defaults apply when omitted)");
    sub->add_option("--seed", args.seed, "base seed (overrides data.base_seed)")
        ->each([&](const std::string&) { args.seed_set = true; });
    sub->add_option("--threads", args.threads, "worker thread cap (0 = all cores)");
    sub->add_option("--out-dir", args.out_dir, "output directory (env STARRIS_GL_OUT overrides)");
    sub->add_option("--set", args.overrides, "config override key.path=value (repeatable)");
  };

  CLI::App* gen = app.add_subcommand("gen-data", "generate channel/label/tensor dataset");
  add_common(gen);
  gen->add_option("--n", n_override, "sample count (default data.n_train)");

  CLI::App* tr = app.add_subcommand("train", "fit the Saab/RFT/GBDT pipeline");
  add_common(tr);
  tr->add_option("--dataset", dataset_path, "dataset container (default <out-dir>/dataset.sglc)");

  CLI::App* ev = app.add_subcommand("eval", "single-point scheme comparison");
  add_common(ev);
  ev->add_option("--model", model_path, "model container (default <out-dir>/model.sglc)");
  ev->add_option("--n-eval", n_eval_override, "evaluation channel count");

  CLI::App* sw = app.add_subcommand("sweep", "rate sweep over power/elements/distance");
  add_common(sw);
  sw->add_option("axis", axis_arg, "power | elements | distance")->required();
  sw->add_option("values", values_spec, "comma list or a..b[:step]")->required();
  sw->add_option("--schemes", schemes_spec, "comma list from {bcd,gl,random}");
  sw->add_option("--model", model_path, "model container for the gl scheme");
  sw->add_option("--n-eval", n_eval_override, "evaluation channel count per point");

  CLI::App* fl = app.add_subcommand("flops", "per-inference FLOPs table");
  add_common(fl);
  fl->add_option("--model", model_path, "model container (nominal shape when absent)");

  app.add_subcommand("selftest", "run the built-in example checks");

  CLI11_PARSE(app, argc, argv);
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    return dispatch(command, args, dataset_path, model_path, values_spec, axis_arg, schemes_spec,
                    n_override, n_eval_override);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "error: config: %s\n", e.what());
    return 2;
  } catch (const DataError& e) {
    std::fprintf(stderr, "error: data: %s\n", e.what());
    return 3;
  } catch (const DimensionError& e) {
    std::fprintf(stderr, "error: dimension: %s\n", e.what());
    return 4;
  } catch (const ConstraintError& e) {
    std::fprintf(stderr, "error: constraint: %s\n", e.what());
    return 5;
  } catch (const DomainError& e) {
    std::fprintf(stderr, "error: domain: %s\n", e.what());
    return 6;
  } catch (const NumericalError& e) {
    std::fprintf(stderr, "error: numerical: %s\n", e.what());
    return 7;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: internal: %s\n", e.what());
    return 10;
  }
}
