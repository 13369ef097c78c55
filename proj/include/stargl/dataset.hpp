#ifndef STARGL_DATASET_HPP_
#define STARGL_DATASET_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "stargl/channel.hpp"
#include "stargl/codec.hpp"
#include "stargl/config.hpp"
#include "stargl/container.hpp"
#include "stargl/rate_oracle.hpp"
#include "stargl/sounding.hpp"
#include "stargl/threading.hpp"

namespace stargl {

// Training corpus: one sounding tensor plus one BCD label per channel draw.
// label_meta columns: rate_r, rate_t, objective, iterations.
// solutions rows are the raw label records,
//   [seed, Re w (M), Im w (M), theta_r (N), theta_t (N), alpha_r (N),
//    rate_r, rate_t, objective, iterations],
// kept alongside the trig-encoded regression targets.
struct Dataset {
  std::string config_hash;
  std::uint64_t base_seed = 0;
  std::vector<Tensor4C> tensors;
  RMat labels;      // n x D (encoded targets)
  RMat label_meta;  // n x 4
  RMat solutions;   // n x (1 + 2M + 3N + 4)
  std::vector<std::uint64_t> channel_seeds;

  int size() const { return static_cast<int>(tensors.size()); }
};

inline std::uint64_t sample_channel_seed(std::uint64_t base_seed, std::uint64_t index) {
  return derive_seed(base_seed, 0x73616d70ULL, index);  // "samp"
}
inline std::uint64_t sample_noise_seed(std::uint64_t channel_seed) {
  return derive_seed(channel_seed, 0x6e6f6973ULL);  // "nois"
}

// draw_channel -> bcd_optimize -> encode, and sound -> tensor, per sample.
// Samples are independent and seeded individually, so generation is
// deterministic for any thread count.
inline Dataset generate_dataset(const ToolConfig& cfg, int n_samples, std::uint64_t base_seed,
                                int threads = 0) {
  if (n_samples < 2) throw DataError("generate_dataset: need n >= 2 samples");
  const SystemConfig& sys = cfg.system;
  const TargetCodec codec{sys.ris_elements(), sys.m_bs};
  const PhaseCodebook codebook = dft_codebook(sys.n_h, sys.n_v);
  const AmplitudeGrid grid = amplitude_grid(cfg.sounding.amplitude_levels);
  PilotPlan plan = make_pilots(sys);
  plan.power_scale = pilot_power_scale(cfg.sounding, sys.sigma2_ul);

  Dataset ds;
  ds.config_hash = config_hash(cfg);
  ds.base_seed = base_seed;
  ds.tensors.resize(n_samples);
  ds.labels.resize(n_samples, codec.dim());
  ds.label_meta.resize(n_samples, 4);
  ds.solutions.resize(n_samples, 1 + 2 * codec.m + 3 * codec.n + 4);
  ds.channel_seeds.resize(n_samples);

  parallel_for(static_cast<std::size_t>(n_samples), threads, [&](std::size_t i) {
    const std::uint64_t seed = sample_channel_seed(base_seed, i);
    ds.channel_seeds[i] = seed;
    const ChannelRealization ch = draw_channel(sys, cfg.channel, seed);
    const BcdResult bcd = bcd_optimize(ch, sys, cfg.bcd, seed);
    const PrecodingSolution& sol = bcd.solution;
    ds.labels.row(i) = encode_targets(sol, codec).transpose();
    ds.label_meta(i, 0) = sol.rate_r;
    ds.label_meta(i, 1) = sol.rate_t;
    ds.label_meta(i, 2) = sol.objective;
    ds.label_meta(i, 3) = bcd.iterations;
    int col = 0;
    ds.solutions(i, col++) = static_cast<double>(seed);
    for (int mm = 0; mm < codec.m; ++mm) ds.solutions(i, col++) = sol.w(mm).real();
    for (int mm = 0; mm < codec.m; ++mm) ds.solutions(i, col++) = sol.w(mm).imag();
    for (int e = 0; e < codec.n; ++e) ds.solutions(i, col++) = sol.ris.theta_r(e);
    for (int e = 0; e < codec.n; ++e) ds.solutions(i, col++) = sol.ris.theta_t(e);
    for (int e = 0; e < codec.n; ++e) ds.solutions(i, col++) = sol.ris.alpha_r(e);
    ds.solutions(i, col++) = sol.rate_r;
    ds.solutions(i, col++) = sol.rate_t;
    ds.solutions(i, col++) = sol.objective;
    ds.solutions(i, col++) = bcd.iterations;
    ds.tensors[i] = sound(ch, sys, plan, codebook, grid, sample_noise_seed(seed)).r;
  });
  return ds;
}

inline void save_dataset(const Dataset& ds, const std::string& path) {
  ArrayContainer c;
  c.meta["kind"] = "stargl-dataset";
  c.meta["config_hash"] = ds.config_hash;
  c.meta["base_seed"] = ds.base_seed;
  c.meta["n_samples"] = ds.size();
  const Tensor4C& t0 = ds.tensors.front();
  c.meta["tensor_shape"] = {t0.m, t0.n_p, t0.n, t0.k_amp};

  std::vector<cxd> flat;
  flat.reserve(static_cast<std::size_t>(ds.size()) * t0.size());
  for (const Tensor4C& t : ds.tensors) flat.insert(flat.end(), t.data.begin(), t.data.end());
  c.add_c128("tensors",
             {static_cast<std::size_t>(ds.size()), static_cast<std::size_t>(t0.m),
              static_cast<std::size_t>(t0.n_p), static_cast<std::size_t>(t0.n),
              static_cast<std::size_t>(t0.k_amp)},
             std::move(flat));

  c.add_f64("labels",
            {static_cast<std::size_t>(ds.labels.rows()), static_cast<std::size_t>(ds.labels.cols())},
            std::vector<double>(ds.labels.data(), ds.labels.data() + ds.labels.size()));
  c.add_f64("label_meta",
            {static_cast<std::size_t>(ds.label_meta.rows()),
             static_cast<std::size_t>(ds.label_meta.cols())},
            std::vector<double>(ds.label_meta.data(), ds.label_meta.data() + ds.label_meta.size()));
  c.add_f64("solutions",
            {static_cast<std::size_t>(ds.solutions.rows()),
             static_cast<std::size_t>(ds.solutions.cols())},
            std::vector<double>(ds.solutions.data(), ds.solutions.data() + ds.solutions.size()));
  std::vector<std::int64_t> seeds(ds.channel_seeds.begin(), ds.channel_seeds.end());
  const std::size_t n_seeds = seeds.size();
  c.add_i64("channel_seeds", {n_seeds}, std::move(seeds));
  c.save(path);
}

inline Dataset load_dataset(const std::string& path) {
  const ArrayContainer c = ArrayContainer::load(path);
  if (c.meta.value("kind", "") != "stargl-dataset")
    throw DataError("load_dataset: '" + path + "' is not a dataset container");
  Dataset ds;
  ds.config_hash = c.meta.at("config_hash").get<std::string>();
  ds.base_seed = c.meta.at("base_seed").get<std::uint64_t>();
  const auto shape = c.meta.at("tensor_shape").get<std::vector<int>>();
  const int n = c.meta.at("n_samples").get<int>();

  const std::vector<cxd>& flat = c.c128("tensors");
  ds.tensors.assign(n, Tensor4C(shape[0], shape[1], shape[2], shape[3]));
  const std::size_t per = ds.tensors.front().size();
  for (int i = 0; i < n; ++i)
    std::copy(flat.begin() + i * per, flat.begin() + (i + 1) * per, ds.tensors[i].data.begin());

  const auto& lshape = c.shape("labels");
  ds.labels = Eigen::Map<const RMat>(c.f64("labels").data(), lshape[0], lshape[1]);
  const auto& mshape = c.shape("label_meta");
  ds.label_meta = Eigen::Map<const RMat>(c.f64("label_meta").data(), mshape[0], mshape[1]);
  const auto& sshape = c.shape("solutions");
  ds.solutions = Eigen::Map<const RMat>(c.f64("solutions").data(), sshape[0], sshape[1]);
  for (std::int64_t s : c.i64("channel_seeds"))
    ds.channel_seeds.push_back(static_cast<std::uint64_t>(s));
  return ds;
}

}  // namespace stargl

#endif  // STARGL_DATASET_HPP_
