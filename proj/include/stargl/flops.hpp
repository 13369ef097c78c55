#ifndef STARGL_FLOPS_HPP_
#define STARGL_FLOPS_HPP_

#include <cstdint>
#include <string>

#include "stargl/config.hpp"
#include "stargl/gbdt.hpp"
#include "stargl/model.hpp"
#include "stargl/saab.hpp"

namespace stargl {

// Counting convention (documented in every report):
//   real multiply-add      2 FLOPs
//   complex multiply-add   8 FLOPs
//   |z|^2                  3 FLOPs
//   atan2                 10 FLOPs
//   sqrt                   4 FLOPs
//   compare / clip / add   1 FLOP
// GL counts the full inference path: Saab projections + tree traversals +
// target decoding (selection gathers are free). BCD counts the per-iteration
// matrix work times the iteration cap.
namespace flops_conv {
inline constexpr std::size_t kRealMadd = 2;
inline constexpr std::size_t kComplexMadd = 8;
inline constexpr std::size_t kNorm2 = 3;
inline constexpr std::size_t kAtan2 = 10;
inline constexpr std::size_t kSqrt = 4;
inline constexpr std::size_t kEigDecompPerM3 = 30;  // dense Hermitian eig, c * M^3
}  // namespace flops_conv

struct FlopsReport {
  std::size_t saab = 0;
  std::size_t gbdt = 0;
  std::size_t decode = 0;
  std::size_t gl_total = 0;
  std::size_t bcd_per_iter = 0;
  std::size_t bcd_total = 0;
  double gl_bcd_ratio = 0.0;
  // Reference values for the paper-scale configurations.
  double ref_bcd_small = 7.16e6, ref_gl_small = 0.1181e6;   // M=8, N_r=N_t=1
  double ref_bcd_large = 7.86e6, ref_gl_large = 0.4911e6;   // M=8, N_r=N_t=4
};

inline std::size_t saab_projection_flops(const SaabModel& model) {
  const auto fibers = saab_fiber_counts(model);
  std::size_t total = 0;
  for (int s = 0; s < 4; ++s)
    total += fibers[s] * static_cast<std::size_t>(model.stages[s].channels()) *
             model.stages[s].patch_len * flops_conv::kRealMadd;
  return total;
}

inline std::size_t decode_flops(const TargetCodec& codec) {
  const std::size_t n = codec.n, m = codec.m;
  std::size_t total = 0;
  total += 2 * n * flops_conv::kAtan2;            // theta_r, theta_t
  total += n * (1 + flops_conv::kSqrt);           // alpha clip + alpha_t
  total += 2 * m * 2 + flops_conv::kSqrt + 1;     // ||w||^2 (squares+adds), sqrt, divide
  total += 2 * m;                                 // rescale
  return total;
}

inline std::size_t gl_inference_flops(const GlModel& model) {
  std::size_t total = saab_projection_flops(model.saab) + decode_flops(model.codec);
  for (const GbdtEnsemble& e : model.ensembles) total += gbdt_flops(e);
  return total;
}

// Structural per-iteration cost of the BCD label generator, times the
// configured iteration cap.
inline std::size_t bcd_flops_per_iter(const SystemConfig& cfg, const BcdConfig& bcd) {
  const std::size_t m = cfg.m_bs, n = cfg.ris_elements();
  const std::size_t nl_sum = static_cast<std::size_t>(cfg.n_r) + cfg.n_t;
  std::size_t total = 0;
  // w-step: effective channels, Gram matrices, eigen init, PG inner loop.
  total += nl_sum * n * m * flops_conv::kComplexMadd;        // H_eff builds
  total += nl_sum * m * m * flops_conv::kComplexMadd;        // A_l = H^H H
  total += flops_conv::kEigDecompPerM3 * m * m * m;          // dominant eigenvector
  const std::size_t f_eval = 2 * m * m * flops_conv::kComplexMadd;  // both quadratic forms
  const std::size_t grad = 2 * m * m * flops_conv::kComplexMadd + 2 * m;
  total += static_cast<std::size_t>(bcd.w_inner_iters) * (grad + 3 * f_eval);
  // RIS-step: per element, the joint phase/amplitude grid.
  const std::size_t cands =
      static_cast<std::size_t>(bcd.phase_grid) * bcd.phase_grid * bcd.amplitude_grid;
  const std::size_t per_cand = nl_sum * (flops_conv::kComplexMadd + flops_conv::kNorm2) + 2;
  total += n * cands * per_cand;
  return total;
}

inline FlopsReport flops_report(const GlModel& model, const SystemConfig& cfg,
                                const BcdConfig& bcd) {
  FlopsReport r;
  r.saab = saab_projection_flops(model.saab);
  for (const GbdtEnsemble& e : model.ensembles) r.gbdt += gbdt_flops(e);
  r.decode = decode_flops(model.codec);
  r.gl_total = r.saab + r.gbdt + r.decode;
  r.bcd_per_iter = bcd_flops_per_iter(cfg, bcd);
  r.bcd_total = r.bcd_per_iter * static_cast<std::size_t>(bcd.max_iters);
  r.gl_bcd_ratio = static_cast<double>(r.gl_total) / static_cast<double>(r.bcd_total);
  return r;
}

// Worst-case model shape for a config (every Saab channel kept, every tree
// at full depth). Lets `flops` report an upper bound without a trained model.
inline GlModel nominal_gl_model(const ToolConfig& cfg) {
  GlModel model;
  model.codec = TargetCodec{cfg.system.ris_elements(), cfg.system.m_bs};
  model.config_hash = config_hash(cfg);
  model.saab.in_m2 = 2 * cfg.system.m_bs;
  model.saab.in_np = cfg.system.n_r + cfg.system.n_t;
  model.saab.in_n = cfg.system.ris_elements();
  model.saab.in_k = cfg.sounding.amplitude_levels;
  const int lens[4] = {model.saab.in_m2, model.saab.in_k, model.saab.in_n, model.saab.in_np};
  const char* axes[4] = {"antenna", "amplitude", "phase", "pilot"};
  for (int s = 0; s < 4; ++s) {
    SaabStage& st = model.saab.stages[s];
    st.axis = axes[s];
    st.patch_len = lens[s];
    st.ac_anchors = RMat::Zero(lens[s], lens[s] - 1);
    st.energies = RVec::Zero(lens[s] - 1);
  }
  // One full-depth chain per round gives the worst-case traversal count.
  Tree chain;
  for (int d = 0; d < cfg.gbdt.max_depth; ++d) {
    const int self = static_cast<int>(chain.nodes.size());
    chain.nodes.push_back(TreeNode{0, 0.0, self + 1, self + 2, 0.0});
    chain.nodes.push_back(TreeNode{-1, 0.0, -1, -1, 0.0});
  }
  chain.nodes.push_back(TreeNode{-1, 0.0, -1, -1, 0.0});
  if (cfg.gbdt.max_depth == 0) chain.nodes = {TreeNode{-1, 0.0, -1, -1, 0.0}};
  GbdtEnsemble e;
  e.n_features = cfg.rft.select_count;
  e.max_depth = cfg.gbdt.max_depth;
  e.rounds = cfg.gbdt.rounds;
  e.trees.assign(cfg.gbdt.rounds, chain);
  model.ensembles.assign(model.codec.dim(), e);
  model.selection.select_count = cfg.rft.select_count;
  model.selection.selected.assign(model.codec.dim(), {});
  return model;
}

}  // namespace stargl

#endif  // STARGL_FLOPS_HPP_
