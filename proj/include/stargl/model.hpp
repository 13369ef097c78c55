#ifndef STARGL_MODEL_HPP_
#define STARGL_MODEL_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "stargl/codec.hpp"
#include "stargl/config.hpp"
#include "stargl/container.hpp"
#include "stargl/dataset.hpp"
#include "stargl/gbdt.hpp"
#include "stargl/rft.hpp"
#include "stargl/saab.hpp"
#include "stargl/tensor.hpp"
#include "stargl/threading.hpp"

namespace stargl {

// The full CSI-free pipeline: Saab features -> RFT selection -> one boosted
// ensemble per target dimension -> trig/amplitude/precoder codec.
struct GlModel {
  SaabModel saab;
  RftSelection selection;
  std::vector<GbdtEnsemble> ensembles;  // one per target dimension
  TargetCodec codec;
  std::string config_hash;
  RVec val_mse;        // validation MSE per target dimension
  RVec val_mse_mean;   // mean-predictor validation MSE per dimension

  int dims() const { return static_cast<int>(ensembles.size()); }
};

inline RMat saab_feature_matrix(const SaabModel& saab, const std::vector<Tensor4C>& tensors,
                                int threads = 0) {
  RMat x(tensors.size(), saab.feature_len());
  parallel_for(tensors.size(), threads,
               [&](std::size_t i) { x.row(i) = saab_apply(saab, tensors[i]).transpose(); });
  return x;
}

// saab_fit on the training split, RFT per target dimension, then one
// ensemble per dimension. The split is deterministic: the first
// (1 - validation_fraction) of the dataset trains, the tail validates.
inline GlModel train(const Dataset& ds, const ToolConfig& cfg, int threads = 0) {
  const std::string expect = config_hash(cfg);
  if (ds.config_hash != expect)
    throw ConfigError("train: dataset config hash " + ds.config_hash +
                      " does not match current config " + expect);
  const int n = ds.size();
  const int n_val = std::max(1, static_cast<int>(std::llround(n * cfg.data.validation_fraction)));
  const int n_train = n - n_val;
  if (n_train < 2) throw DataError("train: not enough samples for a train/val split");

  GlModel model;
  model.codec = TargetCodec{cfg.system.ris_elements(), cfg.system.m_bs};
  model.config_hash = ds.config_hash;
  if (ds.labels.cols() != model.codec.dim())
    throw DataError("train: label width " + std::to_string(ds.labels.cols()) +
                    " does not match codec D = " + std::to_string(model.codec.dim()));

  std::vector<Tensor4C> train_tensors(ds.tensors.begin(), ds.tensors.begin() + n_train);
  model.saab = saab_fit(train_tensors, cfg.saab.energy_threshold, cfg.saab.nonneg_bias);

  const RMat x_all = saab_feature_matrix(model.saab, ds.tensors, threads);
  const RMat x_train = x_all.topRows(n_train);
  const RMat x_val = x_all.bottomRows(n_val);
  const RMat y_train = ds.labels.topRows(n_train);
  const RMat y_val = ds.labels.bottomRows(n_val);

  model.selection = rft_select(x_train, y_train, cfg.rft.threshold_bins, cfg.rft.select_count,
                               cfg.rft.shared_selection);

  const int d = model.codec.dim();
  model.ensembles.resize(d);
  model.val_mse.resize(d);
  model.val_mse_mean.resize(d);
  parallel_for(static_cast<std::size_t>(d), threads, [&](std::size_t di) {
    const std::vector<int>& sel = model.selection.selected[di];
    RMat xs(n_train, sel.size());
    for (std::size_t c = 0; c < sel.size(); ++c) xs.col(c) = x_train.col(sel[c]);
    model.ensembles[di] =
        gbdt_fit(xs, y_train.col(di), cfg.gbdt, derive_seed(ds.base_seed, 0x646896ULL, di));

    RMat xv(n_val, sel.size());
    for (std::size_t c = 0; c < sel.size(); ++c) xv.col(c) = x_val.col(sel[c]);
    double se = 0.0;
    for (int i = 0; i < n_val; ++i) {
      const double p = gbdt_predict(model.ensembles[di], xv.row(i).transpose());
      se += (p - y_val(i, di)) * (p - y_val(i, di));
    }
    model.val_mse(di) = se / n_val;
    const double mean = y_train.col(di).mean();
    model.val_mse_mean(di) = (y_val.col(di).array() - mean).square().mean();
  });
  return model;
}

// CSI-free inference: tensor in, feasible precoding solution out. This path
// has no channel type in reach by construction; rates stay unset here.
inline PrecodingSolution infer(const GlModel& model, const Tensor4C& tensor,
                               const SystemConfig& cfg, DecodeStats* stats = nullptr) {
  const RVec features = saab_apply(model.saab, tensor);
  RVec u(model.dims());
  for (int di = 0; di < model.dims(); ++di) {
    const std::vector<int>& sel = model.selection.selected[di];
    RVec xs(sel.size());
    for (std::size_t c = 0; c < sel.size(); ++c) xs(c) = features(sel[c]);
    u(di) = gbdt_predict(model.ensembles[di], xs);
  }
  return decode_targets(u, model.codec, cfg, stats);
}

// ---- model container ----

inline ArrayContainer model_to_container(const GlModel& model) {
  ArrayContainer c;
  c.meta["kind"] = "stargl-model";
  c.meta["config_hash"] = model.config_hash;
  c.meta["codec"] = {{"n", model.codec.n}, {"m", model.codec.m}};
  c.meta["saab"] = {{"in_m2", model.saab.in_m2},
                    {"in_np", model.saab.in_np},
                    {"in_n", model.saab.in_n},
                    {"in_k", model.saab.in_k},
                    {"nonneg", model.saab.nonneg}};
  for (int s = 0; s < 4; ++s) {
    const SaabStage& st = model.saab.stages[s];
    const std::string p = "saab/stage" + std::to_string(s);
    c.meta[p] = {{"axis", st.axis},       {"patch_len", st.patch_len},
                 {"bias", st.bias},       {"tau", st.tau},
                 {"dc_energy", st.dc_energy}, {"total_ac_energy", st.total_ac_energy},
                 {"degenerate", st.degenerate}};
    c.add_f64(p + "/anchors",
              {static_cast<std::size_t>(st.ac_anchors.rows()),
               static_cast<std::size_t>(st.ac_anchors.cols())},
              std::vector<double>(st.ac_anchors.data(), st.ac_anchors.data() + st.ac_anchors.size()));
    c.add_f64(p + "/energies", {static_cast<std::size_t>(st.energies.size())},
              std::vector<double>(st.energies.data(), st.energies.data() + st.energies.size()));
  }

  c.meta["selection"] = {{"select_count", model.selection.select_count},
                         {"dims", model.selection.dims()}};
  for (int di = 0; di < model.selection.dims(); ++di) {
    std::vector<std::int64_t> idx(model.selection.selected[di].begin(),
                                  model.selection.selected[di].end());
    const std::size_t count = idx.size();
    c.add_i64("selection/" + std::to_string(di), {count}, std::move(idx));
  }

  c.meta["gbdt_dims"] = model.dims();
  for (int di = 0; di < model.dims(); ++di) {
    const GbdtEnsemble& e = model.ensembles[di];
    const std::string p = "gbdt/" + std::to_string(di);
    c.meta[p] = {{"base", e.base},
                 {"eta", e.eta},
                 {"lambda", e.lambda},
                 {"gamma", e.gamma},
                 {"max_depth", e.max_depth},
                 {"rounds", e.rounds},
                 {"row_subsample", e.row_subsample},
                 {"feature_subsample", e.feature_subsample},
                 {"seed", e.seed},
                 {"n_features", e.n_features}};
    // Pre-order node lists, flattened with explicit tree offsets.
    std::vector<std::int64_t> structure;  // per node: feature, left, right
    std::vector<double> values;           // per node: threshold, weight
    std::vector<std::int64_t> offsets{0};
    for (const Tree& t : e.trees) {
      for (const TreeNode& nd : t.nodes) {
        structure.push_back(nd.feature);
        structure.push_back(nd.left);
        structure.push_back(nd.right);
        values.push_back(nd.threshold);
        values.push_back(nd.weight);
      }
      offsets.push_back(static_cast<std::int64_t>(offsets.back() + t.nodes.size()));
    }
    const std::size_t n_offsets = offsets.size();
    const std::size_t n_nodes = structure.size() / 3;
    c.add_i64(p + "/offsets", {n_offsets}, std::move(offsets));
    c.add_i64(p + "/structure", {n_nodes, 3}, std::move(structure));
    c.add_f64(p + "/values", {n_nodes, 2}, std::move(values));
    c.add_f64(p + "/train_loss", {e.train_loss.size()}, e.train_loss);
  }

  c.add_f64("val_mse", {static_cast<std::size_t>(model.val_mse.size())},
            std::vector<double>(model.val_mse.data(), model.val_mse.data() + model.val_mse.size()));
  c.add_f64("val_mse_mean", {static_cast<std::size_t>(model.val_mse_mean.size())},
            std::vector<double>(model.val_mse_mean.data(),
                                model.val_mse_mean.data() + model.val_mse_mean.size()));
  return c;
}

inline void save_model(const GlModel& model, const std::string& path) {
  model_to_container(model).save(path);
}

inline GlModel load_model(const std::string& path) {
  const ArrayContainer c = ArrayContainer::load(path);
  if (c.meta.value("kind", "") != "stargl-model")
    throw DataError("load_model: '" + path + "' is not a model container");
  GlModel model;
  model.config_hash = c.meta.at("config_hash").get<std::string>();
  model.codec.n = c.meta.at("codec").at("n").get<int>();
  model.codec.m = c.meta.at("codec").at("m").get<int>();
  model.saab.in_m2 = c.meta.at("saab").at("in_m2").get<int>();
  model.saab.in_np = c.meta.at("saab").at("in_np").get<int>();
  model.saab.in_n = c.meta.at("saab").at("in_n").get<int>();
  model.saab.in_k = c.meta.at("saab").at("in_k").get<int>();
  model.saab.nonneg = c.meta.at("saab").at("nonneg").get<bool>();
  for (int s = 0; s < 4; ++s) {
    const std::string p = "saab/stage" + std::to_string(s);
    SaabStage& st = model.saab.stages[s];
    st.axis = c.meta.at(p).at("axis").get<std::string>();
    st.patch_len = c.meta.at(p).at("patch_len").get<int>();
    st.bias = c.meta.at(p).at("bias").get<double>();
    st.tau = c.meta.at(p).at("tau").get<double>();
    st.dc_energy = c.meta.at(p).at("dc_energy").get<double>();
    st.total_ac_energy = c.meta.at(p).at("total_ac_energy").get<double>();
    st.degenerate = c.meta.at(p).at("degenerate").get<bool>();
    const auto& ashape = c.shape(p + "/anchors");
    st.ac_anchors = Eigen::Map<const RMat>(c.f64(p + "/anchors").data(), ashape[0], ashape[1]);
    const auto& ev = c.f64(p + "/energies");
    st.energies = Eigen::Map<const RVec>(ev.data(), ev.size());
  }
  const int sel_dims = c.meta.at("selection").at("dims").get<int>();
  model.selection.select_count = c.meta.at("selection").at("select_count").get<int>();
  model.selection.selected.resize(sel_dims);
  for (int di = 0; di < sel_dims; ++di) {
    const auto& idx = c.i64("selection/" + std::to_string(di));
    model.selection.selected[di].assign(idx.begin(), idx.end());
  }
  const int dims = c.meta.at("gbdt_dims").get<int>();
  model.ensembles.resize(dims);
  for (int di = 0; di < dims; ++di) {
    const std::string p = "gbdt/" + std::to_string(di);
    GbdtEnsemble& e = model.ensembles[di];
    e.base = c.meta.at(p).at("base").get<double>();
    e.eta = c.meta.at(p).at("eta").get<double>();
    e.lambda = c.meta.at(p).at("lambda").get<double>();
    e.gamma = c.meta.at(p).at("gamma").get<double>();
    e.max_depth = c.meta.at(p).at("max_depth").get<int>();
    e.rounds = c.meta.at(p).at("rounds").get<int>();
    e.row_subsample = c.meta.at(p).at("row_subsample").get<double>();
    e.feature_subsample = c.meta.at(p).at("feature_subsample").get<double>();
    e.seed = c.meta.at(p).at("seed").get<std::uint64_t>();
    e.n_features = c.meta.at(p).at("n_features").get<int>();
    const auto& offsets = c.i64(p + "/offsets");
    const auto& structure = c.i64(p + "/structure");
    const auto& values = c.f64(p + "/values");
    e.trees.resize(offsets.size() - 1);
    for (std::size_t t = 0; t + 1 < offsets.size(); ++t) {
      Tree& tree = e.trees[t];
      tree.nodes.resize(offsets[t + 1] - offsets[t]);
      for (std::size_t nd = 0; nd < tree.nodes.size(); ++nd) {
        const std::size_t g = offsets[t] + nd;
        tree.nodes[nd].feature = static_cast<int>(structure[g * 3 + 0]);
        tree.nodes[nd].left = static_cast<int>(structure[g * 3 + 1]);
        tree.nodes[nd].right = static_cast<int>(structure[g * 3 + 2]);
        tree.nodes[nd].threshold = values[g * 2 + 0];
        tree.nodes[nd].weight = values[g * 2 + 1];
      }
    }
    e.train_loss = c.f64(p + "/train_loss");
  }
  const auto& vm = c.f64("val_mse");
  model.val_mse = Eigen::Map<const RVec>(vm.data(), vm.size());
  const auto& vmm = c.f64("val_mse_mean");
  model.val_mse_mean = Eigen::Map<const RVec>(vmm.data(), vmm.size());
  return model;
}

// Hash of the serialized model; equal hashes mean bit-identical models.
inline std::string model_hash(const GlModel& model) {
  return hash_hex(model_to_container(model).content_hash());
}

}  // namespace stargl

#endif  // STARGL_MODEL_HPP_
