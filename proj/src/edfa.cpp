// Copyright (c) 2026 wdmtwin authors
// SPDX-License-Identifier: Apache-2.0
#include "wdmtwin/edfa.hpp"

#include <fstream>

#include "wdmtwin/hash.hpp"
#include "wdmtwin/rng.hpp"

namespace wdmtwin {

void EdfaTwinModel::set_input_normalization(double mean_in, double scale_in,
                                            double mean_out,
                                            double scale_out) {
  gain_net.in_mean = {mean_in, mean_out};
  gain_net.in_scale = {scale_in, scale_out};
  nf_net.in_mean = gain_net.in_mean;
  nf_net.in_scale = gain_net.in_scale;
}

EdfaTwinModel init_twin_model(const ChannelGrid& grid, std::uint64_t seed,
                              std::vector<int> hidden) {
  std::vector<int> dims;
  dims.push_back(2);
  dims.insert(dims.end(), hidden.begin(), hidden.end());
  dims.push_back(grid.n_ch);
  EdfaTwinModel m;
  m.grid_fingerprint = grid.fingerprint;
  m.b_ref_ghz = grid.b_ref_ghz;
  m.gain_net = make_mlp(dims, mix_seed(seed, 1));
  m.nf_net = make_mlp(dims, mix_seed(seed, 2));
  m.metadata.seed = seed;
  // reasonable defaults; training freezes its own constants before updates
  m.set_input_normalization(0.0, 10.0, 18.0, 5.0);
  return m;
}

namespace {

nlohmann::json mlp_to_json(const Mlp& net) {
  nlohmann::json j;
  j["layer_dims"] = net.dims;
  j["weights"] = net.weights;
  j["biases"] = net.biases;
  j["norm_mean"] = net.in_mean;
  j["norm_scale"] = net.in_scale;
  return j;
}

Mlp mlp_from_json(const nlohmann::json& j) {
  Mlp net;
  net.dims = j.at("layer_dims").get<std::vector<int>>();
  net.weights = j.at("weights").get<std::vector<std::vector<double>>>();
  net.biases = j.at("biases").get<std::vector<std::vector<double>>>();
  const auto mean = j.at("norm_mean").get<std::vector<double>>();
  const auto scale = j.at("norm_scale").get<std::vector<double>>();
  if (net.dims.size() < 2 || net.weights.size() != net.dims.size() - 1 ||
      net.biases.size() != net.weights.size() || mean.size() != 2 ||
      scale.size() != 2) {
    throw std::invalid_argument("model json: inconsistent network shape");
  }
  for (std::size_t l = 0; l + 1 < net.dims.size(); ++l) {
    const auto rows = static_cast<std::size_t>(net.dims[l + 1]);
    const auto cols = static_cast<std::size_t>(net.dims[l]);
    if (net.weights[l].size() != rows * cols || net.biases[l].size() != rows) {
      throw std::invalid_argument("model json: layer size mismatch");
    }
  }
  net.in_mean = {mean[0], mean[1]};
  net.in_scale = {scale[0], scale[1]};
  return net;
}

}  // namespace

nlohmann::json twin_to_json(const EdfaTwinModel& model) {
  nlohmann::json j;
  j["grid_fingerprint"] = hash_to_hex(model.grid_fingerprint);
  j["gain_net"] = mlp_to_json(model.gain_net);
  j["nf_net"] = mlp_to_json(model.nf_net);
  j["b_ref_ghz"] = model.b_ref_ghz;
  j["nf_bounds"] = {model.nf_lo_db, model.nf_hi_db};
  j["metadata"] = {{"final_train_mse", model.metadata.final_train_mse},
                   {"final_val_mse", model.metadata.final_val_mse},
                   {"probe_count", model.metadata.probe_count},
                   {"seed", model.metadata.seed},
                   {"trained", model.metadata.trained}};
  return j;
}

EdfaTwinModel twin_from_json(const nlohmann::json& j) {
  EdfaTwinModel m;
  m.grid_fingerprint =
      std::stoull(j.at("grid_fingerprint").get<std::string>(), nullptr, 16);
  m.gain_net = mlp_from_json(j.at("gain_net"));
  m.nf_net = mlp_from_json(j.at("nf_net"));
  m.b_ref_ghz = j.at("b_ref_ghz").get<double>();
  const auto bounds = j.at("nf_bounds").get<std::vector<double>>();
  if (bounds.size() != 2) {
    throw std::invalid_argument("model json: nf_bounds must have 2 entries");
  }
  m.nf_lo_db = bounds[0];
  m.nf_hi_db = bounds[1];
  const auto& md = j.at("metadata");
  m.metadata.final_train_mse = md.at("final_train_mse").get<double>();
  m.metadata.final_val_mse = md.at("final_val_mse").get<double>();
  m.metadata.probe_count = md.at("probe_count").get<int>();
  m.metadata.seed = md.at("seed").get<std::uint64_t>();
  m.metadata.trained = md.at("trained").get<bool>();
  return m;
}

void save_twin(const EdfaTwinModel& model, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write model file: " + path.string());
  }
  out << twin_to_json(model).dump(2) << "\n";
}

EdfaTwinModel load_twin(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::invalid_argument("cannot read model file: " + path.string());
  }
  nlohmann::json j;
  in >> j;
  return twin_from_json(j);
}

std::uint64_t twin_hash(const EdfaTwinModel& model) {
  return hash_of_string(twin_to_json(model).dump());
}

}  // namespace wdmtwin
