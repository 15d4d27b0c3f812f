// Copyright (c) 2026 wdmtwin authors
// SPDX-License-Identifier: Apache-2.0
#include "wdmtwin/mlp.hpp"

#include <cmath>
#include <stdexcept>

#include "wdmtwin/rng.hpp"

namespace wdmtwin {

std::size_t Mlp::parameter_count() const {
  std::size_t n = 0;
  for (std::size_t l = 0; l < weights.size(); ++l) {
    n += weights[l].size() + biases[l].size();
  }
  return n;
}

void Mlp::copy_parameters(std::span<double> out) const {
  std::size_t k = 0;
  for (std::size_t l = 0; l < weights.size(); ++l) {
    for (double w : weights[l]) out[k++] = w;
    for (double b : biases[l]) out[k++] = b;
  }
  if (k != out.size()) throw std::invalid_argument("mlp: parameter size");
}

void Mlp::set_parameters(std::span<const double> in) {
  std::size_t k = 0;
  for (std::size_t l = 0; l < weights.size(); ++l) {
    for (double& w : weights[l]) w = in[k++];
    for (double& b : biases[l]) b = in[k++];
  }
  if (k != in.size()) throw std::invalid_argument("mlp: parameter size");
}

std::vector<double> Mlp::forward(double x0, double x1) const {
  std::vector<double> act = {(x0 - in_mean[0]) / in_scale[0],
                             (x1 - in_mean[1]) / in_scale[1]};
  for (std::size_t l = 0; l < weights.size(); ++l) {
    const int n_out = dims[l + 1];
    const int n_in = dims[l];
    std::vector<double> next(static_cast<std::size_t>(n_out));
    const bool hidden = l + 1 < weights.size();
    for (int o = 0; o < n_out; ++o) {
      double s = biases[l][static_cast<std::size_t>(o)];
      const double* row = &weights[l][static_cast<std::size_t>(o * n_in)];
      for (int i = 0; i < n_in; ++i) s += row[i] * act[static_cast<std::size_t>(i)];
      next[static_cast<std::size_t>(o)] = hidden ? std::tanh(s) : s;
    }
    act = std::move(next);
  }
  return act;
}

std::vector<ad::Value> Mlp::forward(ad::Tape& tape, const ad::Value& x0,
                                    const ad::Value& x1) const {
  std::vector<ad::Value> act = {(x0 - in_mean[0]) / in_scale[0],
                                (x1 - in_mean[1]) / in_scale[1]};
  for (std::size_t l = 0; l < weights.size(); ++l) {
    const int n_out = dims[l + 1];
    const int n_in = dims[l];
    std::vector<ad::Value> next;
    next.reserve(static_cast<std::size_t>(n_out));
    const bool hidden = l + 1 < weights.size();
    for (int o = 0; o < n_out; ++o) {
      std::span<const double> row(&weights[l][static_cast<std::size_t>(o * n_in)],
                                  static_cast<std::size_t>(n_in));
      ad::Value s = ad::linear(row, act) + biases[l][static_cast<std::size_t>(o)];
      next.push_back(hidden ? ad::tanh(s) : s);
    }
    act = std::move(next);
  }
  (void)tape;
  return act;
}

Mlp::LeafSet Mlp::make_leaves(ad::Tape& tape) const {
  LeafSet set;
  set.values.reserve(parameter_count());
  for (std::size_t l = 0; l < weights.size(); ++l) {
    for (double w : weights[l]) set.values.push_back(tape.leaf(w));
    for (double b : biases[l]) set.values.push_back(tape.leaf(b));
  }
  return set;
}

std::vector<ad::Value> Mlp::forward_with_leaves(ad::Tape& tape,
                                                const LeafSet& leaves,
                                                const ad::Value& x0,
                                                const ad::Value& x1) const {
  std::vector<ad::Value> act = {(x0 - in_mean[0]) / in_scale[0],
                                (x1 - in_mean[1]) / in_scale[1]};
  std::size_t k = 0;
  for (std::size_t l = 0; l < weights.size(); ++l) {
    const int n_out = dims[l + 1];
    const int n_in = dims[l];
    std::vector<ad::Value> next;
    next.reserve(static_cast<std::size_t>(n_out));
    const bool hidden = l + 1 < weights.size();
    std::span<const ad::Value> w_leaves(&leaves.values[k],
                                        static_cast<std::size_t>(n_out * n_in));
    std::span<const ad::Value> b_leaves(&leaves.values[k + w_leaves.size()],
                                        static_cast<std::size_t>(n_out));
    for (int o = 0; o < n_out; ++o) {
      std::span<const ad::Value> row(&w_leaves[static_cast<std::size_t>(o * n_in)],
                                     static_cast<std::size_t>(n_in));
      ad::Value s = ad::dot(row, std::span<const ad::Value>(act)) +
                    b_leaves[static_cast<std::size_t>(o)];
      next.push_back(hidden ? ad::tanh(s) : s);
    }
    k += w_leaves.size() + b_leaves.size();
    act = std::move(next);
  }
  (void)tape;
  return act;
}

Mlp make_mlp(std::span<const int> dims, std::uint64_t seed) {
  if (dims.size() < 2) throw std::invalid_argument("mlp: need >= 2 layers");
  if (dims.front() != 2) throw std::invalid_argument("mlp: expects 2 inputs");
  Mlp net;
  net.dims.assign(dims.begin(), dims.end());
  Rng rng(mix_seed(seed, 0x6D6C70ull));
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    const int n_in = dims[l];
    const int n_out = dims[l + 1];
    std::vector<double> w(static_cast<std::size_t>(n_in * n_out), 0.0);
    std::vector<double> b(static_cast<std::size_t>(n_out), 0.0);
    const bool output_layer = (l + 2 == dims.size());
    if (!output_layer) {
      const double limit = std::sqrt(6.0 / (n_in + n_out));
      for (double& x : w) x = rng.uniform(-limit, limit);
    }
    net.weights.push_back(std::move(w));
    net.biases.push_back(std::move(b));
  }
  return net;
}

}  // namespace wdmtwin
