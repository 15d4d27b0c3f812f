// Copyright (c) 2026 wdmtwin authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "wdmtwin/autodiff.hpp"

namespace wdmtwin {

/// Small dense network: tanh hidden layers, identity output, two normalized
/// scalar inputs. Plays the lookup-table role inside the hybrid amplifier
/// model, so it stays deliberately tiny.
struct Mlp {
  std::vector<int> dims;                     // e.g. {2, 16, 16, 48}
  std::vector<std::vector<double>> weights;  // per layer, row-major out x in
  std::vector<std::vector<double>> biases;   // per layer
  // Input normalization, frozen at training start: z = (x - mean) / scale.
  std::array<double, 2> in_mean{0.0, 0.0};
  std::array<double, 2> in_scale{1.0, 1.0};

  std::size_t parameter_count() const;
  void copy_parameters(std::span<double> out) const;
  void set_parameters(std::span<const double> in);

  /// Plain forward pass on the stored weights.
  std::vector<double> forward(double x0, double x1) const;

  /// Forward pass with constant weights, inputs on a tape (used when the
  /// quantity being differentiated is upstream of the network inputs).
  std::vector<ad::Value> forward(ad::Tape& tape, const ad::Value& x0,
                                 const ad::Value& x1) const;

  /// Weight leaves for training; ordering matches copy_parameters().
  struct LeafSet {
    std::vector<ad::Value> values;
  };
  LeafSet make_leaves(ad::Tape& tape) const;

  /// Forward pass where the weights themselves are tape leaves.
  std::vector<ad::Value> forward_with_leaves(ad::Tape& tape,
                                             const LeafSet& leaves,
                                             const ad::Value& x0,
                                             const ad::Value& x1) const;
};

/// Glorot-uniform hidden layers, zero output layer, deterministic per seed.
Mlp make_mlp(std::span<const int> dims, std::uint64_t seed);

}  // namespace wdmtwin
