// Copyright (c) 2026 wdmtwin authors
// SPDX-License-Identifier: Apache-2.0
//
// Trainable hybrid amplifier: a physical skeleton (flat gain from the
// operating point, ASE from noise figure) with two small networks supplying
// the gain shape deviation and the per-channel noise figure.
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "wdmtwin/fiber.hpp"
#include "wdmtwin/grid.hpp"
#include "wdmtwin/mlp.hpp"

#include "json.hpp"

namespace wdmtwin {

inline constexpr double kPlanckJs = 6.62607015e-34;
/// Training envelope for the amplifier operating point (total input, dBm).
inline constexpr double kEdfaMinInputDbm = -30.0;
inline constexpr double kEdfaMaxInputDbm = 23.0;

struct EdfaOperatingPoint {
  double p_in_tot_dbm = 0.0;
  double p_out_tot_dbm = 0.0;
};

struct TwinMetadata {
  double final_train_mse = 0.0;
  double final_val_mse = 0.0;
  int probe_count = 0;
  std::uint64_t seed = 0;
  bool trained = false;
};

struct EdfaTwinModel {
  std::uint64_t grid_fingerprint = 0;
  Mlp gain_net;  // outputs per-channel gain deviation, dB
  Mlp nf_net;    // outputs squashed to the noise-figure range, dB
  double b_ref_ghz = 12.5;
  double nf_lo_db = 3.0;
  double nf_hi_db = 12.0;
  TwinMetadata metadata;

  /// Both nets share the input normalization by construction.
  void set_input_normalization(double mean_in, double scale_in,
                               double mean_out, double scale_out);
};

/// Fresh model: Glorot hidden layers, zero output layers, so the initial
/// prediction is the pure physical skeleton (flat gain at the setpoint,
/// noise figure at the squash midpoint). Deterministic per seed.
EdfaTwinModel init_twin_model(const ChannelGrid& grid, std::uint64_t seed,
                              std::vector<int> hidden = {16, 16});

nlohmann::json twin_to_json(const EdfaTwinModel& model);
EdfaTwinModel twin_from_json(const nlohmann::json& j);
void save_twin(const EdfaTwinModel& model, const std::filesystem::path& path);
EdfaTwinModel load_twin(const std::filesystem::path& path);
/// Hash of the canonical serialized form, for output file headers.
std::uint64_t twin_hash(const EdfaTwinModel& model);

/// Spontaneous-emission power (mW, in b_ref) added by one channel of an
/// amplifier with the given noise figure and linear gain.
inline double ase_added_mw(double nf_db, double gain_lin, double f_thz,
                           double b_ref_ghz) {
  const double nf_lin = std::pow(10.0, nf_db / 10.0);
  const double g = gain_lin - 1.0 >= 0.0 ? gain_lin - 1.0 : 0.0;
  return 1e3 * kPlanckJs * (f_thz * 1e12) * (b_ref_ghz * 1e9) * nf_lin * g;
}

/// Optional weight leaves so the same amplify path serves twin training.
struct TwinLeaves {
  Mlp::LeafSet gain;
  Mlp::LeafSet nf;
};

/// Applies the amplifier in place. The output total is renormalized to the
/// setpoint exactly (including the added ASE). Out-of-envelope operating
/// points append a warning and proceed.
template <class T>
void amplify(const EdfaTwinModel& model, const ChannelGrid& grid,
             SpanStateT<T>& state, double setpoint_dbm,
             std::vector<std::string>* warnings = nullptr,
             const TwinLeaves* leaves = nullptr);

// ---- implementation ---------------------------------------------------

namespace detail {

template <class T>
std::vector<T> net_outputs(const Mlp& net, const Mlp::LeafSet* leaves,
                           const T& p_in_dbm, double setpoint_dbm);

template <>
inline std::vector<double> net_outputs<double>(const Mlp& net,
                                               const Mlp::LeafSet* leaves,
                                               const double& p_in_dbm,
                                               double setpoint_dbm) {
  (void)leaves;
  return net.forward(p_in_dbm, setpoint_dbm);
}

template <>
inline std::vector<ad::Value> net_outputs<ad::Value>(
    const Mlp& net, const Mlp::LeafSet* leaves, const ad::Value& p_in_dbm,
    double setpoint_dbm) {
  ad::Tape& tape = *p_in_dbm.tape;
  ad::Value setpoint = tape.constant(setpoint_dbm);
  if (leaves != nullptr) {
    return net.forward_with_leaves(tape, *leaves, p_in_dbm, setpoint);
  }
  return net.forward(tape, p_in_dbm, setpoint);
}

}  // namespace detail

template <class T>
void amplify(const EdfaTwinModel& model, const ChannelGrid& grid,
             SpanStateT<T>& state, double setpoint_dbm,
             std::vector<std::string>* warnings, const TwinLeaves* leaves) {
  if (model.grid_fingerprint != grid.fingerprint) {
    throw std::invalid_argument("amplify: model/grid fingerprint mismatch");
  }
  const int n = grid.n_ch;
  using ad::log10;
  using ad::max_with;
  using ad::pow10;
  using ad::sum;

  std::vector<T> p_ch;  // per-channel total at the amplifier input
  p_ch.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    p_ch.push_back(state.signal[static_cast<std::size_t>(i)] +
                   state.ase[static_cast<std::size_t>(i)] +
                   state.nli[static_cast<std::size_t>(i)]);
  }
  T p_in_mw = sum(std::span<const T>(p_ch));
  if (!(ad::val(p_in_mw) > 0.0)) {
    throw std::invalid_argument("amplify: dark input (zero total power)");
  }
  T p_in_dbm = log10(p_in_mw) * 10.0;
  const double p_in_fwd = ad::val(p_in_dbm);
  if (warnings != nullptr) {
    if (p_in_fwd < kEdfaMinInputDbm || p_in_fwd > kEdfaMaxInputDbm) {
      warnings->push_back("edfa input " + std::to_string(p_in_fwd) +
                          " dBm outside training envelope [-30, 23]");
    }
    if (p_in_fwd >= setpoint_dbm) {
      warnings->push_back("edfa operating point not amplifying (input " +
                          std::to_string(p_in_fwd) + " dBm, setpoint " +
                          std::to_string(setpoint_dbm) + " dBm)");
    }
  }

  // gain deviation with the power-weighted mean removed
  std::vector<T> dg = detail::net_outputs<T>(model.gain_net,
                                             leaves ? &leaves->gain : nullptr,
                                             p_in_dbm, setpoint_dbm);
  using ad::dot;
  T weighted = dot(std::span<const T>(p_ch), std::span<const T>(dg));
  T dg_mean = weighted / p_in_mw;
  T g_set_db = setpoint_dbm - p_in_dbm;

  std::vector<T> nf_raw = detail::net_outputs<T>(
      model.nf_net, leaves ? &leaves->nf : nullptr, p_in_dbm, setpoint_dbm);

  const double nf_span = model.nf_hi_db - model.nf_lo_db;
  using ad::sigmoid;
  std::vector<T> out_ch;
  out_ch.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    T g_db = g_set_db + (dg[idx] - dg_mean);
    T g_lin = pow10(g_db / 10.0);
    T nf_db = sigmoid(nf_raw[idx]) * nf_span + model.nf_lo_db;
    T nf_lin = pow10(nf_db / 10.0);
    const double quanta =
        1e3 * kPlanckJs * (grid.f_thz[idx] * 1e12) * (model.b_ref_ghz * 1e9);
    T ase_add = nf_lin * max_with(g_lin - 1.0, 0.0) * quanta;
    state.signal[idx] = state.signal[idx] * g_lin;
    state.ase[idx] = state.ase[idx] * g_lin + ase_add;
    state.nli[idx] = state.nli[idx] * g_lin;
    out_ch.push_back(state.signal[idx] + state.ase[idx] + state.nli[idx]);
  }

  // exact output-total constraint
  T total_out = sum(std::span<const T>(out_ch));
  T scale = dbm_to_mw(setpoint_dbm) / total_out;
  for (int i = 0; i < n; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    state.signal[idx] = state.signal[idx] * scale;
    state.ase[idx] = state.ase[idx] * scale;
    state.nli[idx] = state.nli[idx] * scale;
  }
}

}  // namespace wdmtwin
