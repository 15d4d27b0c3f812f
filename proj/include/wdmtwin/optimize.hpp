// Copyright (c) 2026 wdmtwin authors
// SPDX-License-Identifier: Apache-2.0
//
// Launch-power profile optimization at fixed total power: annealed
// smooth-minimum of the per-channel SNR, gradient descent through the twin
// cascade.
#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "wdmtwin/link.hpp"
#include "wdmtwin/train.hpp"

namespace wdmtwin {

struct OptConfig {
  double p_tot_dbm = 18.0;
  std::string variant = "full";  // full | no-nl | no-nl-no-trx
  std::vector<double> tau_schedule = {1.0, 4.0, 16.0};  // 1/dB, ascending
  int iters_per_stage = 700;
  AdamParams adam{0.01, 0.9, 0.999, 1e-8};
  double max_dynamic_range_db = 15.0;
  std::uint64_t seed = 1;

  void validate() const;
};

OptConfig opt_config_from_json(const nlohmann::json& j);
OptConfig load_opt_config(const std::filesystem::path& path);

/// Softmax-style parameterization: p_i = P_tot * exp(theta_i)/sum exp(theta).
/// Any theta yields the exact total power; theta == const is the flat
/// profile.
PowerProfile parameterize(const ChannelGrid& grid,
                          std::span<const double> theta, double p_tot_dbm);

/// -(1/tau) ln sum exp(-tau x_i); within ln(n)/tau below the hard minimum.
double smooth_min_db(std::span<const double> xs_db, double tau);
ad::Value smooth_min_db(std::span<const ad::Value> xs_db, double tau);

struct TracePoint {
  int iter = 0;       // global iteration index across stages
  double tau = 0.0;
  double cost_db = 0.0;  // best-so-far cost within the stage
};

struct OptimizeResult {
  PowerProfile profile;
  std::vector<TracePoint> trace;
  /// Hard minimum SNR of the final profile under the full twin (all
  /// impairments on), regardless of the optimization variant.
  double hard_min_snr_db_full = 0.0;
  std::vector<std::string> warnings;
};

/// Runs the tau schedule with Adam; deterministic per config. theta0 may be
/// empty (flat start).
OptimizeResult optimize_profile(const LinkPath& path,
                                const TrxPenaltyModel* trx,
                                const OptConfig& cfg,
                                std::span<const double> theta0 = {});

/// trajectory CSV: iter,tau,cost_db.
void save_trace_csv(std::span<const TracePoint> trace,
                    const std::filesystem::path& p, std::uint64_t config_hash,
                    std::uint64_t model_hash);

}  // namespace wdmtwin
