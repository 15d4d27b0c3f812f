// Copyright (c) 2026 wdmtwin authors
// SPDX-License-Identifier: Apache-2.0
//
// Remote-training harness: randomized probe generation through the
// simulated access link, and gradient-descent fitting of the amplifier twin
// on the cascade mean squared error (dB domain).
#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "wdmtwin/edfa.hpp"
#include "wdmtwin/field_sim.hpp"
#include "wdmtwin/link.hpp"

#include "json.hpp"

namespace wdmtwin {

struct AdamParams {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

/// First-order moment-tracking optimizer; deterministic.
class AdamOptimizer {
 public:
  AdamOptimizer(std::size_t n, AdamParams params);
  void step(std::span<const double> grad, std::span<double> params);

 private:
  AdamParams p_;
  std::vector<double> m_, v_;
  long t_ = 0;
};

struct TrainConfig {
  int n_train = 200;
  int n_val = 50;
  double p_tot_min_dbm = 12.0;
  double p_tot_max_dbm = 21.0;
  double offset_range_db = 9.0;  // per-channel shaping around flat
  AdamParams adam{1e-3, 0.9, 0.999, 1e-8};
  int epochs = 500;
  int batch_size = 16;
  std::uint64_t seed = 20220901;

  void validate() const;
};

TrainConfig train_config_from_json(const nlohmann::json& j);
TrainConfig load_train_config(const std::filesystem::path& path);

/// Shaped random probes: per-channel offsets uniform in +-offset_range
/// around flat, rescaled to a total power uniform in the configured range,
/// then measured through the simulator. Deterministic per seed; probe k's
/// randomness is independent of all other probes.
std::vector<ProbeRecord> generate_probes(const NetworkSim& sim,
                                         const std::string& path_id,
                                         const TrainConfig& cfg, int count);

struct TrainCurvePoint {
  int epoch = 0;
  double train_mse = 0.0;
  double val_mse = 0.0;
};

struct TrainResult {
  EdfaTwinModel model;
  std::vector<TrainCurvePoint> curve;
};

/// Fits one shared twin instance on all amplifier sites of the path,
/// minimizing the mean over probes and channels of
/// (p_out_pred - p_out_meas)^2 + (p_ase_pred - p_ase_meas)^2 in dB^2.
/// Validation probes are never used for weight updates.
TrainResult train_twin(std::span<const ProbeRecord> train_probes,
                       std::span<const ProbeRecord> val_probes,
                       const LinkPath& path, const TrainConfig& cfg);

struct ValidationReport {
  double rms_gain_err_db = 0.0;
  double max_gain_err_db = 0.0;
  double rms_ase_err_db = 0.0;
  double max_ase_err_db = 0.0;
  std::vector<double> per_channel_rms_gain_db;
  std::vector<double> per_channel_rms_ase_db;
};

ValidationReport validate_twin(const EdfaTwinModel& model,
                               const LinkPath& path,
                               std::span<const ProbeRecord> probes);

/// Model prediction of one probe measurement (output and ASE spectra, dBm).
std::pair<std::vector<double>, std::vector<double>> predict_probe_response(
    const EdfaTwinModel& model, const LinkPath& path,
    const ProbeRecord& probe);

// ---- file formats -------------------------------------------------------

/// probes CSV: probe_id,path_id,ch,f_thz,p_in_dbm,p_out_dbm,p_ase_dbm.
void save_probes_csv(std::span<const ProbeRecord> probes,
                     const ChannelGrid& grid, const std::filesystem::path& p,
                     std::uint64_t config_hash);
std::vector<ProbeRecord> load_probes_csv(const ChannelGrid& grid,
                                         const std::filesystem::path& p);

/// training curve CSV: epoch,train_mse,val_mse.
void save_curve_csv(std::span<const TrainCurvePoint> curve,
                    const std::filesystem::path& p, std::uint64_t config_hash,
                    std::uint64_t model_hash);

}  // namespace wdmtwin
