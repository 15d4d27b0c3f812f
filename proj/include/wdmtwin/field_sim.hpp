// Copyright (c) 2026 wdmtwin authors
// SPDX-License-Identifier: Apache-2.0
//
// Ground-truth stand-in for the deployed network: hidden amplifier and
// transceiver truth models, probe measurement with instrument noise, and
// exact SNR evaluation of candidate launch profiles. The fiber physics is
// shared with the twin; only the amplifiers and the transceiver curve are
// hidden.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wdmtwin/fiber.hpp"
#include "wdmtwin/grid.hpp"
#include "wdmtwin/link.hpp"
#include "wdmtwin/topology.hpp"
#include "wdmtwin/trx.hpp"

namespace wdmtwin {

/// Shape of the hidden amplifier truth. The defaults are what the bundled
/// scenario deploys; tests construct degenerate shapes (no tilt, no ripple)
/// to probe the training loop against a realizable target.
struct GroundTruthParams {
  double tilt_coeff_db_per_db = -0.15;  // per dB of input above reference
  double tilt_ref_input_dbm = 0.0;
  // Same-make devices track each other closely; the ripple tones carry
  // device-specific phases and set the device-to-device consistency.
  std::array<double, 3> ripple_amp_db = {0.12, 0.08, 0.05};
  std::array<double, 3> ripple_cycles = {1.5, 3.1, 6.3};
};

/// Hidden amplifier truth: input-power-dependent linear tilt, a static
/// three-tone gain ripple with device-specific phases, and a frequency- and
/// power-dependent noise figure. Output total is pinned to the setpoint by
/// the same renormalization the twin uses.
class GroundTruthEdfa {
 public:
  GroundTruthEdfa(const ChannelGrid& grid, double setpoint_dbm,
                  std::uint64_t phase_seed,
                  const GroundTruthParams& params = {});

  void amplify(SpanState& state,
               std::vector<std::string>* warnings = nullptr) const;

  /// Gain deviation from the flat setpoint gain (dB), before renormalization.
  std::vector<double> gain_deviation_db(double p_in_tot_dbm) const;
  /// Noise figure per channel (dB); quadratic growth toward the
  /// high-frequency band edge plus a low-input-power penalty.
  std::vector<double> nf_db(double p_in_tot_dbm) const;

  double setpoint_dbm() const { return setpoint_dbm_; }

 private:
  ChannelGrid grid_;
  double setpoint_dbm_;
  GroundTruthParams params_;
  std::array<double, 3> ripple_phase_{};
};

/// One remote measurement through a configured path.
struct ProbeRecord {
  std::int64_t probe_id = 0;
  std::string path_id;
  std::vector<double> p_in_dbm;
  std::vector<double> p_out_dbm;
  std::vector<double> p_ase_dbm;
};

class NetworkSim {
 public:
  explicit NetworkSim(Topology topology, const GroundTruthParams& params = {});

  const Topology& topology() const { return topology_; }
  const ChannelGrid& grid() const { return topology_.grid; }

  /// Propagates through the hidden truth cascade and returns the measured
  /// output signal and accumulated ASE spectra, each perturbed by
  /// independent Gaussian instrument noise (sigma in dB). Deterministic in
  /// (master seed, probe index).
  ProbeRecord measure_probe(const std::string& path_id,
                            const PowerProfile& input,
                            std::uint64_t probe_index) const;

  /// Exact truth evaluation (no instrument noise): full cascade including
  /// nonlinear interference and the hidden transceiver curve.
  SnrReport ground_truth_snr(const std::string& path_id,
                             const PowerProfile& input) const;

  const GroundTruthEdfa& device(std::size_t edfa_index) const {
    return devices_.at(edfa_index);
  }
  bool has_trx_truth() const { return trx_truth_.has_value(); }
  const TrxPenaltyModel& trx_truth() const { return *trx_truth_; }

 private:
  SpanState run_truth_cascade(const std::string& path_id,
                              const PowerProfile& input, bool with_nli) const;

  Topology topology_;
  std::vector<GroundTruthEdfa> devices_;
  std::optional<TrxPenaltyModel> trx_truth_;
};

}  // namespace wdmtwin
