// Copyright (c) 2026 wdmtwin authors
// SPDX-License-Identifier: Apache-2.0
#include "wdmtwin/field_sim.hpp"

#include <cmath>

#include "wdmtwin/rng.hpp"

namespace wdmtwin {

GroundTruthEdfa::GroundTruthEdfa(const ChannelGrid& grid, double setpoint_dbm,
                                 std::uint64_t phase_seed,
                                 const GroundTruthParams& params)
    : grid_(grid), setpoint_dbm_(setpoint_dbm), params_(params) {
  Rng rng(mix_seed(phase_seed, 0xEDFAull));
  for (double& p : ripple_phase_) p = rng.uniform(0.0, 2.0 * M_PI);
}

std::vector<double> GroundTruthEdfa::gain_deviation_db(
    double p_in_tot_dbm) const {
  const double f_lo = grid_.f_min_thz();
  const double f_hi = grid_.f_max_thz();
  const double f_mid = 0.5 * (f_lo + f_hi);
  std::vector<double> dev(static_cast<std::size_t>(grid_.n_ch));
  for (int i = 0; i < grid_.n_ch; ++i) {
    const double f = grid_.f_thz[static_cast<std::size_t>(i)];
    const double t = 2.0 * (f - f_mid) / (f_hi - f_lo);  // -1..+1 tilt basis
    double g = params_.tilt_coeff_db_per_db *
               (p_in_tot_dbm - params_.tilt_ref_input_dbm) * t;
    const double u = (f - f_lo) / (f_hi - f_lo);
    for (std::size_t k = 0; k < params_.ripple_amp_db.size(); ++k) {
      g += params_.ripple_amp_db[k] *
           std::sin(2.0 * M_PI * params_.ripple_cycles[k] * u +
                    ripple_phase_[k]);
    }
    dev[static_cast<std::size_t>(i)] = g;
  }
  return dev;
}

std::vector<double> GroundTruthEdfa::nf_db(double p_in_tot_dbm) const {
  const double f_lo = grid_.f_min_thz();
  const double f_hi = grid_.f_max_thz();
  std::vector<double> nf(static_cast<std::size_t>(grid_.n_ch));
  const double low_power_penalty =
      0.05 * std::max(0.0, -5.0 - p_in_tot_dbm);
  for (int i = 0; i < grid_.n_ch; ++i) {
    const double f = grid_.f_thz[static_cast<std::size_t>(i)];
    const double u = (f - f_lo) / (f_hi - f_lo);  // 1 at the 1532 nm edge
    nf[static_cast<std::size_t>(i)] = 4.5 + 1.5 * u * u + low_power_penalty;
  }
  return nf;
}

void GroundTruthEdfa::amplify(SpanState& state,
                              std::vector<std::string>* warnings) const {
  const int n = grid_.n_ch;
  double p_in_mw = 0.0;
  for (int i = 0; i < n; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    p_in_mw += state.signal[idx] + state.ase[idx] + state.nli[idx];
  }
  if (!(p_in_mw > 0.0)) {
    throw std::invalid_argument("truth edfa: dark input");
  }
  const double p_in_dbm = 10.0 * std::log10(p_in_mw);
  if (warnings != nullptr &&
      (p_in_dbm < kEdfaMinInputDbm || p_in_dbm > kEdfaMaxInputDbm)) {
    warnings->push_back("truth edfa input " + std::to_string(p_in_dbm) +
                        " dBm outside envelope");
  }
  const double g_set_db = setpoint_dbm_ - p_in_dbm;
  const std::vector<double> dev = gain_deviation_db(p_in_dbm);
  const std::vector<double> nf = nf_db(p_in_dbm);
  double total_out = 0.0;
  for (int i = 0; i < n; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    const double g_lin = std::pow(10.0, (g_set_db + dev[idx]) / 10.0);
    const double ase_add = ase_added_mw(nf[idx], g_lin,
                                        grid_.f_thz[idx], grid_.b_ref_ghz);
    state.signal[idx] *= g_lin;
    state.ase[idx] = state.ase[idx] * g_lin + ase_add;
    state.nli[idx] *= g_lin;
    total_out += state.signal[idx] + state.ase[idx] + state.nli[idx];
  }
  const double scale = dbm_to_mw(setpoint_dbm_) / total_out;
  for (int i = 0; i < n; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    state.signal[idx] *= scale;
    state.ase[idx] *= scale;
    state.nli[idx] *= scale;
  }
}

NetworkSim::NetworkSim(Topology topology, const GroundTruthParams& params)
    : topology_(std::move(topology)) {
  devices_.reserve(topology_.edfas.size());
  for (const EdfaSpec& spec : topology_.edfas) {
    // With device variation disabled all devices share one phase seed and
    // are bit-identical functions.
    const std::uint64_t seed = topology_.sim.device_variation
                                   ? spec.device_seed
                                   : topology_.sim.master_seed;
    devices_.emplace_back(topology_.grid, spec.setpoint_dbm, seed, params);
  }
  if (!topology_.trx_truth_csv.empty()) {
    const std::filesystem::path p =
        topology_.base_dir / topology_.trx_truth_csv;
    trx_truth_ = load_trx_csv(p);
  }
}

SpanState NetworkSim::run_truth_cascade(const std::string& path_id,
                                        const PowerProfile& input,
                                        bool with_nli) const {
  require_same_grid(topology_.grid, input);
  SpanState state = make_span_state(topology_.grid, input);
  for (const ResolvedHop& hop : resolve_path(topology_, path_id)) {
    propagate_span(hop.span, topology_.grid, state, with_nli);
    if (hop.amplified) devices_[hop.edfa_index].amplify(state);
  }
  return state;
}

ProbeRecord NetworkSim::measure_probe(const std::string& path_id,
                                      const PowerProfile& input,
                                      std::uint64_t probe_index) const {
  // NLI of the probe comb is far below instrument noise on the training
  // loop and is not part of the reported spectra, so the truth pass skips it.
  SpanState state = run_truth_cascade(path_id, input, /*with_nli=*/false);
  const int n = topology_.grid.n_ch;
  ProbeRecord rec;
  rec.probe_id = static_cast<std::int64_t>(probe_index);
  rec.path_id = path_id;
  rec.p_in_dbm.resize(static_cast<std::size_t>(n));
  rec.p_out_dbm.resize(static_cast<std::size_t>(n));
  rec.p_ase_dbm.resize(static_cast<std::size_t>(n));
  Rng noise(mix_seed(topology_.sim.master_seed, 0x05Aull ^ probe_index));
  const double sigma = topology_.sim.osa_sigma_db;
  for (int i = 0; i < n; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    rec.p_in_dbm[idx] = mw_to_dbm(input.p_mw[idx]);
    rec.p_out_dbm[idx] = mw_to_dbm(state.signal[idx]) + sigma * noise.normal();
    rec.p_ase_dbm[idx] = mw_to_dbm(state.ase[idx]) + sigma * noise.normal();
  }
  return rec;
}

SnrReport NetworkSim::ground_truth_snr(const std::string& path_id,
                                       const PowerProfile& input) const {
  SpanState state = run_truth_cascade(path_id, input, /*with_nli=*/true);
  const ChannelGrid& grid = topology_.grid;
  SnrReport rep;
  rep.path_id = path_id;
  rep.toggles = Toggles{true, true};
  rep.threshold_db = topology_.threshold_db;
  for (int i = 0; i < grid.n_ch; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    rep.f_thz.push_back(grid.f_thz[idx]);
    rep.lambda_nm.push_back(grid.lambda_nm(i));
    rep.signal_dbm.push_back(mw_to_dbm(state.signal[idx]));
    rep.ase_dbm.push_back(mw_to_dbm(state.ase[idx]));
    rep.nli_dbm.push_back(mw_to_dbm(state.nli[idx]));
    const double noise = state.ase[idx] + state.nli[idx];
    double snr_lin = noise > 0.0 ? state.signal[idx] / noise
                                 : std::pow(10.0, kSnrCapDb / 10.0);
    if (trx_truth_.has_value()) {
      snr_lin = 1.0 / (1.0 / snr_lin +
                       1.0 / trx_truth_->snr_linear_at(grid.lambda_nm(i)));
    }
    double snr = 10.0 * std::log10(snr_lin);
    if (snr > kSnrCapDb) {
      snr = kSnrCapDb;
      rep.flags.push_back("snr capped at 60 dB on channel " +
                          std::to_string(i));
    }
    double osnr = state.ase[idx] > 0.0
                      ? 10.0 * std::log10(state.signal[idx] / state.ase[idx])
                      : kSnrCapDb;
    if (osnr > kSnrCapDb) osnr = kSnrCapDb;
    rep.osnr_db.push_back(osnr);
    rep.snr_db.push_back(snr);
    rep.margin_db.push_back(snr - topology_.threshold_db);
  }
  return rep;
}

}  // namespace wdmtwin
