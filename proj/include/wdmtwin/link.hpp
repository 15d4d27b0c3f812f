// Copyright (c) 2026 wdmtwin authors
// SPDX-License-Identifier: Apache-2.0
//
// Digital-twin cascade for a network path: folds the launch profile through
// fiber spans and amplifier twins, then reports per-channel signal, noise
// and margin figures.
#pragma once

#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "wdmtwin/edfa.hpp"
#include "wdmtwin/fiber.hpp"
#include "wdmtwin/grid.hpp"
#include "wdmtwin/trx.hpp"

namespace wdmtwin {

/// Reported SNR values are capped here; a flag records when the cap engages.
inline constexpr double kSnrCapDb = 60.0;

struct AmpElement {
  double setpoint_dbm = 18.0;
  std::shared_ptr<const EdfaTwinModel> model;
  std::string device_id;
};

using PathElement = std::variant<FiberSpan, AmpElement>;

struct LinkPath {
  std::string path_id;
  ChannelGrid grid;
  std::vector<PathElement> elements;
};

struct Toggles {
  bool nl = true;   // Raman + Kerr fiber effects
  bool trx = true;  // transceiver back-to-back penalty
};

Toggles toggles_from_name(const std::string& name);  // full|no-nl|no-nl-no-trx
std::string toggles_name(const Toggles& t);

struct SnrReport {
  std::string path_id;
  Toggles toggles;
  double threshold_db = 12.5;
  std::vector<double> f_thz, lambda_nm;
  std::vector<double> signal_dbm, ase_dbm, nli_dbm;
  std::vector<double> osnr_db, snr_db, margin_db;
  std::vector<std::string> flags;

  double min_margin_db() const;
  std::size_t argmin_margin() const;
};

/// Full prediction on the twin cascade. `trx` may be null (no TRX floor).
SnrReport predict(const LinkPath& path, const PowerProfile& launch,
                  const TrxPenaltyModel* trx, Toggles toggles,
                  double threshold_db = 12.5);

/// Report CSV: ch,f_thz,lambda_nm,p_dbm,ase_dbm,nli_dbm,osnr_db,snr_db,
/// margin_db with comment headers.
void save_report_csv(const SnrReport& report, const std::filesystem::path& p,
                     std::uint64_t config_hash, std::uint64_t model_hash);

/// Launch-profile CSV: ch,f_thz,p_dbm.
void save_profile_csv(const ChannelGrid& grid, const PowerProfile& profile,
                      const std::filesystem::path& p,
                      std::uint64_t config_hash, std::uint64_t model_hash);
PowerProfile load_profile_csv(const ChannelGrid& grid,
                              const std::filesystem::path& p);

// ---- differentiable core ----------------------------------------------

/// Per-channel SNR in dB (capped at kSnrCapDb) after folding the launch
/// through the path. Templated so the optimizer can differentiate with
/// respect to the launch powers.
template <class T>
std::vector<T> cascade_snr_db(const LinkPath& path,
                              const std::vector<T>& launch_mw,
                              const TrxPenaltyModel* trx, Toggles toggles,
                              std::vector<std::string>* warnings = nullptr,
                              SpanStateT<T>* final_state = nullptr);

template <class T>
std::vector<T> cascade_snr_db(const LinkPath& path,
                              const std::vector<T>& launch_mw,
                              const TrxPenaltyModel* trx, Toggles toggles,
                              std::vector<std::string>* warnings,
                              SpanStateT<T>* final_state) {
  if (path.elements.empty()) {
    throw std::invalid_argument("predict: empty path");
  }
  const ChannelGrid& grid = path.grid;
  if (static_cast<int>(launch_mw.size()) != grid.n_ch) {
    throw std::invalid_argument("predict: launch size mismatch");
  }
  SpanStateT<T> state;
  state.signal = launch_mw;
  state.ase.assign(launch_mw.size(), launch_mw[0] * 0.0);
  state.nli.assign(launch_mw.size(), launch_mw[0] * 0.0);

  for (const PathElement& el : path.elements) {
    if (std::holds_alternative<FiberSpan>(el)) {
      const FiberSpan& span = std::get<FiberSpan>(el);
      if (toggles.nl) {
        propagate_span(span, grid, state, /*with_nli=*/true);
      } else {
        propagate_span(span.without_nonlinearities(), grid, state,
                       /*with_nli=*/false);
      }
    } else {
      const AmpElement& amp = std::get<AmpElement>(el);
      if (!amp.model) {
        throw std::invalid_argument("predict: amplifier without a model");
      }
      amplify(*amp.model, grid, state, amp.setpoint_dbm, warnings);
    }
  }

  using ad::log10;
  using ad::max_with;
  using ad::min_with;
  std::vector<T> snr_db;
  snr_db.reserve(launch_mw.size());
  for (int i = 0; i < grid.n_ch; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    T noise = state.ase[idx] + state.nli[idx];
    T snr_lin = max_with(state.signal[idx], 1e-300) /
                max_with(noise, 1e-300);
    if (trx != nullptr && toggles.trx) {
      const double trx_lin = trx->snr_linear_at(grid.lambda_nm(i));
      snr_lin = 1.0 / (1.0 / snr_lin + 1.0 / trx_lin);
    }
    T snr = log10(snr_lin) * 10.0;
    T capped = min_with(snr, kSnrCapDb);
    if (warnings != nullptr && ad::val(snr) > kSnrCapDb) {
      warnings->push_back("snr capped at 60 dB on channel " +
                          std::to_string(i));
    }
    snr_db.push_back(capped);
  }
  if (final_state != nullptr) *final_state = std::move(state);
  return snr_db;
}

}  // namespace wdmtwin
