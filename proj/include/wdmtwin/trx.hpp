// Copyright (c) 2026 wdmtwin authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <span>
#include <utility>
#include <vector>

namespace wdmtwin {

/// Wavelength-dependent back-to-back SNR of the transceiver chain.
/// Monotone piecewise-cubic interpolation (Fritsch-Carlson tangents):
/// passes through the samples exactly, never overshoots the sample range,
/// clamps outside the sampled band.
class TrxPenaltyModel {
 public:
  static TrxPenaltyModel fit(std::span<const double> lambda_nm,
                             std::span<const double> snr_b2b_db);
  static TrxPenaltyModel fit(
      std::span<const std::pair<double, double>> samples);

  double snr_db_at(double lambda_nm) const;
  double snr_linear_at(double lambda_nm) const;

  const std::vector<double>& sample_lambda_nm() const { return x_; }
  const std::vector<double>& sample_snr_db() const { return y_; }

 private:
  std::vector<double> x_, y_, tangent_;
};

/// CSV with header "lambda_nm,snr_db"; '#' lines are ignored.
TrxPenaltyModel load_trx_csv(const std::filesystem::path& path);
void save_trx_csv(const std::filesystem::path& path,
                  std::span<const double> lambda_nm,
                  std::span<const double> snr_db);

}  // namespace wdmtwin
