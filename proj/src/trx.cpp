// Copyright (c) 2026 wdmtwin authors
// SPDX-License-Identifier: Apache-2.0
#include "wdmtwin/trx.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "wdmtwin/csv.hpp"

namespace wdmtwin {

TrxPenaltyModel TrxPenaltyModel::fit(std::span<const double> lambda_nm,
                                     std::span<const double> snr_b2b_db) {
  const std::size_t n = lambda_nm.size();
  if (n < 2 || snr_b2b_db.size() != n) {
    throw std::invalid_argument("trx fit: need >= 2 matched samples");
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (!(lambda_nm[i + 1] > lambda_nm[i])) {
      throw std::invalid_argument(
          "trx fit: wavelengths must be strictly ascending (duplicate or "
          "unsorted sample at index " +
          std::to_string(i + 1) + ")");
    }
  }
  TrxPenaltyModel m;
  m.x_.assign(lambda_nm.begin(), lambda_nm.end());
  m.y_.assign(snr_b2b_db.begin(), snr_b2b_db.end());
  m.tangent_.resize(n);

  std::vector<double> d(n - 1);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    d[k] = (m.y_[k + 1] - m.y_[k]) / (m.x_[k + 1] - m.x_[k]);
  }
  m.tangent_[0] = d.front();
  m.tangent_[n - 1] = d.back();
  for (std::size_t k = 1; k + 1 < n; ++k) {
    m.tangent_[k] = (d[k - 1] * d[k] <= 0.0) ? 0.0 : 0.5 * (d[k - 1] + d[k]);
  }
  // Fritsch-Carlson limiter keeps each interval monotone (hence bounded by
  // its endpoint values).
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (d[k] == 0.0) {
      m.tangent_[k] = 0.0;
      m.tangent_[k + 1] = 0.0;
      continue;
    }
    const double a = m.tangent_[k] / d[k];
    const double b = m.tangent_[k + 1] / d[k];
    if (a < 0.0) m.tangent_[k] = 0.0;
    if (b < 0.0) m.tangent_[k + 1] = 0.0;
    const double s = a * a + b * b;
    if (s > 9.0) {
      const double tau = 3.0 / std::sqrt(s);
      m.tangent_[k] = tau * a * d[k];
      m.tangent_[k + 1] = tau * b * d[k];
    }
  }
  return m;
}

TrxPenaltyModel TrxPenaltyModel::fit(
    std::span<const std::pair<double, double>> samples) {
  std::vector<double> x, y;
  x.reserve(samples.size());
  y.reserve(samples.size());
  for (const auto& [l, s] : samples) {
    x.push_back(l);
    y.push_back(s);
  }
  return fit(x, y);
}

double TrxPenaltyModel::snr_db_at(double lambda_nm) const {
  if (lambda_nm <= x_.front()) return y_.front();
  if (lambda_nm >= x_.back()) return y_.back();
  const auto it = std::upper_bound(x_.begin(), x_.end(), lambda_nm);
  const std::size_t k = static_cast<std::size_t>(it - x_.begin()) - 1;
  const double h = x_[k + 1] - x_[k];
  const double t = (lambda_nm - x_[k]) / h;
  const double t2 = t * t;
  const double t3 = t2 * t;
  const double h00 = 2 * t3 - 3 * t2 + 1;
  const double h10 = t3 - 2 * t2 + t;
  const double h01 = -2 * t3 + 3 * t2;
  const double h11 = t3 - t2;
  return h00 * y_[k] + h10 * h * tangent_[k] + h01 * y_[k + 1] +
         h11 * h * tangent_[k + 1];
}

double TrxPenaltyModel::snr_linear_at(double lambda_nm) const {
  return std::pow(10.0, snr_db_at(lambda_nm) / 10.0);
}

TrxPenaltyModel load_trx_csv(const std::filesystem::path& path) {
  const CsvTable t = read_csv(path);
  if (t.header != std::vector<std::string>{"lambda_nm", "snr_db"}) {
    throw std::invalid_argument("trx csv: expected header lambda_nm,snr_db");
  }
  std::vector<double> x, y;
  for (const auto& row : t.rows) {
    if (row.size() != 2) {
      throw std::invalid_argument("trx csv: expected 2 columns per row");
    }
    x.push_back(parse_double(row[0]));
    y.push_back(parse_double(row[1]));
  }
  return TrxPenaltyModel::fit(x, y);
}

void save_trx_csv(const std::filesystem::path& path,
                  std::span<const double> lambda_nm,
                  std::span<const double> snr_db) {
  CsvWriter w(path);
  w.header({"lambda_nm", "snr_db"});
  for (std::size_t i = 0; i < lambda_nm.size(); ++i) {
    w.row({format_fixed(lambda_nm[i]), format_fixed(snr_db[i])});
  }
}

}  // namespace wdmtwin
