// Copyright (c) 2026 wdmtwin authors
// SPDX-License-Identifier: Apache-2.0
#include "doctest.h"

#include <algorithm>
#include <filesystem>
#include <stdexcept>

#include "wdmtwin/rng.hpp"
#include "wdmtwin/trx.hpp"

using namespace wdmtwin;

TEST_CASE("constant samples give a constant interpolant") {
  const double lam[] = {1530.0, 1565.0};
  const double snr[] = {16.0, 16.0};
  const TrxPenaltyModel m = TrxPenaltyModel::fit(lam, snr);
  for (double l : {1530.0, 1540.0, 1547.5, 1565.0}) {
    CHECK(m.snr_db_at(l) == doctest::Approx(16.0).epsilon(1e-12));
  }
  CHECK(m.snr_linear_at(1550.0) ==
        doctest::Approx(39.8107170553).epsilon(1e-9));
}

TEST_CASE("interpolant passes through the samples and clamps outside") {
  const double lam[] = {1530.0, 1540.0, 1550.0, 1560.0};
  const double snr[] = {15.0, 17.5, 17.0, 14.5};
  const TrxPenaltyModel m = TrxPenaltyModel::fit(lam, snr);
  for (int i = 0; i < 4; ++i) {
    CHECK(m.snr_db_at(lam[i]) == doctest::Approx(snr[i]).epsilon(1e-12));
  }
  CHECK(m.snr_db_at(1525.0) == doctest::Approx(15.0));
  CHECK(m.snr_db_at(1599.0) == doctest::Approx(14.5));
}

TEST_CASE("duplicate wavelengths are rejected") {
  const double lam[] = {1530.0, 1530.0, 1550.0};
  const double snr[] = {15.0, 16.0, 17.0};
  CHECK_THROWS_AS((void)TrxPenaltyModel::fit(lam, snr),
                  std::invalid_argument);
  const double one_l[] = {1530.0};
  const double one_s[] = {15.0};
  CHECK_THROWS_AS((void)TrxPenaltyModel::fit(one_l, one_s),
                  std::invalid_argument);
}

TEST_CASE("no overshoot beyond the sample range, C1 continuity") {
  Rng rng(31);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<double> lam, snr;
    double x = 1528.0;
    for (int i = 0; i < 9; ++i) {
      lam.push_back(x);
      snr.push_back(rng.uniform(12.0, 19.0));
      x += rng.uniform(2.0, 6.0);
    }
    const TrxPenaltyModel m = TrxPenaltyModel::fit(lam, snr);
    const double lo = *std::min_element(snr.begin(), snr.end());
    const double hi = *std::max_element(snr.begin(), snr.end());
    for (int k = 0; k <= 800; ++k) {
      const double l = lam.front() + (lam.back() - lam.front()) * k / 800.0;
      const double v = m.snr_db_at(l);
      CHECK(v >= lo - 1e-9);
      CHECK(v <= hi + 1e-9);
    }
    // C1 across the knots
    for (std::size_t i = 1; i + 1 < lam.size(); ++i) {
      const double h = 1e-7;
      const double dl = (m.snr_db_at(lam[i]) - m.snr_db_at(lam[i] - h)) / h;
      const double dr = (m.snr_db_at(lam[i] + h) - m.snr_db_at(lam[i])) / h;
      CHECK(dl == doctest::Approx(dr).epsilon(1e-4));
    }
  }
}

TEST_CASE("midpoint of two equal samples stays put") {
  const double lam[] = {1540.0, 1550.0};
  const double snr[] = {17.0, 17.0};
  const TrxPenaltyModel m = TrxPenaltyModel::fit(lam, snr);
  CHECK(m.snr_db_at(1545.0) == doctest::Approx(17.0).epsilon(1e-12));
}

TEST_CASE("csv round trip") {
  const auto dir = std::filesystem::temp_directory_path() / "wdmtwin_trx_test";
  std::filesystem::create_directories(dir);
  const auto file = dir / "trx.csv";
  const std::vector<double> lam = {1530.0, 1545.0, 1560.0};
  const std::vector<double> snr = {15.5, 17.25, 16.0};
  save_trx_csv(file, lam, snr);
  const TrxPenaltyModel m = load_trx_csv(file);
  for (std::size_t i = 0; i < lam.size(); ++i) {
    CHECK(m.snr_db_at(lam[i]) == doctest::Approx(snr[i]).epsilon(1e-6));
  }
  std::filesystem::remove_all(dir);
}
