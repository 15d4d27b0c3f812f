// Copyright (c) 2026 wdmtwin authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "wdmtwin/fiber.hpp"
#include "wdmtwin/grid.hpp"
#include "wdmtwin/rng.hpp"

namespace wdmtwin::testing {

inline FiberSpan random_span(Rng& rng) {
  FiberSpan s;
  s.length_km = rng.uniform(40.0, 100.0);
  s.alpha_db_km = rng.uniform(0.17, 0.25);
  s.beta2_ps2_km = -rng.uniform(15.0, 26.0);
  s.gamma_1_wkm = rng.uniform(0.9, 1.6);
  s.cr_1_wkmthz = rng.uniform(0.0, 0.032);
  return s;
}

/// Random profile: flat at the requested total with per-channel shaping.
inline PowerProfile random_profile(const ChannelGrid& grid, Rng& rng,
                                   double total_dbm = 18.0,
                                   double spread_db = 3.0) {
  std::vector<double> p(static_cast<std::size_t>(grid.n_ch));
  double sum = 0.0;
  for (double& x : p) {
    x = std::pow(10.0, rng.uniform(-spread_db, spread_db) / 10.0);
    sum += x;
  }
  const double scale = dbm_to_mw(total_dbm) / sum;
  for (double& x : p) x *= scale;
  return make_profile(grid, std::move(p));
}

}  // namespace wdmtwin::testing
