// Copyright (c) 2026 wdmtwin authors
// SPDX-License-Identifier: Apache-2.0
#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "wdmtwin/grid.hpp"
#include "wdmtwin/rng.hpp"

using namespace wdmtwin;

TEST_CASE("dBm/mW conversions") {
  CHECK(dbm_to_mw(0.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(dbm_to_mw(18.0) == doctest::Approx(63.0957344480193).epsilon(1e-12));
  CHECK(mw_to_dbm(dbm_to_mw(10.0)) == doctest::Approx(10.0).epsilon(1e-12));

  CHECK_THROWS_AS(dbm_to_mw(std::nan("")), std::invalid_argument);
  CHECK_THROWS_AS(mw_to_dbm(-1.0), std::invalid_argument);
  CHECK(mw_to_dbm(0.0) == -std::numeric_limits<double>::infinity());
}

TEST_CASE("round trip dBm<->mW over the full range") {
  Rng rng(11);
  for (int i = 0; i < 2000; ++i) {
    const double x = rng.uniform(-60.0, 30.0);
    const double back = mw_to_dbm(dbm_to_mw(x));
    CHECK(std::abs(back - x) <= 1e-12 * std::max(1.0, std::abs(x)));
  }
}

TEST_CASE("default grid anchors and spacing") {
  const ChannelGrid g = default_grid();
  CHECK(g.n_ch == 48);
  CHECK(g.f_thz.front() == doctest::Approx(191.35));
  CHECK(g.f_thz.back() == doctest::Approx(196.05));
  CHECK(g.spacing_ghz == doctest::Approx(100.0));
  CHECK(g.b_ref_ghz == doctest::Approx(12.5));
  // 1532.5 nm sits just inside the high-frequency edge
  CHECK(g.lambda_nm(g.n_ch - 1) < 1532.5);
  CHECK(g.lambda_nm(0) > 1566.0);
}

TEST_CASE("grid validation") {
  CHECK_THROWS_AS(make_uniform_grid(0, 191.35, 0.1, 12.5, 12.5),
                  std::invalid_argument);
  // bandwidth above spacing
  CHECK_THROWS_AS(make_uniform_grid(4, 191.35, 0.1, 120.0, 12.5),
                  std::invalid_argument);
  CHECK_THROWS_AS(make_uniform_grid(4, 191.35, -0.1, 12.5, 12.5),
                  std::invalid_argument);
}

TEST_CASE("fingerprint tracks every numeric field") {
  const ChannelGrid a = default_grid();
  const ChannelGrid b = default_grid();
  CHECK(a.fingerprint == b.fingerprint);
  const ChannelGrid c = make_uniform_grid(48, 191.35, 0.1, 12.5, 12.500001);
  CHECK(c.fingerprint != a.fingerprint);
  const ChannelGrid d = make_uniform_grid(48, 191.35000001, 0.1, 12.5, 12.5);
  CHECK(d.fingerprint != a.fingerprint);
  const ChannelGrid e = make_uniform_grid(47, 191.35, 0.1, 12.5, 12.5);
  CHECK(e.fingerprint != a.fingerprint);
}

TEST_CASE("flat profile splits total power equally") {
  const ChannelGrid g = default_grid();
  const PowerProfile p = flat_profile(g, 18.0);
  const double per_ch_dbm = mw_to_dbm(p.p_mw[0]);
  CHECK(per_ch_dbm == doctest::Approx(1.18758762624).epsilon(1e-9));
  CHECK(total_power_dbm(p) == doctest::Approx(18.0).epsilon(1e-12));
  for (double v : p.p_mw) CHECK(v == p.p_mw[0]);

  const ChannelGrid one = make_uniform_grid(1, 193.4, 0.1, 12.5, 12.5);
  CHECK(total_power_dbm(flat_profile(one, 0.0)) ==
        doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("total power") {
  const ChannelGrid g = make_uniform_grid(2, 193.0, 0.1, 12.5, 12.5);
  const PowerProfile p = make_profile(g, {1.0, 1.0});
  CHECK(total_power_dbm(p) == doctest::Approx(3.0102999566).epsilon(1e-10));
  const PowerProfile zero = make_profile(g, {0.0, 0.0});
  CHECK(total_power_dbm(zero) == -std::numeric_limits<double>::infinity());
  const ChannelGrid one = make_uniform_grid(1, 193.0, 0.1, 12.5, 12.5);
  CHECK(total_power_dbm(make_profile(one, {1.0})) ==
        doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("profiles attach only to their grid") {
  const ChannelGrid g = default_grid();
  const ChannelGrid other = make_uniform_grid(48, 191.4, 0.1, 12.5, 12.5);
  const PowerProfile p = flat_profile(g, 18.0);
  CHECK_NOTHROW(require_same_grid(g, p));
  CHECK_THROWS_AS(require_same_grid(other, p), std::invalid_argument);
  CHECK_THROWS_AS(make_profile(g, {1.0, 2.0}), std::invalid_argument);
  std::vector<double> bad(48, 1.0);
  bad[3] = -0.5;
  CHECK_THROWS_AS(make_profile(g, bad), std::invalid_argument);
}
