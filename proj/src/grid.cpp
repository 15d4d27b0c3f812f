// Copyright (c) 2026 wdmtwin authors
// SPDX-License-Identifier: Apache-2.0
#include "wdmtwin/grid.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "wdmtwin/hash.hpp"

namespace wdmtwin {

double dbm_to_mw(double x_dbm) {
  if (!std::isfinite(x_dbm)) {
    throw std::invalid_argument("dbm_to_mw: non-finite input");
  }
  return std::pow(10.0, x_dbm / 10.0);
}

double mw_to_dbm(double x_mw) {
  if (!std::isfinite(x_mw) || x_mw < 0.0) {
    throw std::invalid_argument("mw_to_dbm: input must be finite and >= 0");
  }
  if (x_mw == 0.0) return -std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(x_mw);
}

namespace {

std::uint64_t grid_fingerprint(int n_ch, std::span<const double> f,
                               double spacing, std::span<const double> b_ch,
                               double b_ref) {
  Fnv1a h;
  h.update(static_cast<std::int64_t>(n_ch));
  h.update(f);
  h.update(spacing);
  h.update(b_ch);
  h.update(b_ref);
  return h.digest();
}

}  // namespace

ChannelGrid make_grid(int n_ch, double f0_thz, double step_thz,
                      std::span<const double> b_ch_ghz, double b_ref_ghz) {
  if (n_ch < 1) throw std::invalid_argument("grid: n_ch must be >= 1");
  if (!(f0_thz > 0.0) || !(step_thz > 0.0)) {
    throw std::invalid_argument("grid: f0 and spacing must be positive");
  }
  if (static_cast<int>(b_ch_ghz.size()) != n_ch) {
    throw std::invalid_argument("grid: b_ch size mismatch");
  }
  if (!(b_ref_ghz > 0.0)) {
    throw std::invalid_argument("grid: b_ref must be positive");
  }
  ChannelGrid g;
  g.n_ch = n_ch;
  g.spacing_ghz = step_thz * 1e3;
  g.b_ref_ghz = b_ref_ghz;
  g.f_thz.resize(n_ch);
  g.b_ch_ghz.assign(b_ch_ghz.begin(), b_ch_ghz.end());
  for (int i = 0; i < n_ch; ++i) {
    g.f_thz[i] = f0_thz + step_thz * i;
    if (!(g.b_ch_ghz[i] > 0.0) || g.b_ch_ghz[i] > g.spacing_ghz + 1e-9) {
      throw std::invalid_argument("grid: b_ch[" + std::to_string(i) +
                                  "] must satisfy 0 < b_ch <= spacing");
    }
  }
  for (int i = 0; i + 1 < n_ch; ++i) {
    const double df_ghz = (g.f_thz[i + 1] - g.f_thz[i]) * 1e3;
    if (!(df_ghz > 0.0) || std::abs(df_ghz - g.spacing_ghz) > 1e-9) {
      throw std::invalid_argument("grid: non-uniform spacing at index " +
                                  std::to_string(i));
    }
  }
  g.fingerprint =
      grid_fingerprint(n_ch, g.f_thz, g.spacing_ghz, g.b_ch_ghz, g.b_ref_ghz);
  return g;
}

ChannelGrid make_uniform_grid(int n_ch, double f0_thz, double step_thz,
                              double b_ch_ghz, double b_ref_ghz) {
  std::vector<double> b(static_cast<std::size_t>(n_ch), b_ch_ghz);
  return make_grid(n_ch, f0_thz, step_thz, b, b_ref_ghz);
}

ChannelGrid default_grid() {
  return make_uniform_grid(48, 191.35, 0.1, 12.5, 12.5);
}

PowerProfile make_profile(const ChannelGrid& grid, std::vector<double> p_mw) {
  if (static_cast<int>(p_mw.size()) != grid.n_ch) {
    throw std::invalid_argument("profile: channel count mismatch");
  }
  for (std::size_t i = 0; i < p_mw.size(); ++i) {
    if (!std::isfinite(p_mw[i]) || p_mw[i] < 0.0) {
      throw std::invalid_argument("profile: p[" + std::to_string(i) +
                                  "] must be finite and >= 0");
    }
  }
  return PowerProfile{grid.fingerprint, std::move(p_mw)};
}

PowerProfile flat_profile(const ChannelGrid& grid, double p_tot_dbm) {
  const double per_ch = dbm_to_mw(p_tot_dbm) / grid.n_ch;
  return PowerProfile{grid.fingerprint,
                      std::vector<double>(grid.n_ch, per_ch)};
}

double total_power_dbm(const PowerProfile& profile) {
  double s = 0.0;
  for (double p : profile.p_mw) s += p;
  return mw_to_dbm(s);
}

void require_same_grid(const ChannelGrid& grid, const PowerProfile& profile) {
  if (profile.grid_fingerprint != grid.fingerprint ||
      static_cast<int>(profile.p_mw.size()) != grid.n_ch) {
    throw std::invalid_argument("profile does not match grid fingerprint");
  }
}

}  // namespace wdmtwin
