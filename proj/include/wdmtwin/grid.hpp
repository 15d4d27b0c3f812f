// Copyright (c) 2026 wdmtwin authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace wdmtwin {

/// Speed of light expressed so that lambda[nm] = kSpeedOfLight / f[THz].
inline constexpr double kSpeedOfLightNmThz = 299792.458;

/// dB per neper, 10/ln(10). Converts field/power attenuation coefficients.
inline constexpr double kDbPerNeper = 4.342944819032518;

double dbm_to_mw(double x_dbm);
double mw_to_dbm(double x_mw);  // 0 mW maps to -infinity

/// Frequency plan of the WDM comb. Immutable after construction; every model
/// that consumes per-channel vectors checks the fingerprint before use.
struct ChannelGrid {
  int n_ch = 0;
  std::vector<double> f_thz;      // ascending center frequencies
  double spacing_ghz = 0.0;       // nominal uniform spacing
  std::vector<double> b_ch_ghz;   // per-channel signal bandwidth
  double b_ref_ghz = 12.5;        // ASE reference bandwidth
  std::uint64_t fingerprint = 0;  // stable hash of all numeric fields

  double lambda_nm(int ch) const { return kSpeedOfLightNmThz / f_thz[ch]; }
  double f_min_thz() const { return f_thz.front(); }
  double f_max_thz() const { return f_thz.back(); }
};

/// Builds a uniform grid and validates the grid invariants.
ChannelGrid make_uniform_grid(int n_ch, double f0_thz, double step_thz,
                              double b_ch_ghz, double b_ref_ghz);

/// Same, with a per-channel bandwidth vector (still uniform spacing).
ChannelGrid make_grid(int n_ch, double f0_thz, double step_thz,
                      std::span<const double> b_ch_ghz, double b_ref_ghz);

/// 48 channels anchored at 191.35 THz on a 0.1 THz pitch, 12.5 GHz
/// bandwidths. Spans the C-band from roughly 1529 nm to 1567 nm.
ChannelGrid default_grid();

/// Per-channel launch (or noise) powers in linear mW, tied to one grid.
struct PowerProfile {
  std::uint64_t grid_fingerprint = 0;
  std::vector<double> p_mw;
};

/// Validates entries (finite, >= 0) and attaches the grid fingerprint.
PowerProfile make_profile(const ChannelGrid& grid, std::vector<double> p_mw);

/// Equal power per channel summing to the requested total.
PowerProfile flat_profile(const ChannelGrid& grid, double p_tot_dbm);

/// Total power in dBm; -infinity for an all-zero profile.
double total_power_dbm(const PowerProfile& profile);

/// Throws std::invalid_argument when profile does not belong to grid.
void require_same_grid(const ChannelGrid& grid, const PowerProfile& profile);

}  // namespace wdmtwin
