// Copyright (c) 2026 wdmtwin authors
// SPDX-License-Identifier: Apache-2.0
//
// Per-span analytical fiber physics: attenuation, first-order inter-channel
// Raman power transfer, and closed-form Gaussian-noise-model nonlinear
// interference. Everything is templated on the scalar type so one code path
// serves plain evaluation and reverse-mode differentiation.
#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "wdmtwin/autodiff.hpp"
#include "wdmtwin/errors.hpp"
#include "wdmtwin/grid.hpp"

namespace wdmtwin {

struct FiberSpan {
  double length_km = 0.0;
  double alpha_db_km = 0.2;
  double beta2_ps2_km = -21.3;    // group-velocity dispersion
  double gamma_1_wkm = 1.3;       // Kerr coefficient
  double cr_1_wkmthz = 0.028;     // Raman gain slope
  double lumped_loss_db = 0.0;

  void validate() const;
  /// Copy with Raman and Kerr terms switched off.
  FiberSpan without_nonlinearities() const {
    FiberSpan s = *this;
    s.cr_1_wkmthz = 0.0;
    s.gamma_1_wkm = 0.0;
    return s;
  }
};

/// (L_eff, L_eff_asymptotic) in km. Series expansion keeps the alpha->0 and
/// zero-length limits exact.
std::pair<double, double> effective_lengths(const FiberSpan& span);

/// Cached closed-form NLI coefficients for one (span, grid) pair.
/// nli_i = eta_sci[i] * p_i^3 + sum_j eta_xci[i*n+j] * p_i * p_j^2, with
/// powers in mW and the result in mW.
struct NliCoefficients {
  std::vector<double> eta_sci;  // n
  std::vector<double> eta_xci;  // n*n row-major, zero diagonal
};

const NliCoefficients& nli_coefficients(const FiberSpan& span,
                                        const ChannelGrid& grid);

/// Signal, accumulated ASE and accumulated NLI per channel (linear mW).
template <class T>
struct SpanStateT {
  std::vector<T> signal;
  std::vector<T> ase;
  std::vector<T> nli;
};
using SpanState = SpanStateT<double>;

SpanState make_span_state(const ChannelGrid& grid, const PowerProfile& launch);

// ---- templated physics ----------------------------------------------------

/// First-order triangular SRS gain factors (linear), renormalized so total
/// power is conserved exactly before attenuation. Zero total power or zero
/// Raman slope yields identity gains.
template <class T>
std::vector<T> srs_tilt(const FiberSpan& span, const ChannelGrid& grid,
                        const std::vector<T>& p_mw);

/// NLI generated by this span (mW in the channel bandwidth), referenced to
/// the span input.
template <class T>
std::vector<T> nli_span(const FiberSpan& span, const ChannelGrid& grid,
                        const std::vector<T>& p_mw);

/// Applies one span in place: NLI generation from the signal, then SRS gains
/// and flat attenuation on all three profiles.
template <class T>
void propagate_span(const FiberSpan& span, const ChannelGrid& grid,
                    SpanStateT<T>& state, bool with_nli = true);

// ---- implementation ---------------------------------------------------

template <class T>
std::vector<T> srs_tilt(const FiberSpan& span, const ChannelGrid& grid,
                        const std::vector<T>& p_mw) {
  const int n = grid.n_ch;
  double p_tot_fwd = 0.0;
  for (const T& p : p_mw) p_tot_fwd += ad::val(p);
  std::vector<T> gains;
  gains.reserve(static_cast<std::size_t>(n));
  if (span.cr_1_wkmthz == 0.0 || p_tot_fwd <= 0.0 || span.length_km == 0.0) {
    for (int i = 0; i < n; ++i) gains.push_back(p_mw[i] * 0.0 + 1.0);
    return gains;
  }
  const double l_eff = effective_lengths(span).first;
  using ad::sum;  // resolves for both scalar types
  T p_tot = sum(std::span<const T>(p_mw));
  // power-weighted mean frequency
  std::vector<double> freqs(grid.f_thz.begin(), grid.f_thz.end());
  using ad::linear;
  T f_mean = linear(freqs, std::span<const T>(p_mw)) / p_tot;
  const double slope =
      kDbPerNeper * 1e-3 * span.cr_1_wkmthz * l_eff;  // dB per mW per THz
  using ad::pow10;
  for (int i = 0; i < n; ++i) {
    T dg_db = p_tot * slope * (f_mean - grid.f_thz[i]);
    gains.push_back(pow10(dg_db / 10.0));
  }
  // renormalize: total power conserved exactly
  T transferred = gains[0] * p_mw[0];
  for (int i = 1; i < n; ++i) transferred = transferred + gains[i] * p_mw[i];
  T scale = p_tot / transferred;
  for (int i = 0; i < n; ++i) gains[i] = gains[i] * scale;
  return gains;
}

template <class T>
std::vector<T> nli_span(const FiberSpan& span, const ChannelGrid& grid,
                        const std::vector<T>& p_mw) {
  const int n = grid.n_ch;
  std::vector<T> out;
  out.reserve(static_cast<std::size_t>(n));
  if (span.gamma_1_wkm == 0.0 || span.length_km == 0.0) {
    for (int i = 0; i < n; ++i) out.push_back(p_mw[i] * 0.0);
    return out;
  }
  const NliCoefficients& c = nli_coefficients(span, grid);
  std::vector<T> p_sq;
  p_sq.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) p_sq.push_back(p_mw[i] * p_mw[i]);
  using ad::linear;
  for (int i = 0; i < n; ++i) {
    std::span<const double> row(&c.eta_xci[static_cast<std::size_t>(i) *
                                           static_cast<std::size_t>(n)],
                                static_cast<std::size_t>(n));
    T xci = linear(row, std::span<const T>(p_sq));
    out.push_back(p_mw[i] * (p_sq[i] * c.eta_sci[static_cast<std::size_t>(i)] + xci));
  }
  return out;
}

template <class T>
void propagate_span(const FiberSpan& span, const ChannelGrid& grid,
                    SpanStateT<T>& state, bool with_nli) {
  span.validate();
  std::vector<T> generated;
  if (with_nli) generated = nli_span(span, grid, state.signal);
  std::vector<T> gains = srs_tilt(span, grid, state.signal);
  const double loss_db = span.alpha_db_km * span.length_km + span.lumped_loss_db;
  const double att = std::pow(10.0, -loss_db / 10.0);
  for (int i = 0; i < grid.n_ch; ++i) {
    const auto g = gains[static_cast<std::size_t>(i)] * att;
    state.signal[static_cast<std::size_t>(i)] =
        state.signal[static_cast<std::size_t>(i)] * g;
    state.ase[static_cast<std::size_t>(i)] =
        state.ase[static_cast<std::size_t>(i)] * g;
    T nli_in = with_nli ? state.nli[static_cast<std::size_t>(i)] +
                              generated[static_cast<std::size_t>(i)]
                        : state.nli[static_cast<std::size_t>(i)];
    state.nli[static_cast<std::size_t>(i)] = nli_in * g;
  }
}

}  // namespace wdmtwin
