// Copyright (c) 2026 wdmtwin authors
// SPDX-License-Identifier: Apache-2.0
//
// Reverse-mode differentiation over scalar computation graphs. One tape
// backpropagates through fiber physics, amplifier networks, interpolants and
// the optimizer cost. Scalar nodes keep the engine exact and deterministic;
// dot/linear are provided as fused ops so MLP layers stay at one node per
// neuron.
#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "wdmtwin/errors.hpp"

namespace wdmtwin::ad {

class Tape;

/// Handle to one node of a tape. Cheap to copy; carries the cached forward
/// value so client code can branch on magnitudes without touching the tape.
struct Value {
  Tape* tape = nullptr;
  std::int32_t node = -1;
  double v = 0.0;

  double value() const noexcept { return v; }
};

/// Forward value of either a plain double or a tape Value; lets templated
/// physics code inspect magnitudes generically.
inline double val(double x) noexcept { return x; }
inline double val(const Value& x) noexcept { return x.v; }

class Tape {
 public:
  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  /// Differentiable input node.
  Value leaf(double v) { return make_node(v, -1, 0.0, -1, 0.0); }

  /// Node without parents; adjoint is computed but never read back.
  Value constant(double v) { return make_node(v, -1, 0.0, -1, 0.0); }

  std::size_t node_count() const noexcept { return nodes_.size(); }

  /// Reverse sweep from a scalar root. Adjoints are reset on every call, so
  /// repeated invocations are idempotent.
  void backward(const Value& root);

  /// Adjoint d(root)/d(v) after backward().
  double grad(const Value& v) const;

  // -- node builders (used by the operator overloads below) --
  Value make_node(double v, std::int32_t a, double ga, std::int32_t b,
                  double gb);
  Value make_fused(double v, std::span<const std::int32_t> parents,
                   std::span<const double> grads);

 private:
  static constexpr std::int32_t kFused = -2;

  struct Node {
    std::int32_t a = -1;  // parent index, or fused-span index when b==kFused
    std::int32_t b = -1;
    double ga = 0.0;
    double gb = 0.0;
  };
  struct FusedSpan {
    std::uint32_t offset = 0;
    std::uint32_t count = 0;
  };

  std::vector<Node> nodes_;
  std::vector<FusedSpan> spans_;
  std::vector<std::int32_t> fused_parents_;
  std::vector<double> fused_grads_;
  std::vector<double> adjoint_;
};

namespace detail {
inline Tape& tape_of(const Value& x) {
  if (x.tape == nullptr || x.node < 0) {
    throw std::invalid_argument("autodiff: value is not bound to a tape");
  }
  return *x.tape;
}
inline Tape& common_tape(const Value& x, const Value& y) {
  Tape& t = tape_of(x);
  if (&t != &tape_of(y)) {
    throw std::invalid_argument("autodiff: operands from different tapes");
  }
  return t;
}
}  // namespace detail

// ---- arithmetic -----------------------------------------------------------

inline Value operator+(const Value& x, const Value& y) {
  return detail::common_tape(x, y).make_node(x.v + y.v, x.node, 1.0, y.node,
                                             1.0);
}
inline Value operator+(const Value& x, double c) {
  return detail::tape_of(x).make_node(x.v + c, x.node, 1.0, -1, 0.0);
}
inline Value operator+(double c, const Value& x) { return x + c; }

inline Value operator-(const Value& x, const Value& y) {
  return detail::common_tape(x, y).make_node(x.v - y.v, x.node, 1.0, y.node,
                                             -1.0);
}
inline Value operator-(const Value& x, double c) {
  return detail::tape_of(x).make_node(x.v - c, x.node, 1.0, -1, 0.0);
}
inline Value operator-(double c, const Value& x) {
  return detail::tape_of(x).make_node(c - x.v, x.node, -1.0, -1, 0.0);
}
inline Value operator-(const Value& x) {
  return detail::tape_of(x).make_node(-x.v, x.node, -1.0, -1, 0.0);
}

inline Value operator*(const Value& x, const Value& y) {
  return detail::common_tape(x, y).make_node(x.v * y.v, x.node, y.v, y.node,
                                             x.v);
}
inline Value operator*(const Value& x, double c) {
  return detail::tape_of(x).make_node(x.v * c, x.node, c, -1, 0.0);
}
inline Value operator*(double c, const Value& x) { return x * c; }

inline Value operator/(const Value& x, const Value& y) {
  if (y.v == 0.0) throw DomainError("div", y.v);
  const double inv = 1.0 / y.v;
  return detail::common_tape(x, y).make_node(x.v * inv, x.node, inv, y.node,
                                             -x.v * inv * inv);
}
inline Value operator/(const Value& x, double c) {
  if (c == 0.0) throw DomainError("div", c);
  return detail::tape_of(x).make_node(x.v / c, x.node, 1.0 / c, -1, 0.0);
}
inline Value operator/(double c, const Value& x) {
  if (x.v == 0.0) throw DomainError("div", x.v);
  const double inv = 1.0 / x.v;
  return detail::tape_of(x).make_node(c * inv, x.node, -c * inv * inv, -1,
                                      0.0);
}

// ---- elementary functions ---------------------------------------------
// Each has a plain-double overload so templated physics code instantiates
// for both scalar types. The double overloads follow IEEE semantics; domain
// checks are enforced on the tape path only.

inline double exp(double x) { return std::exp(x); }
inline Value exp(const Value& x) {
  const double e = std::exp(x.v);
  return detail::tape_of(x).make_node(e, x.node, e, -1, 0.0);
}

inline double ln(double x) { return std::log(x); }
inline Value ln(const Value& x) {
  if (!(x.v > 0.0)) throw DomainError("ln", x.v);
  return detail::tape_of(x).make_node(std::log(x.v), x.node, 1.0 / x.v, -1,
                                      0.0);
}

inline double log10(double x) { return std::log10(x); }
inline Value log10(const Value& x) {
  if (!(x.v > 0.0)) throw DomainError("log10", x.v);
  return detail::tape_of(x).make_node(std::log10(x.v), x.node,
                                      1.0 / (x.v * M_LN10), -1, 0.0);
}

inline double pow10(double x) { return std::pow(10.0, x); }
inline Value pow10(const Value& x) {
  const double p = std::pow(10.0, x.v);
  return detail::tape_of(x).make_node(p, x.node, p * M_LN10, -1, 0.0);
}

inline double tanh(double x) { return std::tanh(x); }
inline Value tanh(const Value& x) {
  const double t = std::tanh(x.v);
  return detail::tape_of(x).make_node(t, x.node, 1.0 - t * t, -1, 0.0);
}

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }
inline Value sigmoid(const Value& x) {
  const double s = 1.0 / (1.0 + std::exp(-x.v));
  return detail::tape_of(x).make_node(s, x.node, s * (1.0 - s), -1, 0.0);
}

inline double asinh(double x) { return std::asinh(x); }
inline Value asinh(const Value& x) {
  return detail::tape_of(x).make_node(
      std::asinh(x.v), x.node, 1.0 / std::sqrt(1.0 + x.v * x.v), -1, 0.0);
}

/// max(x, c); subgradient 1 at the tie point.
inline double max_with(double x, double c) { return x >= c ? x : c; }
inline Value max_with(const Value& x, double c) {
  const bool on = x.v >= c;
  return detail::tape_of(x).make_node(on ? x.v : c, x.node, on ? 1.0 : 0.0,
                                      -1, 0.0);
}

/// min(x, c); subgradient 1 at the tie point.
inline double min_with(double x, double c) { return x <= c ? x : c; }
inline Value min_with(const Value& x, double c) {
  const bool on = x.v <= c;
  return detail::tape_of(x).make_node(on ? x.v : c, x.node, on ? 1.0 : 0.0,
                                      -1, 0.0);
}

// ---- fused reductions -------------------------------------------------

double dot(std::span<const double> xs, std::span<const double> ys);
Value dot(std::span<const Value> xs, std::span<const Value> ys);

/// sum_i coeffs[i]*xs[i] with constant coefficients; one tape node.
double linear(std::span<const double> coeffs, std::span<const double> xs);
Value linear(std::span<const double> coeffs, std::span<const Value> xs);

double sum(std::span<const double> xs);
Value sum(std::span<const Value> xs);

// ---- gradient checking --------------------------------------------------

struct GradCheckResult {
  bool pass = false;
  double max_rel_err = 0.0;
  std::size_t worst_index = 0;
};

/// Compares the reverse-mode gradient of f against central finite
/// differences, componentwise, with relative metric
/// |g - g_fd| / max(1, |g|, |g_fd|). Step per component: h_scale*max(1,|x|).
template <class F>
GradCheckResult gradcheck(F&& f, std::span<const double> x, double tol,
                          double h_scale = 1e-5) {
  const std::size_t n = x.size();
  std::vector<double> g(n, 0.0);
  {
    Tape tape;
    std::vector<Value> xs;
    xs.reserve(n);
    for (double xi : x) xs.push_back(tape.leaf(xi));
    Value root = f(tape, std::span<const Value>(xs));
    tape.backward(root);
    for (std::size_t i = 0; i < n; ++i) g[i] = tape.grad(xs[i]);
  }
  auto eval = [&](std::span<const double> point) {
    Tape tape;
    std::vector<Value> xs;
    xs.reserve(n);
    for (double xi : point) xs.push_back(tape.leaf(xi));
    return f(tape, std::span<const Value>(xs)).value();
  };
  GradCheckResult res;
  res.pass = true;
  std::vector<double> xp(x.begin(), x.end());
  const double f0 = eval(xp);
  for (std::size_t i = 0; i < n; ++i) {
    const double h = h_scale * std::max(1.0, std::abs(x[i]));
    const double x0 = xp[i];
    double g_fd;
    // One-sided fallback when the step leaves the op's domain (points
    // that close to a boundary are reported as failures, not crashes).
    try {
      xp[i] = x0 + h;
      const double fp = eval(xp);
      xp[i] = x0 - h;
      const double fm = eval(xp);
      g_fd = (fp - fm) / (2.0 * h);
    } catch (const DomainError&) {
      xp[i] = x0 + h;
      g_fd = (eval(xp) - f0) / h;
    }
    xp[i] = x0;
    const double denom = std::max({1.0, std::abs(g[i]), std::abs(g_fd)});
    const double rel = std::abs(g[i] - g_fd) / denom;
    if (rel > res.max_rel_err) {
      res.max_rel_err = rel;
      res.worst_index = i;
    }
  }
  res.pass = res.max_rel_err <= tol;
  return res;
}

}  // namespace wdmtwin::ad
