// Copyright (c) 2026 wdmtwin authors
// SPDX-License-Identifier: Apache-2.0
#include "wdmtwin/autodiff.hpp"

#include <limits>

namespace wdmtwin::ad {

Value Tape::make_node(double v, std::int32_t a, double ga, std::int32_t b,
                      double gb) {
  if (nodes_.size() >= static_cast<std::size_t>(
                           std::numeric_limits<std::int32_t>::max())) {
    throw std::length_error("autodiff: tape node limit exceeded");
  }
  nodes_.push_back(Node{a, b, ga, gb});
  return Value{this, static_cast<std::int32_t>(nodes_.size() - 1), v};
}

Value Tape::make_fused(double v, std::span<const std::int32_t> parents,
                       std::span<const double> grads) {
  FusedSpan fs;
  fs.offset = static_cast<std::uint32_t>(fused_parents_.size());
  fs.count = static_cast<std::uint32_t>(parents.size());
  fused_parents_.insert(fused_parents_.end(), parents.begin(), parents.end());
  fused_grads_.insert(fused_grads_.end(), grads.begin(), grads.end());
  spans_.push_back(fs);
  nodes_.push_back(Node{static_cast<std::int32_t>(spans_.size() - 1), kFused,
                        0.0, 0.0});
  return Value{this, static_cast<std::int32_t>(nodes_.size() - 1), v};
}

void Tape::backward(const Value& root) {
  if (root.tape != this || root.node < 0 ||
      root.node >= static_cast<std::int32_t>(nodes_.size())) {
    throw std::invalid_argument("backward: root does not belong to this tape");
  }
  adjoint_.assign(nodes_.size(), 0.0);
  adjoint_[static_cast<std::size_t>(root.node)] = 1.0;
  for (std::int32_t i = root.node; i >= 0; --i) {
    const double a = adjoint_[static_cast<std::size_t>(i)];
    if (a == 0.0) continue;
    const Node& n = nodes_[static_cast<std::size_t>(i)];
    if (n.b == kFused) {
      const FusedSpan& fs = spans_[static_cast<std::size_t>(n.a)];
      for (std::uint32_t k = 0; k < fs.count; ++k) {
        const std::int32_t p = fused_parents_[fs.offset + k];
        if (p >= 0) adjoint_[static_cast<std::size_t>(p)] +=
            fused_grads_[fs.offset + k] * a;
      }
    } else {
      if (n.a >= 0) adjoint_[static_cast<std::size_t>(n.a)] += n.ga * a;
      if (n.b >= 0) adjoint_[static_cast<std::size_t>(n.b)] += n.gb * a;
    }
  }
}

double Tape::grad(const Value& v) const {
  if (v.tape != this || v.node < 0 ||
      static_cast<std::size_t>(v.node) >= adjoint_.size()) {
    throw std::invalid_argument("grad: value unknown to this tape");
  }
  return adjoint_[static_cast<std::size_t>(v.node)];
}

double dot(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) {
    throw std::invalid_argument("dot: length mismatch");
  }
  double s = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) s += xs[i] * ys[i];
  return s;
}

Value dot(std::span<const Value> xs, std::span<const Value> ys) {
  if (xs.size() != ys.size()) {
    throw std::invalid_argument("dot: length mismatch");
  }
  if (xs.empty()) throw std::invalid_argument("dot: empty operands");
  Tape& tape = detail::common_tape(xs[0], ys[0]);
  double s = 0.0;
  std::vector<std::int32_t> parents;
  std::vector<double> grads;
  parents.reserve(2 * xs.size());
  grads.reserve(2 * xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    s += xs[i].v * ys[i].v;
    parents.push_back(xs[i].node);
    grads.push_back(ys[i].v);
    parents.push_back(ys[i].node);
    grads.push_back(xs[i].v);
  }
  return tape.make_fused(s, parents, grads);
}

double linear(std::span<const double> coeffs, std::span<const double> xs) {
  return dot(coeffs, xs);
}

Value linear(std::span<const double> coeffs, std::span<const Value> xs) {
  if (coeffs.size() != xs.size()) {
    throw std::invalid_argument("linear: length mismatch");
  }
  if (xs.empty()) throw std::invalid_argument("linear: empty operands");
  Tape& tape = detail::tape_of(xs[0]);
  double s = 0.0;
  std::vector<std::int32_t> parents(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    s += coeffs[i] * xs[i].v;
    parents[i] = xs[i].node;
  }
  return tape.make_fused(s, parents, coeffs);
}

double sum(std::span<const double> xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return s;
}

Value sum(std::span<const Value> xs) {
  if (xs.empty()) throw std::invalid_argument("sum: empty operands");
  Tape& tape = detail::tape_of(xs[0]);
  double s = 0.0;
  std::vector<std::int32_t> parents(xs.size());
  std::vector<double> grads(xs.size(), 1.0);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    s += xs[i].v;
    parents[i] = xs[i].node;
  }
  return tape.make_fused(s, parents, grads);
}

}  // namespace wdmtwin::ad
