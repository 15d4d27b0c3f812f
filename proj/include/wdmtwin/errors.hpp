// Copyright (c) 2026 wdmtwin authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace wdmtwin {

/// Raised when a computation-graph operation is evaluated outside its real
/// domain (ln of a non-positive value, division by zero, ...). Carries the
/// tag of the offending operation.
class DomainError : public std::domain_error {
 public:
  DomainError(std::string op_tag, double operand)
      : std::domain_error("domain error in op '" + op_tag +
                          "' at operand value " + std::to_string(operand)),
        op_tag_(std::move(op_tag)),
        operand_(operand) {}

  const std::string& op_tag() const noexcept { return op_tag_; }
  double operand() const noexcept { return operand_; }

 private:
  std::string op_tag_;
  double operand_;
};

/// Raised for parameter combinations the models cannot represent
/// (e.g. zero group-velocity dispersion with nonzero Kerr coefficient).
class UnsupportedConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when an iterative numerical procedure fails (diverging loss, ...).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace wdmtwin
