// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The pfiga Authors

#ifndef PFIGA_ERROR_HPP
#define PFIGA_ERROR_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace pfiga {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Invalid or inconsistent run configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An iterative method stopped before meeting its tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double last_iterate, double residual,
                   std::vector<double> history = {})
      : std::runtime_error(what),
        last_iterate_(last_iterate),
        residual_(residual),
        history_(std::move(history)) {}

  double last_iterate() const noexcept { return last_iterate_; }
  double residual() const noexcept { return residual_; }
  /// Energy (or residual) history, when the failing method tracks one.
  const std::vector<double>& history() const noexcept { return history_; }

 private:
  double last_iterate_;
  double residual_;
  std::vector<double> history_;
};

/// Linear system that cannot be solved (e.g. missing Dirichlet constraints).
class SingularSystemError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace pfiga

#endif  // PFIGA_ERROR_HPP
