// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The pfiga Authors

#include "pfiga/psor.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pfiga/error.hpp"

namespace pfiga {

namespace {

void check_sizes(const SparseMatrix& A, std::size_t b, std::size_t lo, std::size_t hi, std::size_t x) {
  const auto n = static_cast<std::size_t>(A.rows());
  if (A.cols() != A.rows() || b != n || lo != n || hi != n || x != n) {
    throw DomainError("psor: dimension mismatch");
  }
}

}  // namespace

double kkt_residual(const SparseMatrix& A, std::span<const double> b, std::span<const double> lo,
                    std::span<const double> hi, std::span<const double> x) {
  check_sizes(A, b.size(), lo.size(), hi.size(), x.size());
  const int n = static_cast<int>(A.rows());
  const int* outer = A.outerIndexPtr();
  const int* inner = A.innerIndexPtr();
  const double* val = A.valuePtr();
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    double g = -b[i];
    for (int k = outer[i]; k < outer[i + 1]; ++k) g += val[k] * x[inner[k]];
    double viol;
    if (lo[i] >= hi[i]) {
      viol = 0.0;
    } else if (x[i] <= lo[i]) {
      viol = std::max(0.0, -g);
    } else if (x[i] >= hi[i]) {
      viol = std::max(0.0, g);
    } else {
      viol = std::abs(g);
    }
    worst = std::max(worst, viol);
  }
  return worst;
}

PsorResult psor_solve(const SparseMatrix& A, std::span<const double> b, std::span<const double> lo,
                      std::span<const double> hi, std::span<double> x, const PsorOptions& opts) {
  check_sizes(A, b.size(), lo.size(), hi.size(), x.size());
  if (!(opts.omega > 0.0 && opts.omega < 2.0)) throw DomainError("psor: omega must lie in (0, 2)");
  if (!(opts.tol > 0.0)) throw DomainError("psor: tol must be positive");
  if (!A.isCompressed()) throw DomainError("psor: matrix must be compressed");
  const int n = static_cast<int>(A.rows());
  const int* outer = A.outerIndexPtr();
  const int* inner = A.innerIndexPtr();
  const double* val = A.valuePtr();

  std::vector<double> diag(n, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int k = outer[i]; k < outer[i + 1]; ++k) {
      if (inner[k] == i) diag[i] = val[k];
    }
    if (!(diag[i] > 0.0)) throw DomainError("psor: diagonal entry " + std::to_string(i) + " is not positive");
    x[i] = std::clamp(x[i], lo[i], hi[i]);
  }

  PsorResult res;
  res.kkt = kkt_residual(A, b, lo, hi, x);
  if (res.kkt <= opts.tol) return res;
  const int check = std::max(1, opts.check_every);
  while (res.sweeps < opts.max_sweeps) {
    for (int i = 0; i < n; ++i) {
      double ax = 0.0;
      for (int k = outer[i]; k < outer[i + 1]; ++k) ax += val[k] * x[inner[k]];
      const double xi = x[i] + opts.omega * (b[i] - ax) / diag[i];
      x[i] = std::clamp(xi, lo[i], hi[i]);
    }
    ++res.sweeps;
    if (res.sweeps % check == 0 || res.sweeps == opts.max_sweeps) {
      res.kkt = kkt_residual(A, b, lo, hi, x);
      if (res.kkt <= opts.tol) return res;
    }
  }
  throw ConvergenceError("psor: sweep limit reached, max KKT violation " + std::to_string(res.kkt), res.sweeps,
                         res.kkt);
}

}  // namespace pfiga
