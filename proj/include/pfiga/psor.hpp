// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The pfiga Authors

/// @file psor.hpp
/// Projected successive over-relaxation for box-constrained convex QPs
///   min 1/2 x'Ax - b'x  subject to  lo <= x <= hi,
/// with A symmetric positive (semi)definite and a positive diagonal.

#ifndef PFIGA_PSOR_HPP
#define PFIGA_PSOR_HPP

#include <span>

#include "pfiga/assembly.hpp"

namespace pfiga {

struct PsorOptions {
  double omega = 1.5;
  double tol = 1e-8;       // on the KKT residual
  int max_sweeps = 20000;
  int check_every = 1;     // sweeps between KKT evaluations
};

struct PsorResult {
  int sweeps = 0;
  double kkt = 0.0;
};

/// Max violation of the KKT conditions of the box QP at x, with g = Ax - b:
/// |g_i| in the interior, max(0, -g_i) at the lower bound, max(0, g_i) at the upper.
double kkt_residual(const SparseMatrix& A, std::span<const double> b, std::span<const double> lo,
                    std::span<const double> hi, std::span<const double> x);

/// Sweeps in ascending index order starting from x (projected onto the box first).
/// Throws ConvergenceError with the final KKT violation when max_sweeps is reached.
PsorResult psor_solve(const SparseMatrix& A, std::span<const double> b, std::span<const double> lo,
                      std::span<const double> hi, std::span<double> x, const PsorOptions& opts = {});

}  // namespace pfiga

#endif  // PFIGA_PSOR_HPP
