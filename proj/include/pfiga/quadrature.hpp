// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The pfiga Authors

#ifndef PFIGA_QUADRATURE_HPP
#define PFIGA_QUADRATURE_HPP

#include <vector>

namespace pfiga {

/// Gauss-Legendre rule on [-1, 1].
struct GaussLegendre {
  std::vector<double> points;
  std::vector<double> weights;

  explicit GaussLegendre(int n);
  int size() const { return static_cast<int>(points.size()); }
};

/// Composite Gauss-Legendre integral of f over [a, b].
template <class F>
double integrate_composite(F&& f, double a, double b, int n_sub, const GaussLegendre& rule) {
  const double h = (b - a) / n_sub;
  double sum = 0.0;
  for (int s = 0; s < n_sub; ++s) {
    const double mid = a + (s + 0.5) * h;
    for (int q = 0; q < rule.size(); ++q) {
      sum += rule.weights[q] * f(mid + 0.5 * h * rule.points[q]);
    }
  }
  return 0.5 * h * sum;
}

}  // namespace pfiga

#endif  // PFIGA_QUADRATURE_HPP
