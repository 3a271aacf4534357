// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The pfiga Authors

#include "pfiga/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "pfiga/error.hpp"

namespace pfiga {

GaussLegendre::GaussLegendre(int n) : points(n), weights(n) {
  if (n < 1) throw DomainError("GaussLegendre: need at least one point");
  // Newton on P_n from the Chebyshev-like initial guess; symmetric pairs.
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    points[i] = -x;
    points[n - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    weights[i] = w;
    weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) points[m - 1] = 0.0;
}

}  // namespace pfiga
