// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The pfiga Authors

#include "pfiga/profile.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

#include "pfiga/error.hpp"
#include "pfiga/quadrature.hpp"

namespace pfiga::profile {

namespace {

void require_positive(double value, const char* what) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw DomainError(std::string(what) + " must be positive and finite");
  }
}

double fixed_point_map(double r, double gamma) { return 2.0 * (1.0 + gamma) * std::tanh(0.5 * r); }

}  // namespace

ProfileParams ProfileParams::from_rho(double rho) {
  require_positive(rho, "rho");
  return {rho, 1.0 / std::sqrt(rho)};
}

double r_star_residual(double r, double gamma) {
  return std::abs(r * (1.0 + std::cosh(r)) - 2.0 * (gamma + 1.0) * std::sinh(r));
}

double solve_r_star_bisection(double gamma, double tol) {
  require_positive(gamma, "gamma");
  double lo = 1e-6;
  double hi = 2.0 * (1.0 + gamma);
  // g(lo) < 0 < g(hi) since G1 has slope 1+gamma > 1 at the origin and is bounded by 2(1+gamma).
  for (int it = 0; it < 200 && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid - fixed_point_map(mid, gamma) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double solve_r_star(double gamma, const FixedPointOptions& opts) {
  require_positive(gamma, "gamma");
  require_positive(opts.tol, "tol");
  double r = 2.0 * (1.0 + gamma);
  double step = 0.0;
  for (int it = 0; it < opts.max_iters; ++it) {
    const double next = fixed_point_map(r, gamma);
    step = std::abs(next - r);
    r = next;
    if (step <= opts.tol) return r;
  }
  if (opts.allow_bisection) return solve_r_star_bisection(gamma);
  throw ConvergenceError("solve_r_star: fixed-point iteration did not converge", r,
                         r_star_residual(r, gamma));
}

Coefficients coefficients(double r, double gamma) {
  if (!(r > 0.0)) throw DomainError("coefficients: r must be positive");
  require_positive(gamma, "gamma");
  const double ch = std::cosh(r);
  const double sh = std::sinh(r);
  const double g2 = gamma * gamma;
  const double A11 = ch - 1.0, A12 = sh - r;
  const double A21 = sh, A22 = ch - 1.0;
  const double b1 = -(1.0 + r * r / (4.0 * g2));
  const double b2 = -r / (2.0 * g2);
  const double det = 2.0 - 2.0 * ch + r * sh;
  const double a3 = (A22 * b1 - A12 * b2) / det;
  const double a4 = (-A21 * b1 + A11 * b2) / det;
  return {1.0 - a3, -a4, a3, a4};
}

double admissibility_sign(double r, double gamma) {
  if (!(r > 0.0)) throw DomainError("admissibility_sign: r must be positive");
  require_positive(gamma, "gamma");
  const double ch = std::cosh(r);
  const double sh = std::sinh(r);
  const double g2 = gamma * gamma;
  const double num = r * r * (1.0 + ch) - 4.0 * r * sh + 4.0 * (g2 - 1.0) * (1.0 - ch);
  const double den = 4.0 * g2 * (2.0 - 2.0 * ch + r * sh);
  return -num / den;
}

double c_rho_from_r(double r, double gamma) {
  const double g = gamma;
  return 2.0 * (1.0 + g) / r + r * (2.0 * g + 1.0) / (2.0 * g * g) - r * r * r / (24.0 * g * g * g);
}

double c_rho(double gamma) {
  const double R = solve_r_star(gamma) / gamma;
  return 2.0 * (1.0 + gamma) / (gamma * R) + (1.0 + 2.0 * gamma) * R / (2.0 * gamma) -
         R * R * R / 24.0;
}

ProfileSolution solve(double gamma, const FixedPointOptions& opts) {
  const double r = solve_r_star(gamma, opts);
  const Coefficients a = coefficients(r, gamma);
  ProfileSolution sol{};
  sol.gamma = gamma;
  sol.r_star = r;
  sol.R_star = r / gamma;
  sol.a1 = a.a1;
  sol.a2 = a.a2;
  sol.a3 = a.a3;
  sol.a4 = a.a4;
  const double R = sol.R_star;
  sol.c_rho = 2.0 * (1.0 + gamma) / (gamma * R) + (1.0 + 2.0 * gamma) * R / (2.0 * gamma) -
              R * R * R / 24.0;
  return sol;
}

ProfileSolution calibrate(double rho) { return solve(ProfileParams::from_rho(rho).gamma); }

double transition_energy(const ProfileSolution& sol, int n_sub, int n_points) {
  const OptimalProfile w = OptimalProfile::fourth_order(sol);
  const double inv_g2 = 1.0 / (sol.gamma * sol.gamma);
  const GaussLegendre rule(n_points);
  return integrate_composite(
      [&](double x) {
        const double d1 = w.derivative(x, 1);
        const double d2 = w.derivative(x, 2);
        return w(x) + d1 * d1 + inv_g2 * d2 * d2;
      },
      0.0, sol.R_star, n_sub, rule);
}

std::vector<ProfileSolution> calibration_table(std::span<const double> rhos) {
  std::vector<ProfileSolution> rows;
  rows.reserve(rhos.size());
  for (double rho : rhos) rows.push_back(calibrate(rho));
  return rows;
}

void write_calibration_csv(std::ostream& os, std::span<const ProfileSolution> rows) {
  os << "rho,gamma,r_star,R_star,c_rho\n";
  char buf[160];
  for (const auto& s : rows) {
    std::snprintf(buf, sizeof buf, "%.12e,%.12e,%.12e,%.12e,%.12e\n", s.rho(), s.gamma, s.r_star,
                  s.R_star, s.c_rho);
    os << buf;
  }
}

double sigma_th(double Gc, double mu, double eps, double c) {
  require_positive(Gc, "Gc");
  require_positive(mu, "mu");
  require_positive(eps, "eps");
  require_positive(c, "c");
  return std::sqrt(2.0 * Gc * mu / (c * eps));
}

OptimalProfile OptimalProfile::fourth_order(const ProfileSolution& sol) {
  OptimalProfile p;
  p.order_ = 4;
  p.R_star_ = sol.R_star;
  p.c_ = sol.c_rho;
  p.sol_ = sol;
  return p;
}

OptimalProfile OptimalProfile::second_order() {
  OptimalProfile p;
  p.order_ = 2;
  p.R_star_ = kSecondOrderRStar;
  p.c_ = kSecondOrderC;
  return p;
}

double OptimalProfile::derivative(double x, int k) const {
  if (x < 0.0) throw DomainError("OptimalProfile: x must be nonnegative");
  if (k < 0 || k > 4) throw DomainError("OptimalProfile: derivative order must be 0..4");
  if (x > R_star_) return 0.0;
  if (order_ == 2) {
    switch (k) {
      case 0: return 0.25 * x * x - x + 1.0;
      case 1: return 0.5 * x - 1.0;
      case 2: return 0.5;
      default: return 0.0;
    }
  }
  const double g = sol_.gamma;
  const double a3 = sol_.a3, a4 = sol_.a4;
  const double ch = std::cosh(g * x), sh = std::sinh(g * x);
  switch (k) {
    case 0: return a3 * (ch - 1.0) + a4 * (sh - g * x) + 0.25 * x * x + 1.0;
    case 1: return g * (a3 * sh + a4 * (ch - 1.0)) + 0.5 * x;
    case 2: return g * g * (a3 * ch + a4 * sh) + 0.5;
    case 3: return g * g * g * (a3 * sh + a4 * ch);
    default: return g * g * g * g * (a3 * ch + a4 * sh);
  }
}

}  // namespace pfiga::profile
