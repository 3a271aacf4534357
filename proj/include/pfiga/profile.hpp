// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The pfiga Authors

/// @file profile.hpp
/// Optimal transition profile of the fourth-order AT1 surface energy.
///
/// The unit transition energy is K(w) = int_0^inf (w + |w'|^2 + |w''|^2/gamma^2),
/// gamma = 1/sqrt(rho). Its constrained minimizer w* is supported on [0, R*]
/// and c_rho = 2 K(w*) normalizes the regularized surface energy so that a
/// sharp crack of length l dissipates Gc * l in the limit.

#ifndef PFIGA_PROFILE_HPP
#define PFIGA_PROFILE_HPP

#include <iosfwd>
#include <span>
#include <vector>

namespace pfiga::profile {

struct ProfileParams {
  double rho;
  double gamma;

  /// Throws DomainError unless rho > 0.
  static ProfileParams from_rho(double rho);
};

/// Coefficients of z_r(y) = a1 + a2 y + a3 cosh(y) + a4 sinh(y) + y^2/(4 gamma^2).
struct Coefficients {
  double a1;
  double a2;
  double a3;
  double a4;
};

struct ProfileSolution {
  double gamma;
  double r_star;  // rescaled support, gamma * R_star
  double R_star;
  double a1;
  double a2;
  double a3;
  double a4;
  double c_rho;

  double rho() const { return 1.0 / (gamma * gamma); }
};

struct FixedPointOptions {
  double tol = 1e-12;
  int max_iters = 200;
  bool allow_bisection = true;
};

/// Positive fixed point of r -> 2(1+gamma) tanh(r/2). Falls back to
/// bisection on [1e-6, 2(1+gamma)] when the iteration does not settle.
double solve_r_star(double gamma, const FixedPointOptions& opts = {});

/// Bisection on g(r) = r - 2(1+gamma) tanh(r/2); exposed for the fallback path.
double solve_r_star_bisection(double gamma, double tol = 1e-15);

/// |r (1 + cosh r) - 2 (gamma+1) sinh r|.
double r_star_residual(double r, double gamma);

/// Solves the boundary-value system z(0)=1, z'(0)=0, z(r)=0, z'(r)=0. Requires r > 0.
Coefficients coefficients(double r, double gamma);

/// z_r''(r): positive iff z_r stays in [0,1], zero at r = r*.
double admissibility_sign(double r, double gamma);

double c_rho_from_r(double r, double gamma);
double c_rho(double gamma);

/// Full calibration for one gamma. Pure; repeated calls are bit-identical.
ProfileSolution solve(double gamma, const FixedPointOptions& opts = {});
ProfileSolution calibrate(double rho);

/// K(w*) by composite Gauss-Legendre (n_points per subinterval) on [0, R*].
double transition_energy(const ProfileSolution& sol, int n_sub = 64, int n_points = 16);

/// One row per rho in input order; throws before returning anything if a row fails.
std::vector<ProfileSolution> calibration_table(std::span<const double> rhos);

void write_calibration_csv(std::ostream& os, std::span<const ProfileSolution> rows);

/// Elastic limit sqrt(2 Gc mu / (c eps)) of the homogeneous 1D traction state.
double sigma_th(double Gc, double mu, double eps, double c);

/// Evaluator for w* and its derivatives. Order 4 uses the calibrated
/// exponential form, order 2 the closed form (1 - x/2)^2 on [0, 2].
class OptimalProfile {
 public:
  static OptimalProfile fourth_order(const ProfileSolution& sol);
  static OptimalProfile second_order();

  int order() const { return order_; }
  double support() const { return R_star_; }
  double c() const { return c_; }
  const ProfileSolution& solution() const { return sol_; }

  /// k-th derivative (k = 0..4) at x >= 0; identically zero beyond the support.
  double derivative(double x, int k) const;
  double operator()(double x) const { return derivative(x, 0); }

 private:
  int order_ = 4;
  double R_star_ = 0.0;
  double c_ = 0.0;
  ProfileSolution sol_{};
};

inline constexpr double kSecondOrderRStar = 2.0;
inline constexpr double kSecondOrderC = 8.0 / 3.0;

}  // namespace pfiga::profile

#endif  // PFIGA_PROFILE_HPP
