// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The pfiga Authors

#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <cstring>
#include <sstream>
#include <vector>

#include "pfiga/error.hpp"
#include "pfiga/profile.hpp"

using namespace pfiga;
using namespace pfiga::profile;

namespace {

// Plain bisection on g(r) = r - 2(1+gamma) tanh(r/2), independent of the library.
double oracle_r_star(double gamma) {
  double lo = 1e-6, hi = 2.0 * (1.0 + gamma);
  const auto g = [&](double r) { return r - 2.0 * (1.0 + gamma) * std::tanh(0.5 * r); };
  for (int k = 0; k < 200; ++k) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// Adaptive Gauss-Kronrod quadrature of K(w) = int w + w'^2 + w''^2 / gamma^2.
double oracle_K(const OptimalProfile& w, double gamma) {
  const auto f = [&](double x) {
    const double d1 = w.derivative(x, 1), d2 = w.derivative(x, 2);
    return w(x) + d1 * d1 + d2 * d2 / (gamma * gamma);
  };
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, w.support(), 15, 1e-14);
}

const std::vector<double>& rhos() {
  static const std::vector<double> r = {1.0 / 16, 1.0 / 8, 1.0 / 4, 1.0 / 2, 1.0, 2.0, 4.0, 8.0, 16.0};
  return r;
}

}  // namespace

TEST_SUITE("profile") {
  TEST_CASE("ProfileParams invariants") {
    for (double rho : rhos()) {
      const ProfileParams p = ProfileParams::from_rho(rho);
      CHECK(p.gamma > 0.0);
      CHECK(p.rho * p.gamma * p.gamma == doctest::Approx(1.0).epsilon(1e-15));
    }
    CHECK_THROWS_AS(ProfileParams::from_rho(0.0), DomainError);
    CHECK_THROWS_AS(ProfileParams::from_rho(-1.0), DomainError);
  }

  TEST_CASE("solve_r_star at gamma = 1") {
    const double r = solve_r_star(1.0);
    CHECK(std::abs(r - 3.8300) < 1e-4);
    CHECK(std::abs(r * (1.0 + std::cosh(r)) - 4.0 * std::sinh(r)) <= 1e-10);
  }

  TEST_CASE("solve_r_star matches the bisection oracle") {
    for (double rho : rhos()) {
      const double gamma = 1.0 / std::sqrt(rho);
      const double r = solve_r_star(gamma);
      CHECK(std::abs(r - oracle_r_star(gamma)) < 1e-11);
      CHECK(std::abs(r * (1.0 + std::cosh(r)) - 2.0 * (gamma + 1.0) * std::sinh(r)) <= 1e-10);
    }
    const double r16 = solve_r_star(0.25);
    CHECK(r16 == doctest::Approx(1.7763).epsilon(1e-4));
    CHECK(r16 / 0.25 == doctest::Approx(7.105).epsilon(2e-4));
  }

  TEST_CASE("solve_r_star reports non-convergence") {
    FixedPointOptions opts;
    opts.max_iters = 1;
    opts.allow_bisection = false;
    try {
      solve_r_star(1.0, opts);
      FAIL("expected ConvergenceError");
    } catch (const ConvergenceError& e) {
      CHECK(e.last_iterate() > 0.0);
      CHECK(e.residual() > 0.0);
    }
    opts.allow_bisection = true;
    CHECK(solve_r_star(1.0, opts) == doctest::Approx(oracle_r_star(1.0)).epsilon(1e-12));
  }

  TEST_CASE("coefficients") {
    const double r = solve_r_star(1.0);
    const Coefficients c = coefficients(r, 1.0);
    CHECK(c.a3 == doctest::Approx(-1.5).epsilon(1e-10));
    CHECK(c.a4 == doctest::Approx(r / 4.0 + 2.0 / r).epsilon(1e-10));
    CHECK(c.a4 == doctest::Approx(1.4797).epsilon(1e-4));
    CHECK(c.a1 == 1.0 - c.a3);
    CHECK(c.a2 == -c.a4);
    CHECK_THROWS_AS(coefficients(0.0, 1.0), DomainError);
    CHECK_THROWS_AS(coefficients(-1.0, 1.0), DomainError);

    for (double g : {0.25, 0.7, 1.0, 2.0, 4.0}) {
      for (double rr : {0.5, 1.3, 3.0, 6.0}) {
        const Coefficients k = coefficients(rr, g);
        const double A11 = std::cosh(rr) - 1.0, A12 = std::sinh(rr) - rr;
        const double A21 = std::sinh(rr), A22 = std::cosh(rr) - 1.0;
        const double b1 = -(1.0 + rr * rr / (4.0 * g * g)), b2 = -rr / (2.0 * g * g);
        const double scale = std::cosh(rr);
        CHECK(std::abs(A11 * k.a3 + A12 * k.a4 - b1) <= 1e-12 * scale);
        CHECK(std::abs(A21 * k.a3 + A22 * k.a4 - b2) <= 1e-12 * scale);
      }
    }
  }

  TEST_CASE("admissibility sign flips across r*") {
    for (double rho : rhos()) {
      const double g = 1.0 / std::sqrt(rho);
      const double r = solve_r_star(g);
      CHECK(std::abs(admissibility_sign(r, g)) <= 1e-9);
      CHECK(admissibility_sign(0.9 * r, g) > 0.0);
      CHECK(admissibility_sign(1.1 * r, g) < 0.0);
    }
    CHECK_THROWS_AS(admissibility_sign(0.0, 1.0), DomainError);
  }

  TEST_CASE("c_rho values") {
    CHECK(std::abs(c_rho(1.0) - 4.4485) < 1e-4);
    CHECK(std::abs(c_rho(4.0) - 3.1615) < 1e-4);
    for (double rho : rhos()) {
      const double g = 1.0 / std::sqrt(rho);
      CHECK(std::abs(c_rho(g) - c_rho_from_r(solve_r_star(g), g)) <= 1e-10);
    }
  }

  TEST_CASE("c_rho equals twice the transition energy (adaptive quadrature)") {
    for (double rho : rhos()) {
      const ProfileSolution s = calibrate(rho);
      const OptimalProfile w = OptimalProfile::fourth_order(s);
      CHECK(std::abs(2.0 * oracle_K(w, s.gamma) - s.c_rho) <= 1e-6);
      CHECK(std::abs(2.0 * transition_energy(s) - s.c_rho) <= 1e-6);
    }
  }

  TEST_CASE("ProfileSolution invariants") {
    for (double rho : rhos()) {
      const ProfileSolution s = calibrate(rho);
      CHECK(s.a1 == 1.0 - s.a3);
      CHECK(s.a2 == -s.a4);
      CHECK(s.c_rho > 0.0);
      CHECK(s.R_star == s.r_star / s.gamma);
      CHECK(std::abs(s.r_star * (1.0 + std::cosh(s.r_star)) - 2.0 * (s.gamma + 1.0) * std::sinh(s.r_star)) <= 1e-10);
    }
  }

  TEST_CASE("w_star boundary values, bounds and support") {
    for (double rho : rhos()) {
      const ProfileSolution s = calibrate(rho);
      const OptimalProfile w = OptimalProfile::fourth_order(s);
      CHECK(w(0.0) == doctest::Approx(1.0).epsilon(1e-14));
      CHECK(std::abs(w(s.R_star)) <= 1e-9);
      CHECK(std::abs(w.derivative(s.R_star, 1)) <= 1e-9);
      for (int k = 0; k <= 1000; ++k) {
        const double x = s.R_star * k / 1000.0;
        CHECK(w(x) >= -1e-12);
        CHECK(w(x) <= 1.0 + 1e-12);
      }
      for (double x : {s.R_star * 1.0000001, s.R_star + 0.5, 100.0}) CHECK(w(x) == 0.0);
    }
  }

  TEST_CASE("w_star solves the Euler-Lagrange equation") {
    for (double rho : rhos()) {
      const ProfileSolution s = calibrate(rho);
      const OptimalProfile w = OptimalProfile::fourth_order(s);
      const double g2 = s.gamma * s.gamma;
      const double hfd = 2e-3 * s.R_star;
      double worst_analytic = 0.0, worst_fd = 0.0;
      for (int k = 1; k <= 100; ++k) {
        const double x = s.R_star * k / 101.0;
        worst_analytic = std::max(worst_analytic,
                                  std::abs(1.0 - 2.0 * w.derivative(x, 2) + 2.0 / g2 * w.derivative(x, 4)));
        // Fourth derivative from second derivatives by a fourth-order central difference.
        if (x - 2 * hfd > 0.0 && x + 2 * hfd < s.R_star) {
          const auto d2 = [&](double y) { return w.derivative(y, 2); };
          const double d4 = (-d2(x + 2 * hfd) + 16 * d2(x + hfd) - 30 * d2(x) + 16 * d2(x - hfd) - d2(x - 2 * hfd)) /
                            (12 * hfd * hfd);
          worst_fd = std::max(worst_fd, std::abs(1.0 - 2.0 * w.derivative(x, 2) + 2.0 / g2 * d4));
        }
      }
      CHECK(worst_analytic <= 1e-7);
      CHECK(worst_fd <= 1e-6);  // difference-quotient truncation and rounding
    }
  }

  TEST_CASE("support grows with rho; pure function") {
    double prev = 0.0;
    for (double rho : rhos()) {
      const ProfileSolution s = calibrate(rho);
      CHECK(s.R_star > prev);
      prev = s.R_star;
      const ProfileSolution t = calibrate(rho);
      CHECK(std::memcmp(&s, &t, sizeof s) == 0);
    }
  }

  TEST_CASE("admissible range of z_r") {
    for (double g : {0.25, 0.5, 1.0, 2.0, 4.0}) {
      const double rs = solve_r_star(g);
      // z_r(y) for r <= r*: values stay in [0, 1]; for r = 1.05 r* the minimum is negative.
      const auto z_min_max = [&](double r) {
        const Coefficients c = coefficients(r, g);
        double lo = 1e300, hi = -1e300;
        for (int k = 0; k <= 2000; ++k) {
          const double y = r * k / 2000.0;
          const double z = c.a1 + c.a2 * y + c.a3 * std::cosh(y) + c.a4 * std::sinh(y) + y * y / (4.0 * g * g);
          lo = std::min(lo, z);
          hi = std::max(hi, z);
        }
        return std::pair{lo, hi};
      };
      for (double f : {0.3, 0.6, 0.9, 1.0}) {
        const auto [lo, hi] = z_min_max(f * rs);
        CHECK(lo >= -1e-9);
        CHECK(hi <= 1.0 + 1e-9);
      }
      CHECK(z_min_max(1.05 * rs).first < 0.0);
    }
  }

  TEST_CASE("second order profile") {
    const OptimalProfile w = OptimalProfile::second_order();
    CHECK(w.support() == 2.0);
    CHECK(w.c() == 8.0 / 3.0);
    CHECK(kSecondOrderRStar == 2.0);
    CHECK(kSecondOrderC == 8.0 / 3.0);
    CHECK(w(0.0) == 1.0);
    CHECK(w(2.0) == 0.0);
    CHECK(w.derivative(2.0, 1) == 0.0);
    for (int k = 0; k <= 200; ++k) {
      const double x = 2.0 * k / 200.0;
      CHECK(std::abs(w(x) - (x * x / 4.0 - x + 1.0)) <= 1e-15);
    }
    const double R = 2.0;
    CHECK(R - R * R * R / 24.0 + 2.0 / R == doctest::Approx(8.0 / 3.0).epsilon(1e-15));
    // c = 2 K(w) with K(w) = int w + w'^2.
    const double K = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        [&](double x) { return w(x) + std::pow(w.derivative(x, 1), 2); }, 0.0, 2.0);
    CHECK(2.0 * K == doctest::Approx(8.0 / 3.0).epsilon(1e-13));
  }

  TEST_CASE("calibration table and CSV") {
    const std::vector<double> in = {4.0, 1.0, 0.25};
    const auto rows = calibration_table(in);
    REQUIRE(rows.size() == 3);
    for (std::size_t k = 0; k < in.size(); ++k) CHECK(rows[k].rho() == doctest::Approx(in[k]).epsilon(1e-14));
    CHECK(std::abs(calibrate(1.0 / 16).R_star - 2.4998) < 1e-4);
    CHECK_THROWS_AS(calibration_table(std::vector<double>{1.0, -2.0}), DomainError);

    std::ostringstream os;
    write_calibration_csv(os, rows);
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    CHECK(line == "rho,gamma,r_star,R_star,c_rho");
    int n = 0;
    while (std::getline(is, line)) ++n;
    CHECK(n == 3);
    std::ostringstream empty;
    write_calibration_csv(empty, {});
    CHECK(empty.str() == "rho,gamma,r_star,R_star,c_rho\n");
  }

  TEST_CASE("sigma_th") {
    CHECK(std::abs(sigma_th(0.01, 50.0, 0.125, 4.4485) - 1.34103) < 1e-4);
    CHECK(std::abs(sigma_th(0.01, 50.0, 0.125, 8.0 / 3.0) - 1.73205) < 1e-4);
    CHECK(sigma_th(0.01, 50.0, 0.5, 4.4485) == doctest::Approx(0.5 * sigma_th(0.01, 50.0, 0.125, 4.4485)).epsilon(1e-14));
    CHECK_THROWS_AS(sigma_th(0.0, 50.0, 0.125, 4.4), DomainError);
    CHECK_THROWS_AS(sigma_th(0.01, -1.0, 0.125, 4.4), DomainError);
  }
}
