// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The pfiga Authors

/// @file spline.hpp
/// Open B-spline knot vectors and tensor-product spline spaces on
/// axis-aligned rectangles.

#ifndef PFIGA_SPLINE_HPP
#define PFIGA_SPLINE_HPP

#include <array>
#include <span>
#include <vector>

namespace pfiga {

class KnotVector {
 public:
  /// Throws DomainError for a decreasing sequence or too few knots.
  KnotVector(int degree, std::vector<double> knots);

  /// Clamped vector with n_elements equal spans on [a, b] and C^{p-1} continuity.
  static KnotVector uniform_open(int degree, int n_elements, double a = 0.0, double b = 1.0);

  int degree() const { return p_; }
  const std::vector<double>& knots() const { return knots_; }
  int dim() const { return static_cast<int>(knots_.size()) - p_ - 1; }
  double front() const { return knots_.front(); }
  double back() const { return knots_.back(); }
  bool is_open() const;

  /// Span index i with knots[i] <= x < knots[i+1]; the last nonempty span at the right end.
  int find_span(double x) const;

  /// Indices i of the nonempty spans [knots[i], knots[i+1]), in increasing order.
  const std::vector<int>& element_spans() const { return spans_; }
  int n_elements() const { return static_cast<int>(spans_.size()); }

  /// Values and derivatives up to n_ders of the p+1 functions supported on span,
  /// written row-major as out[k * (p+1) + j] = d^k N_{span-p+j} / dx^k.
  /// Throws DomainError when x lies outside [knots[span], knots[span+1]].
  void eval_ders(int span, double x, int n_ders, std::span<double> out) const;

  /// Knot averages; one abscissa per basis function.
  std::vector<double> greville() const;

 private:
  int p_;
  std::vector<double> knots_;
  std::vector<int> spans_;
};

struct Rectangle {
  double x0;
  double x1;
  double y0;
  double y1;

  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
  double area() const { return width() * height(); }
};

/// Basis quantities for the (p+1)^2 functions of one element, in physical coordinates.
/// Local index a + (p+1) * b pairs x-function a with y-function b.
struct BasisValues {
  std::vector<double> N, dx, dy, dxx, dyy, dxy;
};

/// Tensor-product spline space over a rectangle, parametrized on the knot
/// vectors' own ranges through an affine map. Control point (i, j) has global
/// index i + nx * j.
class SplineSpace2D {
 public:
  SplineSpace2D(KnotVector kx, KnotVector ky, Rectangle rect);

  const KnotVector& kx() const { return kx_; }
  const KnotVector& ky() const { return ky_; }
  const Rectangle& rect() const { return rect_; }
  int degree_x() const { return kx_.degree(); }
  int degree_y() const { return ky_.degree(); }
  int nx() const { return kx_.dim(); }
  int ny() const { return ky_.dim(); }
  int n_dofs() const { return nx() * ny(); }
  int nex() const { return kx_.n_elements(); }
  int ney() const { return ky_.n_elements(); }
  int n_elements() const { return nex() * ney(); }
  int n_local() const { return (degree_x() + 1) * (degree_y() + 1); }

  /// Element e = ex + nex * ey.
  int span_x(int e) const { return kx_.element_spans()[e % nex()]; }
  int span_y(int e) const { return ky_.element_spans()[e / nex()]; }
  Rectangle element_box(int e) const;

  void element_dofs(int e, std::span<int> out) const;

  /// Parametric <-> physical affine map.
  double to_x(double xi) const;
  double to_y(double eta) const;
  double to_xi(double x) const;
  double to_eta(double y) const;
  double jac_x() const { return rect_.width() / (kx_.back() - kx_.front()); }
  double jac_y() const { return rect_.height() / (ky_.back() - ky_.front()); }

  /// Basis at parametric point (xi, eta) inside element e; throws DomainError outside.
  BasisValues eval_basis(int e, double xi, double eta) const;

  /// Element containing the physical point (clamped to the rectangle).
  int locate(double x, double y) const;

  /// Value of the spline with control coefficients c at a physical point.
  double evaluate(std::span<const double> c, double x, double y) const;

 private:
  KnotVector kx_, ky_;
  Rectangle rect_;
};

struct MeshRule {
  double eps;
  double R_star;
  int n;
};

/// Uniform quadratic C^1 space with spacing h' = L / ceil(L / h), h = R* eps / n,
/// in each direction. n must be one of 2, 4, 8, 16.
SplineSpace2D make_mesh(const Rectangle& rect, const MeshRule& rule, int degree = 2);

/// Uniform space with an explicit target spacing h.
SplineSpace2D make_mesh_h(const Rectangle& rect, double h, int degree = 2);

/// Number of equal spans of width <= h covering a side of length L.
int elements_for_spacing(double L, double h);

/// Collocation matrix B[i][j] = N_j(greville_i) of a 1D space, dense row-major.
std::vector<double> greville_collocation(const KnotVector& kv);

}  // namespace pfiga

#endif  // PFIGA_SPLINE_HPP
