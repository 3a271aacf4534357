// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The pfiga Authors

#include "pfiga/spline.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pfiga/error.hpp"

namespace pfiga {

KnotVector::KnotVector(int degree, std::vector<double> knots) : p_(degree), knots_(std::move(knots)) {
  if (p_ < 1) throw DomainError("KnotVector: degree must be >= 1");
  if (static_cast<int>(knots_.size()) < 2 * (p_ + 1)) {
    throw DomainError("KnotVector: need at least 2(p+1) knots");
  }
  for (std::size_t i = 1; i < knots_.size(); ++i) {
    if (!(knots_[i] >= knots_[i - 1])) throw DomainError("KnotVector: knots must be nondecreasing");
  }
  for (int i = p_; i < static_cast<int>(knots_.size()) - p_ - 1; ++i) {
    if (knots_[i + 1] > knots_[i]) spans_.push_back(i);
  }
  if (spans_.empty()) throw DomainError("KnotVector: no nonempty span");
}

KnotVector KnotVector::uniform_open(int degree, int n_elements, double a, double b) {
  if (n_elements < 1) throw DomainError("uniform_open: need at least one element");
  if (!(b > a)) throw DomainError("uniform_open: empty interval");
  std::vector<double> k;
  k.reserve(n_elements + 2 * degree + 1);
  for (int i = 0; i < degree; ++i) k.push_back(a);
  for (int i = 0; i <= n_elements; ++i) {
    k.push_back(i == n_elements ? b : a + (b - a) * i / n_elements);
  }
  for (int i = 0; i < degree; ++i) k.push_back(b);
  return KnotVector(degree, std::move(k));
}

bool KnotVector::is_open() const {
  const int m = static_cast<int>(knots_.size());
  for (int i = 1; i <= p_; ++i) {
    if (knots_[i] != knots_[0] || knots_[m - 1 - i] != knots_[m - 1]) return false;
  }
  return true;
}

int KnotVector::find_span(double x) const {
  if (x >= knots_[spans_.back() + 1]) return spans_.back();
  if (x <= knots_[spans_.front()]) return spans_.front();
  // Last i with knots[i] <= x among the span starts.
  auto it = std::upper_bound(knots_.begin(), knots_.end(), x);
  return static_cast<int>(it - knots_.begin()) - 1;
}

void KnotVector::eval_ders(int span, double x, int n_ders, std::span<double> out) const {
  const int p = p_;
  const double lo = knots_[span], hi = knots_[span + 1];
  const double slack = 1e-12 * std::max(1.0, hi - lo);
  if (x < lo - slack || x > hi + slack) {
    throw DomainError("eval_ders: point " + std::to_string(x) + " outside span [" +
                      std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  if (static_cast<int>(out.size()) < (n_ders + 1) * (p + 1)) {
    throw DomainError("eval_ders: output buffer too small");
  }
  // Cox-de Boor triangle with derivative recursion.
  constexpr int kMaxP = 8;
  if (p > kMaxP) throw DomainError("eval_ders: degree too large");
  double ndu[kMaxP + 1][kMaxP + 1];
  double left[kMaxP + 1], right[kMaxP + 1];
  ndu[0][0] = 1.0;
  for (int j = 1; j <= p; ++j) {
    left[j] = x - knots_[span + 1 - j];
    right[j] = knots_[span + j] - x;
    double saved = 0.0;
    for (int r = 0; r < j; ++r) {
      ndu[j][r] = right[r + 1] + left[j - r];
      const double temp = ndu[r][j - 1] / ndu[j][r];
      ndu[r][j] = saved + right[r + 1] * temp;
      saved = left[j - r] * temp;
    }
    ndu[j][j] = saved;
  }
  const int nd = std::min(n_ders, p);
  for (int j = 0; j <= p; ++j) out[j] = ndu[j][p];
  double a[2][kMaxP + 1];
  for (int r = 0; r <= p; ++r) {
    int s1 = 0, s2 = 1;
    a[0][0] = 1.0;
    for (int k = 1; k <= nd; ++k) {
      double d = 0.0;
      const int rk = r - k, pk = p - k;
      if (r >= k) {
        a[s2][0] = a[s1][0] / ndu[pk + 1][rk];
        d = a[s2][0] * ndu[rk][pk];
      }
      const int j1 = (rk >= -1) ? 1 : -rk;
      const int j2 = (r - 1 <= pk) ? k - 1 : p - r;
      for (int j = j1; j <= j2; ++j) {
        a[s2][j] = (a[s1][j] - a[s1][j - 1]) / ndu[pk + 1][rk + j];
        d += a[s2][j] * ndu[rk + j][pk];
      }
      if (r <= pk) {
        a[s2][k] = -a[s1][k - 1] / ndu[pk + 1][r];
        d += a[s2][k] * ndu[r][pk];
      }
      out[k * (p + 1) + r] = d;
      std::swap(s1, s2);
    }
  }
  int factor = p;
  for (int k = 1; k <= nd; ++k) {
    for (int j = 0; j <= p; ++j) out[k * (p + 1) + j] *= factor;
    factor *= (p - k);
  }
  for (int k = nd + 1; k <= n_ders; ++k) {
    for (int j = 0; j <= p; ++j) out[k * (p + 1) + j] = 0.0;
  }
}

std::vector<double> KnotVector::greville() const {
  std::vector<double> g(dim());
  for (int i = 0; i < dim(); ++i) {
    double s = 0.0;
    for (int k = 1; k <= p_; ++k) s += knots_[i + k];
    g[i] = s / p_;
  }
  return g;
}

SplineSpace2D::SplineSpace2D(KnotVector kx, KnotVector ky, Rectangle rect)
    : kx_(std::move(kx)), ky_(std::move(ky)), rect_(rect) {
  if (!(rect_.x1 > rect_.x0) || !(rect_.y1 > rect_.y0)) {
    throw DomainError("SplineSpace2D: degenerate rectangle");
  }
}

Rectangle SplineSpace2D::element_box(int e) const {
  const int sx = span_x(e), sy = span_y(e);
  return {to_x(kx_.knots()[sx]), to_x(kx_.knots()[sx + 1]), to_y(ky_.knots()[sy]),
          to_y(ky_.knots()[sy + 1])};
}

void SplineSpace2D::element_dofs(int e, std::span<int> out) const {
  const int px = degree_x(), py = degree_y();
  const int ix0 = span_x(e) - px, iy0 = span_y(e) - py;
  for (int b = 0; b <= py; ++b) {
    for (int a = 0; a <= px; ++a) out[a + (px + 1) * b] = (ix0 + a) + nx() * (iy0 + b);
  }
}

double SplineSpace2D::to_x(double xi) const { return rect_.x0 + (xi - kx_.front()) * jac_x(); }
double SplineSpace2D::to_y(double eta) const { return rect_.y0 + (eta - ky_.front()) * jac_y(); }
double SplineSpace2D::to_xi(double x) const { return kx_.front() + (x - rect_.x0) / jac_x(); }
double SplineSpace2D::to_eta(double y) const { return ky_.front() + (y - rect_.y0) / jac_y(); }

BasisValues SplineSpace2D::eval_basis(int e, double xi, double eta) const {
  const int px = degree_x(), py = degree_y();
  std::vector<double> bx(3 * (px + 1)), by(3 * (py + 1));
  kx_.eval_ders(span_x(e), xi, 2, bx);
  ky_.eval_ders(span_y(e), eta, 2, by);
  const double jx = 1.0 / jac_x(), jy = 1.0 / jac_y();
  const int n = n_local();
  BasisValues out{std::vector<double>(n), std::vector<double>(n), std::vector<double>(n),
                  std::vector<double>(n), std::vector<double>(n), std::vector<double>(n)};
  for (int b = 0; b <= py; ++b) {
    const double ny0 = by[b], ny1 = by[py + 1 + b] * jy, ny2 = by[2 * (py + 1) + b] * jy * jy;
    for (int a = 0; a <= px; ++a) {
      const double nx0 = bx[a], nx1 = bx[px + 1 + a] * jx, nx2 = bx[2 * (px + 1) + a] * jx * jx;
      const int l = a + (px + 1) * b;
      out.N[l] = nx0 * ny0;
      out.dx[l] = nx1 * ny0;
      out.dy[l] = nx0 * ny1;
      out.dxx[l] = nx2 * ny0;
      out.dyy[l] = nx0 * ny2;
      out.dxy[l] = nx1 * ny1;
    }
  }
  return out;
}

int SplineSpace2D::locate(double x, double y) const {
  const double xi = to_xi(std::clamp(x, rect_.x0, rect_.x1));
  const double eta = to_eta(std::clamp(y, rect_.y0, rect_.y1));
  const auto& sx = kx_.element_spans();
  const auto& sy = ky_.element_spans();
  const int ex = static_cast<int>(std::lower_bound(sx.begin(), sx.end(), kx_.find_span(xi)) - sx.begin());
  const int ey = static_cast<int>(std::lower_bound(sy.begin(), sy.end(), ky_.find_span(eta)) - sy.begin());
  return ex + nex() * ey;
}

double SplineSpace2D::evaluate(std::span<const double> c, double x, double y) const {
  const int e = locate(x, y);
  const double xi = std::clamp(to_xi(x), kx_.knots()[span_x(e)], kx_.knots()[span_x(e) + 1]);
  const double eta = std::clamp(to_eta(y), ky_.knots()[span_y(e)], ky_.knots()[span_y(e) + 1]);
  const int px = degree_x(), py = degree_y();
  std::array<double, 9> bx{}, by{};
  kx_.eval_ders(span_x(e), xi, 0, bx);
  ky_.eval_ders(span_y(e), eta, 0, by);
  const int ix0 = span_x(e) - px, iy0 = span_y(e) - py;
  double v = 0.0;
  for (int b = 0; b <= py; ++b) {
    for (int a = 0; a <= px; ++a) v += bx[a] * by[b] * c[(ix0 + a) + nx() * (iy0 + b)];
  }
  return v;
}

int elements_for_spacing(double L, double h) {
  if (!(L > 0.0) || !(h > 0.0)) throw DomainError("elements_for_spacing: nonpositive length");
  return std::max(1, static_cast<int>(std::ceil(L / h * (1.0 - 1e-12))));
}

SplineSpace2D make_mesh_h(const Rectangle& rect, double h, int degree) {
  if (!(rect.x1 > rect.x0) || !(rect.y1 > rect.y0)) throw DomainError("make_mesh: degenerate rectangle");
  const int nex = elements_for_spacing(rect.width(), h);
  const int ney = elements_for_spacing(rect.height(), h);
  return SplineSpace2D(KnotVector::uniform_open(degree, nex), KnotVector::uniform_open(degree, ney), rect);
}

SplineSpace2D make_mesh(const Rectangle& rect, const MeshRule& rule, int degree) {
  if (rule.n != 2 && rule.n != 4 && rule.n != 8 && rule.n != 16) {
    throw DomainError("make_mesh: n must be one of 2, 4, 8, 16");
  }
  if (!(rule.eps > 0.0) || !(rule.R_star > 0.0)) throw DomainError("make_mesh: eps and R* must be positive");
  return make_mesh_h(rect, rule.R_star * rule.eps / rule.n, degree);
}

std::vector<double> greville_collocation(const KnotVector& kv) {
  const int n = kv.dim(), p = kv.degree();
  const auto g = kv.greville();
  std::vector<double> B(static_cast<std::size_t>(n) * n, 0.0);
  std::vector<double> vals(p + 1);
  for (int i = 0; i < n; ++i) {
    const int span = kv.find_span(g[i]);
    kv.eval_ders(span, g[i], 0, vals);
    for (int j = 0; j <= p; ++j) B[static_cast<std::size_t>(i) * n + span - p + j] = vals[j];
  }
  return B;
}

}  // namespace pfiga
