// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The pfiga Authors

#include "pfiga/assembly.hpp"

#include <algorithm>
#include <cstddef>

#include "pfiga/error.hpp"
#include "pfiga/quadrature.hpp"

namespace pfiga {

namespace {

constexpr int kBlock = 512;  // elements per parallel buffer block

// Tensor stencil |i - j| <= p per direction, full (both triangles) storage.
SparsityPattern build_pattern(const SplineSpace2D& space, int n_comp) {
  const int nx = space.nx(), ny = space.ny();
  const int px = space.degree_x(), py = space.degree_y();
  const int n = nx * ny * n_comp;
  SparsityPattern pat;
  pat.n_local = space.n_local() * n_comp;

  std::vector<int> outer(n + 1, 0);
  std::vector<int> inner;
  inner.reserve(static_cast<std::size_t>(n) * (2 * px + 1) * (2 * py + 1) * n_comp);
  for (int jy = 0; jy < ny; ++jy) {
    for (int jx = 0; jx < nx; ++jx) {
      for (int d = 0; d < n_comp; ++d) {
        const int col = n_comp * (jx + nx * jy) + d;
        outer[col] = static_cast<int>(inner.size());
        for (int iy = std::max(0, jy - py); iy <= std::min(ny - 1, jy + py); ++iy) {
          for (int ix = std::max(0, jx - px); ix <= std::min(nx - 1, jx + px); ++ix) {
            for (int c = 0; c < n_comp; ++c) inner.push_back(n_comp * (ix + nx * iy) + c);
          }
        }
      }
    }
  }
  outer[n] = static_cast<int>(inner.size());

  SparseMatrix m(n, n);
  m.resizeNonZeros(static_cast<Eigen::Index>(inner.size()));
  std::copy(outer.begin(), outer.end(), m.outerIndexPtr());
  std::copy(inner.begin(), inner.end(), m.innerIndexPtr());
  std::fill(m.valuePtr(), m.valuePtr() + inner.size(), 0.0);
  pat.matrix = std::move(m);

  const int nl = pat.n_local;
  const int n_el = space.n_elements();
  pat.position.resize(static_cast<std::size_t>(n_el) * nl * nl);
  std::vector<int> cps(space.n_local());
  std::vector<int> dofs(nl);
  for (int e = 0; e < n_el; ++e) {
    space.element_dofs(e, cps);
    for (int a = 0; a < space.n_local(); ++a) {
      for (int c = 0; c < n_comp; ++c) dofs[n_comp * a + c] = n_comp * cps[a] + c;
    }
    for (int j = 0; j < nl; ++j) {
      const int col = dofs[j];
      const int* begin = inner.data() + outer[col];
      const int* end = inner.data() + outer[col + 1];
      for (int i = 0; i < nl; ++i) {
        const int* it = std::lower_bound(begin, end, dofs[i]);
        pat.position[(static_cast<std::size_t>(e) * nl + j) * nl + i] = static_cast<int>(it - inner.data());
      }
    }
  }
  return pat;
}

template <class LocalFn>
void assemble_matrix(const Discretization& disc, const SparsityPattern& pat, SparseMatrix& out,
                     Exec exec, LocalFn&& local) {
  if (out.rows() != pat.matrix.rows() || out.nonZeros() != pat.matrix.nonZeros()) out = pat.matrix;
  double* values = out.valuePtr();
  std::fill(values, values + out.nonZeros(), 0.0);
  const int n_el = disc.n_elements();
  const int nl2 = pat.n_local * pat.n_local;
  const int* pos = pat.position.data();

  if (exec == Exec::Serial) {
    std::vector<double> ke(nl2);
    for (int e = 0; e < n_el; ++e) {
      local(e, ke.data());
      const int* p = pos + static_cast<std::size_t>(e) * nl2;
      for (int k = 0; k < nl2; ++k) values[p[k]] += ke[k];
    }
    return;
  }

  std::vector<double> buf(static_cast<std::size_t>(kBlock) * nl2);
  for (int e0 = 0; e0 < n_el; e0 += kBlock) {
    const int e1 = std::min(n_el, e0 + kBlock);
#pragma omp parallel for schedule(static)
    for (int e = e0; e < e1; ++e) local(e, buf.data() + static_cast<std::size_t>(e - e0) * nl2);
    for (int e = e0; e < e1; ++e) {
      const double* ke = buf.data() + static_cast<std::size_t>(e - e0) * nl2;
      const int* p = pos + static_cast<std::size_t>(e) * nl2;
      for (int k = 0; k < nl2; ++k) values[p[k]] += ke[k];
    }
  }
}

void check_qp_span(const Discretization& disc, std::span<const double> f, const char* what) {
  if (!f.empty() && static_cast<int>(f.size()) != disc.n_qp()) {
    throw DomainError(std::string(what) + ": quadrature field has wrong size");
  }
}

}  // namespace

Discretization::Discretization(SplineSpace2D space, int points_per_dir)
    : space_(std::move(space)), nq_(points_per_dir) {
  const int px = space_.degree_x(), py = space_.degree_y();
  if (space_.n_local() > kMaxLocal) throw DomainError("Discretization: degree too high");
  if (nq_ <= 0) nq_ = std::max(px, py) + 1;
  const GaussLegendre gl(nq_);

  auto build = [&](const KnotVector& kv, double jac, std::vector<double>& tab, std::vector<double>& w,
                   std::vector<double>& pts, bool is_x) {
    const int p = kv.degree();
    const int ne = kv.n_elements();
    tab.assign(static_cast<std::size_t>(ne) * nq_ * 3 * (p + 1), 0.0);
    w.assign(static_cast<std::size_t>(ne) * nq_, 0.0);
    pts.assign(w.size(), 0.0);
    std::vector<double> ders(3 * (p + 1));
    for (int el = 0; el < ne; ++el) {
      const int span = kv.element_spans()[el];
      const double a = kv.knots()[span], b = kv.knots()[span + 1];
      for (int q = 0; q < nq_; ++q) {
        const double t = 0.5 * (a + b) + 0.5 * (b - a) * gl.points[q];
        kv.eval_ders(span, t, 2, ders);
        double* row = tab.data() + (static_cast<std::size_t>(el) * nq_ + q) * 3 * (p + 1);
        for (int j = 0; j <= p; ++j) {
          row[j] = ders[j];
          row[(p + 1) + j] = ders[(p + 1) + j] / jac;
          row[2 * (p + 1) + j] = ders[2 * (p + 1) + j] / (jac * jac);
        }
        w[el * nq_ + q] = 0.5 * (b - a) * gl.weights[q] * jac;
        pts[el * nq_ + q] = is_x ? space_.to_x(t) : space_.to_y(t);
      }
    }
  };
  build(space_.kx(), space_.jac_x(), tab_x_, w_x_, p_x_, true);
  build(space_.ky(), space_.jac_y(), tab_y_, w_y_, p_y_, false);
  scalar_ = build_pattern(space_, 1);
  vector_ = build_pattern(space_, 2);
}

double Discretization::weight(int e, int q) const {
  const int ex = e % space_.nex(), ey = e / space_.nex();
  return w_x_[ex * nq_ + q % nq_] * w_y_[ey * nq_ + q / nq_];
}

std::array<double, 2> Discretization::point(int e, int q) const {
  const int ex = e % space_.nex(), ey = e / space_.nex();
  return {p_x_[ex * nq_ + q % nq_], p_y_[ey * nq_ + q / nq_]};
}

void Discretization::basis(int e, int q, LocalBasis& out) const {
  const int px = space_.degree_x(), py = space_.degree_y();
  const int ex = e % space_.nex(), ey = e / space_.nex();
  const double* tx = tab_x_.data() + (static_cast<std::size_t>(ex) * nq_ + q % nq_) * 3 * (px + 1);
  const double* ty = tab_y_.data() + (static_cast<std::size_t>(ey) * nq_ + q / nq_) * 3 * (py + 1);
  out.n = (px + 1) * (py + 1);
  for (int b = 0; b <= py; ++b) {
    const double y0 = ty[b], y1 = ty[(py + 1) + b], y2 = ty[2 * (py + 1) + b];
    for (int a = 0; a <= px; ++a) {
      const double x0 = tx[a], x1 = tx[(px + 1) + a], x2 = tx[2 * (px + 1) + a];
      const int l = a + (px + 1) * b;
      out.N[l] = x0 * y0;
      out.dx[l] = x1 * y0;
      out.dy[l] = x0 * y1;
      out.dxx[l] = x2 * y0;
      out.dyy[l] = x0 * y2;
      out.dxy[l] = x1 * y1;
    }
  }
}

double Discretization::measure() const {
  double s = 0.0;
  for (int e = 0; e < n_elements(); ++e) {
    double se = 0.0;
    for (int q = 0; q < n_qp_per_element(); ++q) se += weight(e, q);
    s += se;
  }
  return s;
}

void assemble_scalar(const Discretization& disc, const ScalarKernel& k, SparseMatrix& out, Exec exec) {
  check_qp_span(disc, k.mass, "assemble_scalar(mass)");
  check_qp_span(disc, k.grad, "assemble_scalar(grad)");
  check_qp_span(disc, k.bilap, "assemble_scalar(bilap)");
  const int nl = disc.n_local();
  const int nqe = disc.n_qp_per_element();
  assemble_matrix(disc, disc.scalar_pattern(), out, exec, [&](int e, double* ke) {
    std::fill(ke, ke + nl * nl, 0.0);
    LocalBasis B;
    std::array<double, kMaxLocal> lap{};
    for (int q = 0; q < nqe; ++q) {
      disc.basis(e, q, B);
      const int g = e * nqe + q;
      const double w = disc.weight(e, q);
      const double cm = k.mass.empty() ? 0.0 : w * k.mass[g];
      const double cg = k.grad.empty() ? 0.0 : w * k.grad[g];
      const double cb = k.bilap.empty() ? 0.0 : w * k.bilap[g];
      for (int a = 0; a < nl; ++a) lap[a] = B.lap(a);
      for (int j = 0; j < nl; ++j) {
        double* col = ke + j * nl;
        const double mj = cm * B.N[j], gxj = cg * B.dx[j], gyj = cg * B.dy[j], bj = cb * lap[j];
        for (int i = 0; i < nl; ++i) {
          col[i] += mj * B.N[i] + gxj * B.dx[i] + gyj * B.dy[i] + bj * lap[i];
        }
      }
    }
  });
}

void assemble_elasticity(const Discretization& disc, const ElasticKernel& k, SparseMatrix& out, Exec exec) {
  if (static_cast<int>(k.mu.size()) != disc.n_qp() || static_cast<int>(k.kappa.size()) != disc.n_qp()) {
    throw DomainError("assemble_elasticity: moduli must be given at every quadrature point");
  }
  const int n = disc.n_local();
  const int nl = 2 * n;
  const int nqe = disc.n_qp_per_element();
  assemble_matrix(disc, disc.vector_pattern(), out, exec, [&](int e, double* ke) {
    std::fill(ke, ke + nl * nl, 0.0);
    LocalBasis B;
    for (int q = 0; q < nqe; ++q) {
      disc.basis(e, q, B);
      const int g = e * nqe + q;
      const double w = disc.weight(e, q);
      const double mu = k.mu[g], ka = k.kappa[g];
      const double d11 = w * (ka + mu), d12 = w * (ka - mu), d33 = w * mu;
      for (int b = 0; b < n; ++b) {
        const double bx = B.dx[b], by = B.dy[b];
        // Columns (b, x) and (b, y); stress-like rows D * B_b.
        const double sx_xx = d11 * bx, sx_yy = d12 * bx, sx_xy = d33 * by;
        const double sy_xx = d12 * by, sy_yy = d11 * by, sy_xy = d33 * bx;
        double* cx = ke + (2 * b) * nl;
        double* cy = ke + (2 * b + 1) * nl;
        for (int a = 0; a < n; ++a) {
          const double ax = B.dx[a], ay = B.dy[a];
          cx[2 * a] += ax * sx_xx + ay * sx_xy;
          cx[2 * a + 1] += ay * sx_yy + ax * sx_xy;
          cy[2 * a] += ax * sy_xx + ay * sy_xy;
          cy[2 * a + 1] += ay * sy_yy + ax * sy_xy;
        }
      }
    }
  });
}

void assemble_load(const Discretization& disc, std::span<const double> f, Vector& out, Exec exec) {
  check_qp_span(disc, f, "assemble_load");
  const int n_el = disc.n_elements();
  const int nl = disc.n_local();
  const int nqe = disc.n_qp_per_element();
  out.setZero(disc.space().n_dofs());
  if (f.empty()) return;
  auto local = [&](int e, double* fe) {
    std::fill(fe, fe + nl, 0.0);
    LocalBasis B;
    for (int q = 0; q < nqe; ++q) {
      disc.basis(e, q, B);
      const double c = disc.weight(e, q) * f[e * nqe + q];
      for (int a = 0; a < nl; ++a) fe[a] += c * B.N[a];
    }
  };
  std::vector<int> dofs(nl);
  if (exec == Exec::Serial) {
    std::vector<double> fe(nl);
    for (int e = 0; e < n_el; ++e) {
      local(e, fe.data());
      disc.element_dofs(e, dofs);
      for (int a = 0; a < nl; ++a) out[dofs[a]] += fe[a];
    }
    return;
  }
  std::vector<double> buf(static_cast<std::size_t>(kBlock) * nl);
  for (int e0 = 0; e0 < n_el; e0 += kBlock) {
    const int e1 = std::min(n_el, e0 + kBlock);
#pragma omp parallel for schedule(static)
    for (int e = e0; e < e1; ++e) local(e, buf.data() + static_cast<std::size_t>(e - e0) * nl);
    for (int e = e0; e < e1; ++e) {
      disc.element_dofs(e, dofs);
      const double* fe = buf.data() + static_cast<std::size_t>(e - e0) * nl;
      for (int a = 0; a < nl; ++a) out[dofs[a]] += fe[a];
    }
  }
}

SparseMatrix mass_matrix(const Discretization& disc) {
  std::vector<double> one(disc.n_qp(), 1.0);
  SparseMatrix m;
  assemble_scalar(disc, {one, {}, {}}, m);
  return m;
}

SparseMatrix stiffness_matrix(const Discretization& disc) {
  std::vector<double> one(disc.n_qp(), 1.0);
  SparseMatrix m;
  assemble_scalar(disc, {{}, one, {}}, m);
  return m;
}

SparseMatrix bilaplacian_matrix(const Discretization& disc) {
  std::vector<double> one(disc.n_qp(), 1.0);
  SparseMatrix m;
  assemble_scalar(disc, {{}, {}, one}, m);
  return m;
}

void eval_scalar(const Discretization& disc, std::span<const double> c, ScalarAtQp& out, Exec exec) {
  if (static_cast<int>(c.size()) != disc.space().n_dofs()) throw DomainError("eval_scalar: size mismatch");
  const int n_el = disc.n_elements();
  const int nl = disc.n_local();
  const int nqe = disc.n_qp_per_element();
  out.value.resize(disc.n_qp());
  out.gx.resize(disc.n_qp());
  out.gy.resize(disc.n_qp());
  out.lap.resize(disc.n_qp());
  auto body = [&](int e) {
    LocalBasis B;
    std::array<int, kMaxLocal> dofs{};
    disc.element_dofs(e, std::span<int>(dofs.data(), nl));
    for (int q = 0; q < nqe; ++q) {
      disc.basis(e, q, B);
      double v = 0.0, gx = 0.0, gy = 0.0, lp = 0.0;
      for (int a = 0; a < nl; ++a) {
        const double ca = c[dofs[a]];
        v += ca * B.N[a];
        gx += ca * B.dx[a];
        gy += ca * B.dy[a];
        lp += ca * B.lap(a);
      }
      const int g = e * nqe + q;
      out.value[g] = v;
      out.gx[g] = gx;
      out.gy[g] = gy;
      out.lap[g] = lp;
    }
  };
  if (exec == Exec::Serial) {
    for (int e = 0; e < n_el; ++e) body(e);
  } else {
#pragma omp parallel for schedule(static)
    for (int e = 0; e < n_el; ++e) body(e);
  }
}

void eval_strain(const Discretization& disc, std::span<const double> u, StrainAtQp& out, Exec exec) {
  if (static_cast<int>(u.size()) != 2 * disc.space().n_dofs()) throw DomainError("eval_strain: size mismatch");
  const int n_el = disc.n_elements();
  const int nl = disc.n_local();
  const int nqe = disc.n_qp_per_element();
  out.xx.resize(disc.n_qp());
  out.yy.resize(disc.n_qp());
  out.xy.resize(disc.n_qp());
  auto body = [&](int e) {
    LocalBasis B;
    std::array<int, kMaxLocal> dofs{};
    disc.element_dofs(e, std::span<int>(dofs.data(), nl));
    for (int q = 0; q < nqe; ++q) {
      disc.basis(e, q, B);
      double uxx = 0.0, uxy = 0.0, uyx = 0.0, uyy = 0.0;
      for (int a = 0; a < nl; ++a) {
        const double ux = u[2 * dofs[a]], uy = u[2 * dofs[a] + 1];
        uxx += ux * B.dx[a];
        uxy += ux * B.dy[a];
        uyx += uy * B.dx[a];
        uyy += uy * B.dy[a];
      }
      const int g = e * nqe + q;
      out.xx[g] = uxx;
      out.yy[g] = uyy;
      out.xy[g] = 0.5 * (uxy + uyx);
    }
  };
  if (exec == Exec::Serial) {
    for (int e = 0; e < n_el; ++e) body(e);
  } else {
#pragma omp parallel for schedule(static)
    for (int e = 0; e < n_el; ++e) body(e);
  }
}

double integrate(const Discretization& disc, std::span<const double> f, Exec exec) {
  if (static_cast<int>(f.size()) != disc.n_qp()) throw DomainError("integrate: size mismatch");
  const int n_el = disc.n_elements();
  const int nqe = disc.n_qp_per_element();
  auto element_sum = [&](int e) {
    double s = 0.0;
    for (int q = 0; q < nqe; ++q) s += disc.weight(e, q) * f[e * nqe + q];
    return s;
  };
  if (exec == Exec::Serial) {
    double total = 0.0;
    for (int e = 0; e < n_el; ++e) total += element_sum(e);
    return total;
  }
  std::vector<double> partial(n_el);
#pragma omp parallel for schedule(static)
  for (int e = 0; e < n_el; ++e) partial[e] = element_sum(e);
  double total = 0.0;
  for (int e = 0; e < n_el; ++e) total += partial[e];
  return total;
}

}  // namespace pfiga
