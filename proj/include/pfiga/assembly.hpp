// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The pfiga Authors

/// @file assembly.hpp
/// Quadrature-point kernels over a SplineSpace2D: global matrix and vector
/// assembly, field evaluation and integration.
///
/// Every kernel has a serial reference path and an OpenMP path. The parallel
/// path computes element contributions into per-element buffers and merges
/// them in element order, so both paths produce bit-identical results for
/// any thread count.

#ifndef PFIGA_ASSEMBLY_HPP
#define PFIGA_ASSEMBLY_HPP

#include <Eigen/SparseCore>
#include <array>
#include <span>
#include <vector>

#include "pfiga/spline.hpp"

namespace pfiga {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;
using Vector = Eigen::VectorXd;

enum class Exec { Serial, Parallel };

inline constexpr int kMaxLocal = 25;  // degree <= 4 in each direction

/// Basis functions of one element at one quadrature point (physical derivatives).
struct LocalBasis {
  int n = 0;
  std::array<double, kMaxLocal> N{}, dx{}, dy{}, dxx{}, dyy{}, dxy{};
  double lap(int a) const { return dxx[a] + dyy[a]; }
};

/// Global layout of a symmetric sparse matrix plus, for every element, the
/// position of each local (row, col) pair in the value array.
struct SparsityPattern {
  SparseMatrix matrix;     // structure with zero values
  int n_local = 0;         // local dofs per element
  std::vector<int> position;  // [element][col_local][row_local]
};

/// Quadrature data and sparsity layouts for one space.
///
/// Quadrature points are indexed globally as e * n_qp_per_element() + q with
/// q = qx + nq * qy.
class Discretization {
 public:
  explicit Discretization(SplineSpace2D space, int points_per_dir = -1);

  const SplineSpace2D& space() const { return space_; }
  int points_per_dir() const { return nq_; }
  int n_qp_per_element() const { return nq_ * nq_; }
  int n_qp() const { return space_.n_elements() * n_qp_per_element(); }
  int n_elements() const { return space_.n_elements(); }
  int n_local() const { return space_.n_local(); }

  double weight(int e, int q) const;
  std::array<double, 2> point(int e, int q) const;
  void basis(int e, int q, LocalBasis& out) const;
  void element_dofs(int e, std::span<int> out) const { space_.element_dofs(e, out); }

  const SparsityPattern& scalar_pattern() const { return scalar_; }
  /// Two components per control point, interleaved: dof = 2 * cp + component.
  const SparsityPattern& vector_pattern() const { return vector_; }

  /// Total measure of the quadrature rule (sum of all weights).
  double measure() const;

 private:
  SplineSpace2D space_;
  int nq_;
  // Per element column/row: [span][q][k in 0..2][a], physical derivatives.
  std::vector<double> tab_x_, tab_y_;
  std::vector<double> w_x_, w_y_, p_x_, p_y_;
  SparsityPattern scalar_, vector_;
};

/// Coefficient fields at quadrature points for the scalar bilinear form
///   a(w, z) = int mass w z + grad grad(w).grad(z) + bilap lap(w) lap(z).
/// Empty spans contribute nothing.
struct ScalarKernel {
  std::span<const double> mass;
  std::span<const double> grad;
  std::span<const double> bilap;
};

/// Moduli per quadrature point for the frozen-sign elastic form
///   a(u, w) = int 2 mu eps_d(u):eps_d(w) + kappa tr(u) tr(w).
struct ElasticKernel {
  std::span<const double> mu;
  std::span<const double> kappa;
};

void assemble_scalar(const Discretization& disc, const ScalarKernel& kernel, SparseMatrix& out,
                     Exec exec = Exec::Parallel);
void assemble_elasticity(const Discretization& disc, const ElasticKernel& kernel, SparseMatrix& out,
                         Exec exec = Exec::Parallel);
/// out_i = int f N_i.
void assemble_load(const Discretization& disc, std::span<const double> f, Vector& out,
                   Exec exec = Exec::Parallel);

/// Convenience wrappers with constant coefficient 1.
SparseMatrix mass_matrix(const Discretization& disc);
SparseMatrix stiffness_matrix(const Discretization& disc);
SparseMatrix bilaplacian_matrix(const Discretization& disc);

/// Values of a scalar field at quadrature points.
struct ScalarAtQp {
  std::vector<double> value, gx, gy, lap;
};
void eval_scalar(const Discretization& disc, std::span<const double> coeffs, ScalarAtQp& out,
                 Exec exec = Exec::Parallel);

/// Small-strain components at quadrature points from interleaved displacement dofs.
struct StrainAtQp {
  std::vector<double> xx, yy, xy;
};
void eval_strain(const Discretization& disc, std::span<const double> u, StrainAtQp& out,
                 Exec exec = Exec::Parallel);

/// sum over quadrature points of weight * f, accumulated element by element.
double integrate(const Discretization& disc, std::span<const double> f, Exec exec = Exec::Parallel);

}  // namespace pfiga

#endif  // PFIGA_ASSEMBLY_HPP
