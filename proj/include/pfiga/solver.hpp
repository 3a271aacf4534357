// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The pfiga Authors

/// @file solver.hpp
/// Staggered quasi-static evolution: displacement solves with frozen
/// tension/compression signs, PSOR for the phase field under the
/// irreversibility bound, alternated until the phase field settles.

#ifndef PFIGA_SOLVER_HPP
#define PFIGA_SOLVER_HPP

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "pfiga/assembly.hpp"
#include "pfiga/mechanics.hpp"
#include "pfiga/psor.hpp"

namespace pfiga {

enum class LinearSolverKind { Direct, ConjugateGradient };

struct SolverConfig {
  double stag_tol = 1e-4;      // sup-norm of the phase-field update
  int stag_max_iters = 500;
  double psor_omega = 1.5;
  double psor_tol = 1e-8;
  int psor_max_sweeps = 20000;
  int picard_max = 2;
  LinearSolverKind linear = LinearSolverKind::Direct;
  double linear_tol = 1e-10;   // relative residual for the iterative path

  void validate() const;
  PsorOptions psor() const { return {psor_omega, psor_tol, psor_max_sweeps, 1}; }
  bool operator==(const SolverConfig&) const = default;
};

/// Strong Dirichlet data on displacement dofs (dof = 2 * control point + component).
/// The imposed value at load factor t is t * values[k].
struct DirichletBC {
  std::vector<int> dofs;
  std::vector<double> values;
  /// Reaction reported for a step: sum_k weights[k] * (K u)_{reaction_dofs[k]}.
  std::vector<int> reaction_dofs;
  std::vector<double> reaction_weights;

  void add(int dof, double value);
  /// Sorts by dof and rejects duplicates with conflicting values.
  void finalize();
};

struct State {
  Vector u;
  Vector v;
  Vector v_lower;
  int step = 0;
  double t = 0.0;
};

struct Energies {
  double elastic = 0.0;
  double surface = 0.0;
  double dissipated = 0.0;
  double total() const { return elastic + dissipated; }
};

struct DisplacementResult {
  int picard_iters = 0;
  bool signs_settled = false;
  double reaction = 0.0;
  std::vector<double> energy_history;  // total energy after each linear solve
};

struct StepDiagnostics {
  int stag_iters = 0;
  int psor_sweeps = 0;
  double reaction = 0.0;
  double max_v = 0.0;
  Energies energies;
  std::vector<double> energy_history;  // total energy after every sub-solve
};

class PhaseFieldSolver {
 public:
  /// gc_field, when nonempty, gives the toughness at every quadrature point.
  PhaseFieldSolver(std::shared_ptr<const Discretization> disc, Material mat, ModelParams model, DirichletBC bc,
                   SolverConfig cfg, std::vector<double> gc_field = {});
  ~PhaseFieldSolver();
  PhaseFieldSolver(const PhaseFieldSolver&) = delete;
  PhaseFieldSolver& operator=(const PhaseFieldSolver&) = delete;

  const Discretization& disc() const { return *disc_; }
  const Material& material() const { return mat_; }
  const ModelParams& model() const { return model_; }
  const SolverConfig& config() const { return cfg_; }
  const DirichletBC& bc() const { return bc_; }

  State initial_state() const;

  /// Minimizes the elastic energy in u at fixed v with the Dirichlet data at load t.
  DisplacementResult displacement_solve(State& s, double t);

  /// Minimizes the energy in v at fixed u subject to max(v_lower, 0) <= v <= 1.
  PsorResult phase_solve(State& s);

  /// One load step: alternate until the phase-field update drops below stag_tol,
  /// finish with a displacement solve and raise v_lower to the converged v.
  /// With allow_damage = false only the elastic problem is solved.
  StepDiagnostics staggered_step(State& s, double t, bool allow_damage = true);

  Energies energies(const State& s) const;

  /// Hessian A and right-hand side b of the quadratic phase-field energy at fixed u.
  void phase_system(const State& s, SparseMatrix& A, Vector& b) const;

  /// Weighted sum of (K u) over the reaction dofs with the current frozen moduli.
  double reaction(const State& s) const;
  /// Max |(K u)_i| over free displacement dofs with the current frozen moduli.
  double equilibrium_residual(const State& s) const;

 private:
  void assemble_elastic(const State& s);
  void set_signs_from(const State& s);
  void solve_free(const Vector& rhs, Vector& x);
  void check_rigid_modes() const;
  double gc_at(int g) const { return gc_field_.empty() ? mat_.Gc : gc_field_[g]; }

  std::shared_ptr<const Discretization> disc_;
  Material mat_;
  ModelParams model_;
  DirichletBC bc_;
  SolverConfig cfg_;
  std::vector<double> gc_field_;

  std::vector<char> tensile_;      // frozen sign per quadrature point
  SparseMatrix K_;                 // full elastic matrix
  std::vector<int> free_of_;       // dof -> reduced index, -1 if constrained
  std::vector<int> free_dofs_;
  SparseMatrix Kff_;
  std::vector<int> kff_src_;       // Kff value k comes from K value kff_src_[k]
  struct DirectFactor;
  std::unique_ptr<DirectFactor> direct_;
};

/// Frozen-sign moduli at one quadrature point.
inline void frozen_moduli(double psi, bool tensile, const Material& m, double& mu, double& kappa) {
  mu = psi * m.mu;
  kappa = tensile ? psi * m.kappa : m.kappa;
}

}  // namespace pfiga

#endif  // PFIGA_SOLVER_HPP
