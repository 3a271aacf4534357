// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The pfiga Authors

#include "pfiga/solver.hpp"

#include <Eigen/Dense>
#include <Eigen/IterativeLinearSolvers>
#ifdef PFIGA_HAVE_CHOLMOD
#include <Eigen/CholmodSupport>
#else
#include <Eigen/SparseCholesky>
#endif
#include <algorithm>
#include <cmath>
#include <numeric>

#include "pfiga/error.hpp"

namespace pfiga {

struct PhaseFieldSolver::DirectFactor {
#ifdef PFIGA_HAVE_CHOLMOD
  Eigen::CholmodSupernodalLLT<SparseMatrix, Eigen::Lower> llt;
#else
  Eigen::SimplicialLLT<SparseMatrix, Eigen::Lower, Eigen::AMDOrdering<int>> llt;
#endif
};

PhaseFieldSolver::~PhaseFieldSolver() = default;

void SolverConfig::validate() const {
  if (!(stag_tol > 0.0)) throw ConfigError("solver: stag_tol must be positive");
  if (stag_max_iters < 1) throw ConfigError("solver: stag_max_iters must be at least 1");
  if (!(psor_omega > 0.0 && psor_omega < 2.0)) throw ConfigError("solver: psor_omega must lie in (0, 2)");
  if (!(psor_tol > 0.0)) throw ConfigError("solver: psor_tol must be positive");
  if (psor_max_sweeps < 1) throw ConfigError("solver: psor_max_sweeps must be at least 1");
  if (picard_max < 1) throw ConfigError("solver: picard_max must be at least 1");
  if (!(linear_tol > 0.0)) throw ConfigError("solver: linear_tol must be positive");
}

void DirichletBC::add(int dof, double value) {
  dofs.push_back(dof);
  values.push_back(value);
}

void DirichletBC::finalize() {
  std::vector<int> order(dofs.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return dofs[a] < dofs[b]; });
  std::vector<int> d;
  std::vector<double> v;
  for (int k : order) {
    if (!d.empty() && d.back() == dofs[k]) {
      if (v.back() != values[k]) throw ConfigError("conflicting Dirichlet values on dof " + std::to_string(dofs[k]));
      continue;
    }
    d.push_back(dofs[k]);
    v.push_back(values[k]);
  }
  dofs = std::move(d);
  values = std::move(v);
  if (reaction_weights.size() != reaction_dofs.size()) reaction_weights.assign(reaction_dofs.size(), 1.0);
}

PhaseFieldSolver::PhaseFieldSolver(std::shared_ptr<const Discretization> disc, Material mat, ModelParams model,
                                   DirichletBC bc, SolverConfig cfg, std::vector<double> gc_field)
    : disc_(std::move(disc)),
      mat_(mat),
      model_(model),
      bc_(std::move(bc)),
      cfg_(cfg),
      gc_field_(std::move(gc_field)) {
  mat_.validate();
  model_.validate();
  cfg_.validate();
  bc_.finalize();
  const int n = 2 * disc_->space().n_dofs();
  if (!gc_field_.empty() && static_cast<int>(gc_field_.size()) != disc_->n_qp())
    throw DomainError("PhaseFieldSolver: gc_field size does not match the quadrature");
  for (int d : bc_.dofs)
    if (d < 0 || d >= n) throw DomainError("PhaseFieldSolver: Dirichlet dof out of range");
  for (int d : bc_.reaction_dofs)
    if (d < 0 || d >= n) throw DomainError("PhaseFieldSolver: reaction dof out of range");
  check_rigid_modes();

  free_of_.assign(n, 0);
  for (int d : bc_.dofs) free_of_[d] = -1;
  for (int i = 0; i < n; ++i) {
    if (free_of_[i] == 0) {
      free_of_[i] = static_cast<int>(free_dofs_.size());
      free_dofs_.push_back(i);
    }
  }

  // Reduced pattern: columns and rows restricted to free dofs.
  const SparseMatrix& full = disc_->vector_pattern().matrix;
  const int nf = static_cast<int>(free_dofs_.size());
  std::vector<int> outer(nf + 1, 0), inner;
  for (int jr = 0; jr < nf; ++jr) {
    const int j = free_dofs_[jr];
    outer[jr] = static_cast<int>(inner.size());
    for (int k = full.outerIndexPtr()[j]; k < full.outerIndexPtr()[j + 1]; ++k) {
      const int ir = free_of_[full.innerIndexPtr()[k]];
      if (ir >= 0) {
        inner.push_back(ir);
        kff_src_.push_back(k);
      }
    }
  }
  outer[nf] = static_cast<int>(inner.size());
  Kff_.resize(nf, nf);
  Kff_.resizeNonZeros(static_cast<Eigen::Index>(inner.size()));
  std::copy(outer.begin(), outer.end(), Kff_.outerIndexPtr());
  std::copy(inner.begin(), inner.end(), Kff_.innerIndexPtr());
  std::fill(Kff_.valuePtr(), Kff_.valuePtr() + inner.size(), 0.0);

  tensile_.assign(disc_->n_qp(), 1);
}

void PhaseFieldSolver::check_rigid_modes() const {
  // Rigid motions are reproduced exactly by control values at the Greville abscissae.
  const SplineSpace2D& sp = disc_->space();
  const std::vector<double> gx = sp.kx().greville(), gy = sp.ky().greville();
  Eigen::Matrix3d G = Eigen::Matrix3d::Zero();
  for (int d : bc_.dofs) {
    const int cp = d / 2, comp = d % 2;
    const double x = sp.to_x(gx[cp % sp.nx()]), y = sp.to_y(gy[cp / sp.nx()]);
    Eigen::Vector3d m;
    m << (comp == 0 ? 1.0 : 0.0), (comp == 1 ? 1.0 : 0.0), (comp == 0 ? -y : x);
    G += m * m.transpose();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(G);
  const double scale = std::max(1.0, G.trace());
  if (es.eigenvalues()(0) <= 1e-12 * scale) {
    const Eigen::Vector3d z = es.eigenvectors().col(0);
    int k = 0;
    z.cwiseAbs().maxCoeff(&k);
    static const char* names[] = {"x-translation", "y-translation", "rotation"};
    throw SingularSystemError(std::string("Dirichlet data leave the ") + names[k] + " rigid mode unconstrained");
  }
}

State PhaseFieldSolver::initial_state() const {
  State s;
  s.u = Vector::Zero(2 * disc_->space().n_dofs());
  s.v = Vector::Zero(disc_->space().n_dofs());
  s.v_lower = Vector::Zero(disc_->space().n_dofs());
  return s;
}

void PhaseFieldSolver::set_signs_from(const State& s) {
  StrainAtQp st;
  eval_strain(*disc_, {s.u.data(), static_cast<std::size_t>(s.u.size())}, st);
  for (int g = 0; g < disc_->n_qp(); ++g) tensile_[g] = is_tensile(st.xx[g] + st.yy[g]) ? 1 : 0;
}

void PhaseFieldSolver::assemble_elastic(const State& s) {
  ScalarAtQp vq;
  eval_scalar(*disc_, {s.v.data(), static_cast<std::size_t>(s.v.size())}, vq);
  const int nq = disc_->n_qp();
  std::vector<double> mu(nq), kappa(nq);
  for (int g = 0; g < nq; ++g) frozen_moduli(degradation(vq.value[g], model_.eta), tensile_[g], mat_, mu[g], kappa[g]);
  assemble_elasticity(*disc_, {mu, kappa}, K_);
  double* dst = Kff_.valuePtr();
  const double* src = K_.valuePtr();
  for (std::size_t k = 0; k < kff_src_.size(); ++k) dst[k] = src[kff_src_[k]];
}

void PhaseFieldSolver::solve_free(const Vector& rhs, Vector& x) {
  if (cfg_.linear == LinearSolverKind::Direct) {
    if (!direct_) {
      direct_ = std::make_unique<DirectFactor>();
      direct_->llt.analyzePattern(Kff_);
    }
    direct_->llt.factorize(Kff_);
    if (direct_->llt.info() != Eigen::Success)
      throw SingularSystemError("displacement system is not positive definite");
    x = direct_->llt.solve(rhs);
    return;
  }
  Eigen::ConjugateGradient<SparseMatrix, Eigen::Lower | Eigen::Upper> cg;
  cg.setTolerance(cfg_.linear_tol);
  cg.setMaxIterations(std::max<Eigen::Index>(1000, 10 * Kff_.rows()));
  cg.compute(Kff_);
  x = cg.solveWithGuess(rhs, x);
  if (cg.info() != Eigen::Success)
    throw ConvergenceError("conjugate gradient did not converge", static_cast<double>(cg.iterations()), cg.error());
}

DisplacementResult PhaseFieldSolver::displacement_solve(State& s, double t) {
  for (std::size_t k = 0; k < bc_.dofs.size(); ++k) s.u[bc_.dofs[k]] = t * bc_.values[k];
  s.t = t;
  DisplacementResult res;
  set_signs_from(s);
  const int nf = static_cast<int>(free_dofs_.size());
  for (int it = 1; it <= cfg_.picard_max; ++it) {
    assemble_elastic(s);
    // rhs_f = -K_fc u_c
    Vector rhs = Vector::Zero(nf);
    for (int d : bc_.dofs) {
      const double uc = s.u[d];
      if (uc == 0.0) continue;
      for (SparseMatrix::InnerIterator c(K_, d); c; ++c) {
        const int ir = free_of_[c.row()];
        if (ir >= 0) rhs[ir] -= c.value() * uc;
      }
    }
    Vector xf(nf);
    for (int ir = 0; ir < nf; ++ir) xf[ir] = s.u[free_dofs_[ir]];
    solve_free(rhs, xf);
    for (int ir = 0; ir < nf; ++ir) s.u[free_dofs_[ir]] = xf[ir];
    if (!xf.allFinite()) throw ConvergenceError("displacement solve produced non-finite values", t, NAN);
    res.picard_iters = it;
    res.energy_history.push_back(energies(s).total());

    const std::vector<char> old = tensile_;
    set_signs_from(s);
    if (old == tensile_) {
      res.signs_settled = true;
      break;
    }
  }
  res.reaction = reaction(s);
  return res;
}

void PhaseFieldSolver::phase_system(const State& s, SparseMatrix& A, Vector& b) const {
  StrainAtQp st;
  eval_strain(*disc_, {s.u.data(), static_cast<std::size_t>(s.u.size())}, st);
  const SurfaceCoefficients c = model_.surface();
  const int nq = disc_->n_qp();
  std::vector<double> mass(nq), grad(nq), bilap(nq), f(nq);
  for (int g = 0; g < nq; ++g) {
    const double wp = tensile_energy({st.xx[g], st.yy[g], st.xy[g]}, mat_);
    const double gc = gc_at(g);
    mass[g] = 2.0 * (wp + gc * c.quad);
    grad[g] = 2.0 * gc * c.grad;
    bilap[g] = 2.0 * gc * c.bilap;
    f[g] = 2.0 * wp - gc * c.lin;
  }
  ScalarKernel k{mass, grad, {}};
  if (c.bilap != 0.0) k.bilap = bilap;
  assemble_scalar(*disc_, k, A);
  assemble_load(*disc_, f, b);
}

PsorResult PhaseFieldSolver::phase_solve(State& s) {
  SparseMatrix A;
  Vector b;
  phase_system(s, A, b);
  const int n = static_cast<int>(s.v.size());
  Vector lo = s.v_lower.cwiseMax(0.0);
  Vector hi = Vector::Ones(n);
  std::span<const double> bs{b.data(), static_cast<std::size_t>(n)};
  std::span<const double> ls{lo.data(), static_cast<std::size_t>(n)};
  std::span<const double> hs{hi.data(), static_cast<std::size_t>(n)};
  std::span<double> xs{s.v.data(), static_cast<std::size_t>(n)};
  return psor_solve(A, bs, ls, hs, xs, cfg_.psor());
}

StepDiagnostics PhaseFieldSolver::staggered_step(State& s, double t, bool allow_damage) {
  StepDiagnostics d;
  bool converged = !allow_damage;
  double dv = 0.0;
  for (int m = 1; m <= cfg_.stag_max_iters; ++m) {
    d.stag_iters = m;
    displacement_solve(s, t);
    d.energy_history.push_back(energies(s).total());
    if (!allow_damage) break;
    const Vector v_old = s.v;
    d.psor_sweeps += phase_solve(s).sweeps;
    d.energy_history.push_back(energies(s).total());
    dv = (s.v - v_old).cwiseAbs().maxCoeff();
    if (dv <= cfg_.stag_tol) {
      converged = true;
      break;
    }
  }
  if (!converged)
    throw ConvergenceError("staggered iteration did not converge at t = " + std::to_string(t), t, dv,
                           d.energy_history);
  if (allow_damage) {
    DisplacementResult r = displacement_solve(s, t);
    d.energy_history.push_back(r.energy_history.back());
    d.reaction = r.reaction;
  } else {
    d.reaction = reaction(s);
  }
  s.v_lower = s.v;
  d.energies = energies(s);
  d.max_v = s.v.maxCoeff();
  if (!std::isfinite(d.energies.total()) || !std::isfinite(d.reaction))
    throw ConvergenceError("non-finite energy or reaction at t = " + std::to_string(t), t, NAN, d.energy_history);
  return d;
}

Energies PhaseFieldSolver::energies(const State& s) const {
  StrainAtQp st;
  ScalarAtQp vq;
  eval_strain(*disc_, {s.u.data(), static_cast<std::size_t>(s.u.size())}, st);
  eval_scalar(*disc_, {s.v.data(), static_cast<std::size_t>(s.v.size())}, vq);
  const int nq = disc_->n_qp();
  std::vector<double> we(nq), sf(nq), df;
  if (!gc_field_.empty()) df.resize(nq);
  for (int g = 0; g < nq; ++g) {
    const double v = std::clamp(vq.value[g], 0.0, 1.0);
    we[g] = energy_density(v, {st.xx[g], st.yy[g], st.xy[g]}, mat_, model_.eta).total;
    sf[g] = surface_integrand(vq.value[g], vq.gx[g], vq.gy[g], vq.lap[g], model_);
    if (!df.empty()) df[g] = gc_field_[g] * sf[g];
  }
  Energies e;
  e.elastic = integrate(*disc_, we);
  e.surface = integrate(*disc_, sf);
  e.dissipated = df.empty() ? mat_.Gc * e.surface : integrate(*disc_, df);
  return e;
}

double PhaseFieldSolver::reaction(const State& s) const {
  double r = 0.0;
  if (K_.cols() == 0) return r;
  for (std::size_t k = 0; k < bc_.reaction_dofs.size(); ++k) {
    const int d = bc_.reaction_dofs[k];
    double ku = 0.0;
    for (SparseMatrix::InnerIterator c(K_, d); c; ++c) ku += c.value() * s.u[c.row()];
    r += bc_.reaction_weights[k] * ku;
  }
  return r;
}

double PhaseFieldSolver::equilibrium_residual(const State& s) const {
  double r = 0.0;
  if (K_.cols() == 0) return r;
  for (int d : free_dofs_) {
    double ku = 0.0;
    for (SparseMatrix::InnerIterator c(K_, d); c; ++c) ku += c.value() * s.u[c.row()];
    r = std::max(r, std::abs(ku));
  }
  return r;
}

}  // namespace pfiga
