// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The pfiga Authors

#include "pfiga/bench.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "pfiga/error.hpp"
#include "pfiga/profile.hpp"

namespace pfiga::bench {

std::string to_string(Edge e) {
  switch (e) {
    case Edge::Left: return "left";
    case Edge::Right: return "right";
    case Edge::Bottom: return "bottom";
    case Edge::Top: return "top";
  }
  return "?";
}

double Segment::length() const { return std::hypot(x1 - x0, y1 - y0); }

double Segment::distance(double x, double y) const {
  const double dx = x1 - x0, dy = y1 - y0;
  const double l2 = dx * dx + dy * dy;
  double s = l2 > 0.0 ? ((x - x0) * dx + (y - y0) * dy) / l2 : 0.0;
  s = std::clamp(s, 0.0, 1.0);
  return std::hypot(x - (x0 + s * dx), y - (y0 + s * dy));
}

int Loading::n_steps() const {
  if (du <= 0.0) return 1;
  return static_cast<int>(std::lround((u_max - u_min) / du)) + 1;
}

double Loading::at(int k) const { return u_min + k * du; }

void Loading::validate() const {
  if (!(du > 0.0)) throw ConfigError("loading: du must be positive");
  if (!(u_max >= u_min)) throw ConfigError("loading: u_max must not be below u_min");
  const double steps = (u_max - u_min) / du;
  if (std::abs(steps - std::round(steps)) > 1e-6 * std::max(1.0, steps))
    throw ConfigError("loading: (u_max - u_min) / du is not an integer");
}

void BenchmarkSpec::validate() const {
  if (!(domain.width() > 0.0 && domain.height() > 0.0)) throw ConfigError("benchmark: degenerate domain");
  material.validate();
  loading.validate();
  if (!(eps > 0.0)) throw ConfigError("benchmark: eps must be positive");
  if (precrack) {
    const auto inside = [&](double x, double y) {
      return x >= domain.x0 && x <= domain.x1 && y >= domain.y0 && y <= domain.y1;
    };
    if (!inside(precrack->x0, precrack->y0) || !inside(precrack->x1, precrack->y1))
      throw ConfigError("benchmark: pre-crack leaves the domain");
  }
  if (driven_component != 0 && driven_component != 1) throw ConfigError("benchmark: bad driven component");
}

std::vector<std::string> catalog_names() { return {"pure_traction", "dcb", "sen_tension", "sen_shear"}; }

BenchmarkSpec catalog(const std::string& name) {
  BenchmarkSpec s;
  s.name = name;
  if (name == "pure_traction") {
    s.domain = {-10.0, 10.0, -0.5, 0.5};
    s.material = Material::plane_strain(100.0, 0.0, 0.01);
    s.eps = 0.125;
    s.loading = {0.0, 1e-4, 0.2, false};
    s.constraints = {{Edge::Left, 0, -1.0}, {Edge::Left, 1, 0.0}, {Edge::Right, 0, 1.0}, {Edge::Right, 1, 0.0}};
    s.driven_edge = Edge::Right;
    s.driven_component = 0;
    s.perturb = true;
    s.default_h = 0.0625;
    s.crack_axis = Axis::Y;
    s.cross_section = 1.0;
    return s;
  }
  s.domain = {0.0, 1.0, -0.5, 0.5};
  s.material = Material::plane_strain(210.0, 0.3, 2.7e-3);
  s.eps = 0.01;
  s.precrack = Segment{0.0, 0.0, 0.5, 0.0};
  s.crack_axis = Axis::X;
  s.cross_section = 1.0;
  if (name == "dcb") {
    s.loading = {0.0, 5e-4, 18e-3, false};
    s.constraints = {{Edge::Left, 0, 0.0}, {Edge::Left, 1, 1.0, true}};
    s.driven_edge = Edge::Left;
    s.driven_component = 1;
  } else if (name == "sen_tension") {
    s.loading = {0.0, 3e-4, 6e-3, false};
    s.constraints = {{Edge::Bottom, 0, 0.0}, {Edge::Bottom, 1, 0.0}, {Edge::Top, 0, 0.0}, {Edge::Top, 1, 1.0}};
    s.driven_edge = Edge::Top;
    s.driven_component = 1;
  } else if (name == "sen_shear") {
    s.loading = {6e-3, 3e-4, 12e-3, true};
    s.constraints = {{Edge::Bottom, 0, 0.0}, {Edge::Bottom, 1, 0.0}, {Edge::Top, 0, 1.0}, {Edge::Top, 1, 0.0},
                     {Edge::Left, 1, 0.0},   {Edge::Right, 1, 0.0}};
    s.driven_edge = Edge::Top;
    s.driven_component = 0;
  } else {
    throw ConfigError("unknown benchmark '" + name + "'");
  }
  return s;
}

SplineSpace2D build_space(const BenchmarkSpec& spec, const ModelParams& model, const MeshChoice& mesh) {
  const int given = (mesh.n != 0) + (mesh.h != 0.0) + (!mesh.knots_x.empty() || !mesh.knots_y.empty());
  if (given > 1) throw ConfigError("mesh: give exactly one of n, h or knot vectors");
  if (!mesh.knots_x.empty() || !mesh.knots_y.empty()) {
    if (mesh.knots_x.empty() || mesh.knots_y.empty()) throw ConfigError("mesh: both knot vectors are required");
    return SplineSpace2D(KnotVector(2, mesh.knots_x), KnotVector(2, mesh.knots_y), spec.domain);
  }
  if (mesh.h > 0.0) return make_mesh_h(spec.domain, mesh.h);
  if (mesh.h < 0.0) throw ConfigError("mesh: h must be positive");
  if (mesh.n == 0 && spec.default_h > 0.0) return make_mesh_h(spec.domain, spec.default_h);
  const int n = mesh.n != 0 ? mesh.n : spec.default_n;
  const double R = mesh.R_star > 0.0 ? mesh.R_star : model.support_radius();
  return make_mesh(spec.domain, {model.eps, R, n});
}

double mesh_size(const SplineSpace2D& space) {
  double h = 0.0;
  for (const KnotVector* kv : {&space.kx(), &space.ky()}) {
    const double J = kv == &space.kx() ? space.jac_x() : space.jac_y();
    const auto& k = kv->knots();
    for (int s : kv->element_spans()) h = std::max(h, (k[s + 1] - k[s]) * J);
  }
  return h;
}

namespace {

std::vector<int> edge_points(const SplineSpace2D& sp, Edge e) {
  std::vector<int> out;
  const int nx = sp.nx(), ny = sp.ny();
  switch (e) {
    case Edge::Left:
      for (int j = 0; j < ny; ++j) out.push_back(nx * j);
      break;
    case Edge::Right:
      for (int j = 0; j < ny; ++j) out.push_back(nx - 1 + nx * j);
      break;
    case Edge::Bottom:
      for (int i = 0; i < nx; ++i) out.push_back(i);
      break;
    case Edge::Top:
      for (int i = 0; i < nx; ++i) out.push_back(i + nx * (ny - 1));
      break;
  }
  return out;
}

double sign(double y) { return (y > 0.0) - (y < 0.0); }

}  // namespace

DirichletBC build_bc(const BenchmarkSpec& spec, const SplineSpace2D& space) {
  DirichletBC bc;
  const std::vector<double> gy = space.ky().greville();
  for (const EdgeConstraint& c : spec.constraints) {
    for (int cp : edge_points(space, c.edge)) {
      const double y = space.to_y(gy[cp / space.nx()]);
      const double value = c.sign_y ? c.value * sign(y) : c.value;
      bc.add(2 * cp + c.component, value);
      if (c.edge == spec.driven_edge && c.component == spec.driven_component && value != 0.0) {
        bc.reaction_dofs.push_back(2 * cp + c.component);
        bc.reaction_weights.push_back(value);
      }
    }
  }
  bc.finalize();
  return bc;
}

SeedProfile seed_profile(const ModelParams& model) {
  if (model.variant == Variant::AT1) {
    auto prof = std::make_shared<profile::OptimalProfile>(
        model.order == 4 ? profile::OptimalProfile::fourth_order(profile::calibrate(model.rho))
                         : profile::OptimalProfile::second_order());
    return {[prof](double x) { return (*prof)(x); }, prof->support(), model.order};
  }
  const double inf = std::numeric_limits<double>::infinity();
  if (model.order == 2) return {[](double x) { return std::exp(-std::abs(x)); }, inf, 2};
  return {[](double x) { return (1.0 + std::abs(x)) * std::exp(-std::abs(x)); }, inf, 4};
}

Vector seed_precrack_ipf(const Segment& crack, const SplineSpace2D& space, const SeedProfile& profile,
                         const ModelParams& model) {
  if (profile.order != model.order) throw DomainError("seed_precrack_ipf: profile order does not match the model");
  const int nx = space.nx(), ny = space.ny();
  std::vector<double> gx = space.kx().greville(), gy = space.ky().greville();
  for (double& x : gx) x = space.to_x(x);
  for (double& y : gy) y = space.to_y(y);

  Eigen::MatrixXd G(nx, ny);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) G(i, j) = profile.w(crack.distance(gx[i], gy[j]) / model.eps);

  const auto collocation = [](const KnotVector& kv) {
    const std::vector<double> b = greville_collocation(kv);
    const int n = kv.dim();
    return Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(b.data(), n, n)
        .eval();
  };
  const Eigen::MatrixXd Bx = collocation(space.kx()), By = collocation(space.ky());
  const Eigen::MatrixXd Cx = Eigen::PartialPivLU<Eigen::MatrixXd>(Bx).solve(G);
  const Eigen::MatrixXd C = Eigen::PartialPivLU<Eigen::MatrixXd>(By).solve(Cx.transpose()).transpose();

  const double cutoff = profile.support * model.eps;
  Vector v(nx * ny);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const double d = crack.distance(gx[i], gy[j]);
      v[i + nx * j] = d > cutoff ? 0.0 : std::clamp(C(i, j), 0.0, 1.0);
    }
  }
  return v;
}

std::vector<double> perturb_center(const BenchmarkSpec& spec, const Discretization& disc, double h, double relative) {
  const double xm = 0.5 * (spec.domain.x0 + spec.domain.x1);
  std::vector<double> gc(disc.n_qp(), spec.material.Gc);
  const int nqe = disc.n_qp_per_element();
  for (int e = 0; e < disc.n_elements(); ++e) {
    for (int q = 0; q < nqe; ++q) {
      if (std::abs(disc.point(e, q)[0] - xm) <= 0.5 * h) gc[e * nqe + q] = spec.material.Gc * (1.0 - relative);
    }
  }
  return gc;
}

Problem setup(const BenchmarkSpec& spec, const ModelParams& model, const MeshChoice& mesh, const SolverConfig& cfg) {
  spec.validate();
  Problem p;
  p.spec = spec;
  p.model = model;
  auto disc = std::make_shared<Discretization>(build_space(spec, model, mesh));
  p.disc = disc;
  p.h = mesh_size(disc->space());
  std::vector<double> gc;
  if (spec.perturb) gc = perturb_center(spec, *disc, p.h);
  p.solver = std::make_unique<PhaseFieldSolver>(disc, spec.material, model, build_bc(spec, disc->space()), cfg,
                                                std::move(gc));
  p.state = p.solver->initial_state();
  if (spec.precrack) {
    p.state.v = seed_precrack_ipf(*spec.precrack, disc->space(), seed_profile(model), model);
    p.state.v_lower = p.state.v;
  }
  return p;
}

std::vector<StepRecord> run_evolution(Problem& p, const RunOptions& opts) {
  const Loading& L = p.spec.loading;
  const int n = L.n_steps();
  std::vector<StepRecord> out;
  out.reserve(n);
  for (int k = 0; k < n; ++k) {
    const double u = L.at(k);
    StepDiagnostics d;
    try {
      d = p.solver->staggered_step(p.state, u, !(L.preload && k == 0));
    } catch (const ConvergenceError& e) {
      throw ConvergenceError("step " + std::to_string(k) + ": " + e.what(), k, e.residual(), e.history());
    } catch (const std::exception& e) {
      throw std::runtime_error("step " + std::to_string(k) + ": " + e.what());
    }
    p.state.step = k;
    StepRecord r;
    r.step = k;
    r.t = n > 1 ? static_cast<double>(k) / (n - 1) : 0.0;
    r.u_bc = u;
    r.reaction = d.reaction;
    r.E_elastic = d.energies.elastic;
    r.E_surface = d.energies.surface;
    r.D = d.energies.dissipated;
    r.max_v = d.max_v;
    r.stag_iters = d.stag_iters;
    out.push_back(r);
    if (opts.on_step) opts.on_step(r, p.state);
    if (opts.stop_at_max_v > 0.0 && r.max_v >= opts.stop_at_max_v) break;
  }
  return out;
}

double elastic_limit(const std::vector<StepRecord>& records, double cross_section, double v_onset) {
  for (std::size_t k = 0; k < records.size(); ++k) {
    if (records[k].max_v >= v_onset) {
      if (k == 0) throw DomainError("elastic_limit: damaged from the first step");
      return records[k - 1].reaction / cross_section;
    }
  }
  throw DomainError("elastic_limit: no crack onset detected");
}

std::vector<std::array<double, 2>> crack_ridge(const SplineSpace2D& space, std::span<const double> v, Axis axis,
                                               double threshold, int samples_per_element) {
  const Rectangle& r = space.rect();
  const int mx = samples_per_element * space.nex(), my = samples_per_element * space.ney();
  const auto X = [&](int i) { return i == mx ? r.x1 : r.x0 + r.width() * i / mx; };
  const auto Y = [&](int j) { return j == my ? r.y1 : r.y0 + r.height() * j / my; };
  std::vector<double> f(static_cast<std::size_t>(mx + 1) * (my + 1));
  for (int j = 0; j <= my; ++j)
    for (int i = 0; i <= mx; ++i) f[i + (mx + 1) * j] = space.evaluate(v, X(i), Y(j));

  const bool along_x = axis == Axis::X;
  const int n_cols = along_x ? mx : my, n_rows = along_x ? my : mx;
  const auto value = [&](int c, int r2) { return along_x ? f[c + (mx + 1) * r2] : f[r2 + (mx + 1) * c]; };
  std::vector<std::array<double, 2>> pts;
  for (int c = 0; c <= n_cols; ++c) {
    int best = 0;
    for (int k = 1; k <= n_rows; ++k)
      if (value(c, k) > value(c, best)) best = k;
    double peak = value(c, best), delta = 0.0;
    // A flat top (v clamped at 1) is located at its midpoint.
    int first = best, last = best;
    while (first > 0 && value(c, first - 1) >= peak - 1e-9) --first;
    while (last < n_rows && value(c, last + 1) >= peak - 1e-9) ++last;
    if (last > first) {
      delta = 0.5 * (first + last) - best;
    } else if (best > 0 && best < n_rows) {
      const double fm = value(c, best - 1), f0 = peak, fp = value(c, best + 1);
      const double den = fm - 2.0 * f0 + fp;
      if (den < 0.0) {
        delta = std::clamp(0.5 * (fm - fp) / den, -0.5, 0.5);
        peak = f0 - 0.25 * (fm - fp) * delta;
      }
    }
    if (peak < threshold) continue;
    const double col = along_x ? X(c) : Y(c);
    const double step = along_x ? r.height() / my : r.width() / mx;
    const double ridge = (along_x ? Y(best) : X(best)) + delta * step;
    pts.push_back({col, ridge});
  }
  return pts;
}

double crack_length(const SplineSpace2D& space, std::span<const double> v, Axis axis, double threshold,
                    int samples_per_element) {
  const auto pts = crack_ridge(space, v, axis, threshold, samples_per_element);
  if (pts.empty()) throw DomainError("crack_length: empty ridge");
  double l = 0.0;
  for (std::size_t k = 1; k < pts.size(); ++k) l += std::hypot(pts[k][0] - pts[k - 1][0], pts[k][1] - pts[k - 1][1]);
  return l;
}

double effective_toughness(double dissipated, double length) {
  if (!(length > 0.0)) throw DomainError("effective_toughness: crack length must be positive");
  return dissipated / length;
}

double relative_error(double gc_eff, double gc) { return std::abs(gc_eff - gc) / gc; }

std::vector<double> convergence_rate(std::span<const double> errors, std::span<const double> hs) {
  if (errors.size() != hs.size() || errors.size() < 2)
    throw DomainError("convergence_rate: need at least two (h, error) pairs");
  std::vector<double> out;
  for (std::size_t k = 0; k + 1 < errors.size(); ++k) {
    if (!(errors[k] > 0.0 && errors[k + 1] > 0.0 && hs[k] > 0.0 && hs[k + 1] > 0.0) || hs[k] == hs[k + 1])
      throw DomainError("convergence_rate: errors and mesh sizes must be positive and distinct");
    out.push_back((std::log(errors[k + 1]) - std::log(errors[k])) / (std::log(hs[k + 1]) - std::log(hs[k])));
  }
  return out;
}

SummaryReport summarize(const Problem& p, const std::vector<StepRecord>& records) {
  SummaryReport s;
  if (records.empty()) return s;
  const auto& v = p.state.v;
  const auto ridge = crack_ridge(p.disc->space(), {v.data(), static_cast<std::size_t>(v.size())}, p.spec.crack_axis);
  if (ridge.size() >= 2) {
    const double l = crack_length(p.disc->space(), {v.data(), static_cast<std::size_t>(v.size())}, p.spec.crack_axis);
    if (l > 0.0) {
      s.crack_length = l;
      s.gc_eff = effective_toughness(records.back().D, l);
      s.r_error = relative_error(*s.gc_eff, p.spec.material.Gc);
    }
  }
  if (p.spec.name == "pure_traction") {
    try {
      s.sigma_c = elastic_limit(records, p.spec.cross_section);
    } catch (const DomainError&) {
    }
  }
  return s;
}

}  // namespace pfiga::bench
