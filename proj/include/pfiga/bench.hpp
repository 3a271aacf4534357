// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The pfiga Authors

/// @file bench.hpp
/// Benchmark catalog, pre-crack seeding, load-history driver and
/// post-processing (crack length, effective toughness, convergence rate).

#ifndef PFIGA_BENCH_HPP
#define PFIGA_BENCH_HPP

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pfiga/mechanics.hpp"
#include "pfiga/solver.hpp"
#include "pfiga/spline.hpp"

namespace pfiga::bench {

enum class Edge { Left, Right, Bottom, Top };
enum class Axis { X, Y };

std::string to_string(Edge e);

/// Displacement component `component` on an edge is value * t, or
/// value * sign(y) * t with `sign_y`.
struct EdgeConstraint {
  Edge edge;
  int component;
  double value;
  bool sign_y = false;
};

struct Segment {
  double x0, y0, x1, y1;
  double length() const;
  double distance(double x, double y) const;
};

/// Load factors t_k = u_min + k du, k = 0 .. n_steps() - 1.
struct Loading {
  double u_min = 0.0;
  double du = 0.0;
  double u_max = 0.0;
  /// Step 0 is an elastic preload (no phase-field update).
  bool preload = false;

  int n_steps() const;
  double at(int k) const;
  void validate() const;
};

struct BenchmarkSpec {
  std::string name;
  Rectangle domain{};
  Material material{};
  double eps = 0.01;
  Loading loading;
  std::vector<EdgeConstraint> constraints;
  Edge driven_edge = Edge::Top;
  int driven_component = 1;
  std::optional<Segment> precrack;
  bool perturb = false;
  double default_h = 0.0;     // explicit default spacing; 0 means h = R* eps / default_n
  int default_n = 4;
  Axis crack_axis = Axis::X;  // dominant propagation direction
  double cross_section = 1.0;

  void validate() const;
};

/// Names: pure_traction, dcb, sen_tension, sen_shear.
BenchmarkSpec catalog(const std::string& name);
std::vector<std::string> catalog_names();

/// Exactly one of n, h or explicit knot vectors.
struct MeshChoice {
  int n = 0;
  double h = 0.0;
  std::vector<double> knots_x, knots_y;
  /// Use this support radius instead of the model's when computing h = R* eps / n.
  double R_star = 0.0;

  bool empty() const { return n == 0 && h == 0.0 && knots_x.empty(); }
  bool operator==(const MeshChoice&) const = default;
};

SplineSpace2D build_space(const BenchmarkSpec& spec, const ModelParams& model, const MeshChoice& mesh);
/// Spacing of the space along x (uniform meshes) or the largest span.
double mesh_size(const SplineSpace2D& space);

DirichletBC build_bc(const BenchmarkSpec& spec, const SplineSpace2D& space);

/// One-dimensional transition profile used to seed a pre-crack.
struct SeedProfile {
  std::function<double(double)> w;
  double support;  // infinite for AT2
  int order;
};
SeedProfile seed_profile(const ModelParams& model);

/// Control values of the interpolated phase field w(dist / eps): Greville
/// interpolation, clamped to [0, 1], zero where the Greville distance exceeds
/// the support. Throws DomainError if profile and model orders differ.
Vector seed_precrack_ipf(const Segment& crack, const SplineSpace2D& space, const SeedProfile& profile,
                         const ModelParams& model);

/// Gc at every quadrature point, reduced by the relative amount `relative` where |x - x_mid| <= h / 2.
std::vector<double> perturb_center(const BenchmarkSpec& spec, const Discretization& disc, double h,
                                   double relative = 1e-4);

struct StepRecord {
  int step = 0;
  double t = 0.0;
  double u_bc = 0.0;
  double reaction = 0.0;
  double E_elastic = 0.0;
  double E_surface = 0.0;
  double D = 0.0;
  double max_v = 0.0;
  int stag_iters = 0;
};

/// Toughness fields are empty when no crack ridge is found.
struct SummaryReport {
  std::optional<double> gc_eff;
  std::optional<double> r_error;
  std::optional<double> crack_length;
  std::optional<double> sigma_c;
  std::vector<double> cr;
};

/// Everything needed to run one benchmark.
struct Problem {
  BenchmarkSpec spec;
  ModelParams model;
  std::shared_ptr<const Discretization> disc;
  std::unique_ptr<PhaseFieldSolver> solver;
  State state;
  double h = 0.0;
};

Problem setup(const BenchmarkSpec& spec, const ModelParams& model, const MeshChoice& mesh, const SolverConfig& cfg);

struct RunOptions {
  /// Stop after the first step whose max v reaches this value (<= 0 disables).
  double stop_at_max_v = 0.0;
  std::function<void(const StepRecord&, const State&)> on_step;
};

/// Runs the load history; failures are rethrown with the step index in the message.
std::vector<StepRecord> run_evolution(Problem& p, const RunOptions& opts = {});

/// sigma_c: reaction / cross_section at the last step before max v first reaches v_onset.
/// The default catches the diffuse damage of the onset step on coarse load histories.
double elastic_limit(const std::vector<StepRecord>& records, double cross_section, double v_onset = 1e-3);

/// Ridge-traced crack length of the phase field.
double crack_length(const SplineSpace2D& space, std::span<const double> v, Axis axis, double threshold = 0.95,
                    int samples_per_element = 4);
/// Ridge points (sample column coordinate, ridge coordinate) kept by crack_length.
std::vector<std::array<double, 2>> crack_ridge(const SplineSpace2D& space, std::span<const double> v, Axis axis,
                                               double threshold = 0.95, int samples_per_element = 4);

double effective_toughness(double dissipated, double length);
double relative_error(double gc_eff, double gc);
/// Pairwise rates between consecutive (h, error) pairs.
std::vector<double> convergence_rate(std::span<const double> errors, std::span<const double> hs);

SummaryReport summarize(const Problem& p, const std::vector<StepRecord>& records);

}  // namespace pfiga::bench

#endif  // PFIGA_BENCH_HPP
