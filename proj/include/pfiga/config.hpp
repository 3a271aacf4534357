// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The pfiga Authors

/// @file config.hpp
/// Run configuration in INI form (key = value within named sections).
///
///   [benchmark]  name
///   [model]      variant, order, rho, eps, eta
///   [mesh]       exactly one of n, h, or knots_x + knots_y
///   [loading]    u_min, du, u_max (optional overrides of the catalog history)
///   [solver]     stag_tol, stag_max_iters, psor_omega, psor_tol, psor_max_sweeps,
///                picard_max, linear (direct | cg), linear_tol
///   [output]     dir, csv, json, vtk, vtk_steps

#ifndef PFIGA_CONFIG_HPP
#define PFIGA_CONFIG_HPP

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "pfiga/bench.hpp"
#include "pfiga/mechanics.hpp"
#include "pfiga/solver.hpp"

namespace pfiga {

struct RunConfig {
  std::string benchmark;
  Variant variant = Variant::AT1;
  int order = 4;
  std::optional<double> rho;
  std::optional<double> eps;
  double eta = 1e-6;
  bench::MeshChoice mesh;
  std::optional<double> u_min, du, u_max;
  SolverConfig solver;
  std::string output_dir = "out";
  bool csv = true;
  bool json = true;
  bool vtk = false;
  std::vector<int> vtk_steps;

  /// Throws ConfigError.
  void validate() const;
  bench::BenchmarkSpec spec() const;
  ModelParams model() const;

  bool operator==(const RunConfig&) const = default;
};

RunConfig parse_config(std::istream& in);
RunConfig load_config(const std::string& path);
void write_config(std::ostream& out, const RunConfig& cfg);

}  // namespace pfiga

#endif  // PFIGA_CONFIG_HPP
