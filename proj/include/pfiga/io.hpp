// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The pfiga Authors

/// @file io.hpp
/// Writers for step records (CSV), run summaries (JSON) and phase-field
/// snapshots (legacy ASCII VTK). All writers reject non-finite numbers.

#ifndef PFIGA_IO_HPP
#define PFIGA_IO_HPP

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "pfiga/bench.hpp"
#include "pfiga/profile.hpp"

namespace pfiga::io {

/// Columns step,t,u_bc,reaction,E_elastic,E_surface,D,max_v,stag_iters.
void write_steps_csv(std::ostream& out, const std::vector<bench::StepRecord>& records);

/// Keys gc_eff, r_error, crack_length, sigma_c, cr; missing values are null.
void write_summary_json(std::ostream& out, const bench::SummaryReport& s);

/// v sampled on a (4 nex + 1) x (4 ney + 1) grid as STRUCTURED_POINTS.
void write_vtk(std::ostream& out, const SplineSpace2D& space, std::span<const double> v,
               const std::string& title = "phase field");

/// Columns x,w over [0, support] (or [0, x_max] if given).
void write_profile_csv(std::ostream& out, const profile::OptimalProfile& w, int samples, double x_max = 0.0);

/// Throws std::runtime_error if x is not finite.
double finite_or_throw(double x, const char* what);

}  // namespace pfiga::io

#endif  // PFIGA_IO_HPP
