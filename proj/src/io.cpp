// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The pfiga Authors

#include "pfiga/io.hpp"

#include <cmath>
#include <cstdio>
#include <json.hpp>
#include <ostream>
#include <stdexcept>

namespace pfiga::io {

namespace {

std::string num(double x, const char* what) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12e", finite_or_throw(x, what));
  return buf;
}

}  // namespace

double finite_or_throw(double x, const char* what) {
  if (!std::isfinite(x)) throw std::runtime_error(std::string("non-finite value in ") + what);
  return x;
}

void write_steps_csv(std::ostream& out, const std::vector<bench::StepRecord>& records) {
  out << "step,t,u_bc,reaction,E_elastic,E_surface,D,max_v,stag_iters\n";
  for (const auto& r : records) {
    out << r.step << ',' << num(r.t, "t") << ',' << num(r.u_bc, "u_bc") << ',' << num(r.reaction, "reaction") << ','
        << num(r.E_elastic, "E_elastic") << ',' << num(r.E_surface, "E_surface") << ',' << num(r.D, "D") << ','
        << num(r.max_v, "max_v") << ',' << r.stag_iters << '\n';
  }
}

void write_summary_json(std::ostream& out, const bench::SummaryReport& s) {
  nlohmann::ordered_json j;
  const auto put = [&](const char* key, const std::optional<double>& v) {
    j[key] = v ? nlohmann::ordered_json(finite_or_throw(*v, key)) : nlohmann::ordered_json(nullptr);
  };
  put("gc_eff", s.gc_eff);
  put("r_error", s.r_error);
  put("crack_length", s.crack_length);
  put("sigma_c", s.sigma_c);
  j["cr"] = nlohmann::ordered_json::array();
  for (double c : s.cr) j["cr"].push_back(finite_or_throw(c, "cr"));
  out << j.dump(2) << '\n';
}

void write_vtk(std::ostream& out, const SplineSpace2D& space, std::span<const double> v, const std::string& title) {
  const Rectangle& r = space.rect();
  const int mx = 4 * space.nex(), my = 4 * space.ney();
  out << "# vtk DataFile Version 3.0\n" << title << "\nASCII\nDATASET STRUCTURED_POINTS\n";
  out << "DIMENSIONS " << mx + 1 << ' ' << my + 1 << " 1\n";
  out << "ORIGIN " << num(r.x0, "origin") << ' ' << num(r.y0, "origin") << " 0\n";
  out << "SPACING " << num(r.width() / mx, "spacing") << ' ' << num(r.height() / my, "spacing") << " 1\n";
  out << "POINT_DATA " << (mx + 1) * (my + 1) << "\nSCALARS v double 1\nLOOKUP_TABLE default\n";
  for (int j = 0; j <= my; ++j) {
    const double y = j == my ? r.y1 : r.y0 + r.height() * j / my;
    for (int i = 0; i <= mx; ++i) {
      const double x = i == mx ? r.x1 : r.x0 + r.width() * i / mx;
      out << num(space.evaluate(v, x, y), "v") << '\n';
    }
  }
}

void write_profile_csv(std::ostream& out, const profile::OptimalProfile& w, int samples, double x_max) {
  if (samples < 2) throw std::invalid_argument("write_profile_csv: need at least two samples");
  const double L = x_max > 0.0 ? x_max : w.support();
  out << "x,w\n";
  for (int k = 0; k < samples; ++k) {
    const double x = L * k / (samples - 1);
    out << num(x, "x") << ',' << num(w(x), "w") << '\n';
  }
}

}  // namespace pfiga::io
