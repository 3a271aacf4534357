// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The pfiga Authors

#include "pfiga/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "pfiga/error.hpp"

namespace pfiga {

namespace pt = boost::property_tree;

namespace {

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> s = {
      {"benchmark", {"name"}},
      {"model", {"variant", "order", "rho", "eps", "eta"}},
      {"mesh", {"n", "h", "knots_x", "knots_y"}},
      {"loading", {"u_min", "du", "u_max"}},
      {"solver",
       {"stag_tol", "stag_max_iters", "psor_omega", "psor_tol", "psor_max_sweeps", "picard_max", "linear",
        "linear_tol"}},
      {"output", {"dir", "csv", "json", "vtk", "vtk_steps"}},
  };
  return s;
}

double to_double(const std::string& key, const std::string& s) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw ConfigError("config: '" + key + "' is not a number: '" + s + "'");
  }
  if (pos != s.size()) throw ConfigError("config: trailing characters in '" + key + "': '" + s + "'");
  return v;
}

int to_int(const std::string& key, const std::string& s) {
  std::size_t pos = 0;
  int v = 0;
  try {
    v = std::stoi(s, &pos);
  } catch (const std::exception&) {
    throw ConfigError("config: '" + key + "' is not an integer: '" + s + "'");
  }
  if (pos != s.size()) throw ConfigError("config: trailing characters in '" + key + "': '" + s + "'");
  return v;
}

bool to_bool(const std::string& key, const std::string& s) {
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw ConfigError("config: '" + key + "' is not a boolean: '" + s + "'");
}

template <class T, class F>
std::vector<T> to_list(const std::string& s, F&& conv) {
  std::vector<T> out;
  std::string tok;
  std::istringstream is(s);
  while (is >> tok) {
    if (tok.back() == ',') tok.pop_back();
    if (!tok.empty()) out.push_back(conv(tok));
  }
  return out;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <class T>
std::string join(const std::vector<T>& v) {
  std::string s;
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (k) s += ' ';
    if constexpr (std::is_floating_point_v<T>) {
      s += fmt(v[k]);
    } else {
      s += std::to_string(v[k]);
    }
  }
  return s;
}

}  // namespace

void RunConfig::validate() const {
  if (benchmark.empty()) throw ConfigError("config: benchmark name is required");
  bench::catalog(benchmark);
  if (order != 2 && order != 4) throw ConfigError("config: order must be 2 or 4");
  const bool needs_rho = variant == Variant::AT1 && order == 4;
  if (needs_rho && !rho) throw ConfigError("config: rho is required for AT1 order 4");
  if (!needs_rho && rho) throw ConfigError("config: rho is only valid for AT1 order 4");
  if (rho && !(*rho > 0.0)) throw ConfigError("config: rho must be positive");
  if (eps && !(*eps > 0.0)) throw ConfigError("config: eps must be positive");
  const int n_mesh = (mesh.n != 0) + (mesh.h != 0.0) + (!mesh.knots_x.empty() || !mesh.knots_y.empty());
  if (n_mesh != 1) throw ConfigError("config: exactly one mesh specification (n, h or knots) is required");
  if (mesh.n != 0 && mesh.n != 2 && mesh.n != 4 && mesh.n != 8 && mesh.n != 16)
    throw ConfigError("config: mesh n must be one of 2, 4, 8, 16");
  if (mesh.h < 0.0) throw ConfigError("config: mesh h must be positive");
  if (mesh.knots_x.empty() != mesh.knots_y.empty()) throw ConfigError("config: both knot vectors are required");
  solver.validate();
  spec().validate();
  try {
    model();
  } catch (const DomainError& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

bench::BenchmarkSpec RunConfig::spec() const {
  bench::BenchmarkSpec s = bench::catalog(benchmark);
  if (eps) s.eps = *eps;
  if (u_min) s.loading.u_min = *u_min;
  if (du) s.loading.du = *du;
  if (u_max) s.loading.u_max = *u_max;
  return s;
}

ModelParams RunConfig::model() const {
  return ModelParams::make(variant, order, rho.value_or(1.0), spec().eps, eta);
}

RunConfig parse_config(std::istream& in) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  for (const auto& [section, body] : tree) {
    auto it = schema().find(section);
    if (it == schema().end()) throw ConfigError("config: unknown section [" + section + "]");
    for (const auto& [key, value] : body) {
      if (!it->second.count(key)) throw ConfigError("config: unknown key '" + key + "' in [" + section + "]");
    }
  }
  const auto get = [&](const std::string& path) -> std::optional<std::string> {
    if (auto v = tree.get_optional<std::string>(path)) return *v;
    return std::nullopt;
  };

  RunConfig c;
  if (auto v = get("benchmark.name")) c.benchmark = *v;
  if (auto v = get("model.variant")) c.variant = variant_from_string(*v);
  if (auto v = get("model.order")) c.order = to_int("order", *v);
  if (auto v = get("model.rho")) c.rho = to_double("rho", *v);
  if (auto v = get("model.eps")) c.eps = to_double("eps", *v);
  if (auto v = get("model.eta")) c.eta = to_double("eta", *v);
  if (auto v = get("mesh.n")) c.mesh.n = to_int("n", *v);
  if (auto v = get("mesh.h")) c.mesh.h = to_double("h", *v);
  const auto dbl = [](const std::string& s) { return to_double("knots", s); };
  if (auto v = get("mesh.knots_x")) c.mesh.knots_x = to_list<double>(*v, dbl);
  if (auto v = get("mesh.knots_y")) c.mesh.knots_y = to_list<double>(*v, dbl);
  if (auto v = get("loading.u_min")) c.u_min = to_double("u_min", *v);
  if (auto v = get("loading.du")) c.du = to_double("du", *v);
  if (auto v = get("loading.u_max")) c.u_max = to_double("u_max", *v);
  if (auto v = get("solver.stag_tol")) c.solver.stag_tol = to_double("stag_tol", *v);
  if (auto v = get("solver.stag_max_iters")) c.solver.stag_max_iters = to_int("stag_max_iters", *v);
  if (auto v = get("solver.psor_omega")) c.solver.psor_omega = to_double("psor_omega", *v);
  if (auto v = get("solver.psor_tol")) c.solver.psor_tol = to_double("psor_tol", *v);
  if (auto v = get("solver.psor_max_sweeps")) c.solver.psor_max_sweeps = to_int("psor_max_sweeps", *v);
  if (auto v = get("solver.picard_max")) c.solver.picard_max = to_int("picard_max", *v);
  if (auto v = get("solver.linear")) {
    if (*v == "direct") {
      c.solver.linear = LinearSolverKind::Direct;
    } else if (*v == "cg") {
      c.solver.linear = LinearSolverKind::ConjugateGradient;
    } else {
      throw ConfigError("config: linear must be 'direct' or 'cg'");
    }
  }
  if (auto v = get("solver.linear_tol")) c.solver.linear_tol = to_double("linear_tol", *v);
  if (auto v = get("output.dir")) c.output_dir = *v;
  if (auto v = get("output.csv")) c.csv = to_bool("csv", *v);
  if (auto v = get("output.json")) c.json = to_bool("json", *v);
  if (auto v = get("output.vtk")) c.vtk = to_bool("vtk", *v);
  if (auto v = get("output.vtk_steps"))
    c.vtk_steps = to_list<int>(*v, [](const std::string& s) { return to_int("vtk_steps", s); });
  c.validate();
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  return parse_config(in);
}

void write_config(std::ostream& out, const RunConfig& c) {
  out << "[benchmark]\nname = " << c.benchmark << "\n\n";
  out << "[model]\nvariant = " << to_string(c.variant) << "\norder = " << c.order << "\n";
  if (c.rho) out << "rho = " << fmt(*c.rho) << "\n";
  if (c.eps) out << "eps = " << fmt(*c.eps) << "\n";
  out << "eta = " << fmt(c.eta) << "\n\n";
  out << "[mesh]\n";
  if (c.mesh.n != 0) out << "n = " << c.mesh.n << "\n";
  if (c.mesh.h != 0.0) out << "h = " << fmt(c.mesh.h) << "\n";
  if (!c.mesh.knots_x.empty()) out << "knots_x = " << join(c.mesh.knots_x) << "\n";
  if (!c.mesh.knots_y.empty()) out << "knots_y = " << join(c.mesh.knots_y) << "\n";
  if (c.u_min || c.du || c.u_max) {
    out << "\n[loading]\n";
    if (c.u_min) out << "u_min = " << fmt(*c.u_min) << "\n";
    if (c.du) out << "du = " << fmt(*c.du) << "\n";
    if (c.u_max) out << "u_max = " << fmt(*c.u_max) << "\n";
  }
  const SolverConfig& s = c.solver;
  out << "\n[solver]\nstag_tol = " << fmt(s.stag_tol) << "\nstag_max_iters = " << s.stag_max_iters
      << "\npsor_omega = " << fmt(s.psor_omega) << "\npsor_tol = " << fmt(s.psor_tol)
      << "\npsor_max_sweeps = " << s.psor_max_sweeps << "\npicard_max = " << s.picard_max
      << "\nlinear = " << (s.linear == LinearSolverKind::Direct ? "direct" : "cg")
      << "\nlinear_tol = " << fmt(s.linear_tol) << "\n";
  out << "\n[output]\ndir = " << c.output_dir << "\ncsv = " << (c.csv ? "true" : "false")
      << "\njson = " << (c.json ? "true" : "false") << "\nvtk = " << (c.vtk ? "true" : "false") << "\n";
  if (!c.vtk_steps.empty()) out << "vtk_steps = " << join(c.vtk_steps) << "\n";
}

}  // namespace pfiga
