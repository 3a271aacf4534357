// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The pfiga Authors

// Command-line driver: calibrate, profile, run, sweep.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "pfiga/bench.hpp"
#include "pfiga/config.hpp"
#include "pfiga/error.hpp"
#include "pfiga/io.hpp"
#include "pfiga/profile.hpp"

namespace fs = std::filesystem;
using namespace pfiga;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;

fs::path output_root() {
  if (const char* env = std::getenv("PFIGA_OUTPUT_ROOT"); env && *env) return env;
  return fs::current_path();
}

fs::path resolve_dir(const std::string& dir) {
  const fs::path p(dir);
  return p.is_absolute() ? p : output_root() / p;
}

std::ofstream open_out(const fs::path& p) {
  fs::create_directories(p.parent_path());
  std::ofstream f(p);
  if (!f) throw std::runtime_error("cannot write " + p.string());
  return f;
}

struct SolverFailure {
  std::string message;
  std::optional<int> step;
  double residual = NAN;
  std::vector<double> history;
};

void write_failure(const fs::path& dir, const SolverFailure& f) {
  nlohmann::ordered_json j;
  j["error"] = f.message;
  j["step"] = f.step ? nlohmann::ordered_json(*f.step) : nlohmann::ordered_json(nullptr);
  j["residual"] = std::isfinite(f.residual) ? nlohmann::ordered_json(f.residual) : nlohmann::ordered_json(nullptr);
  nlohmann::ordered_json h = nlohmann::ordered_json::array();
  for (double x : f.history) h.push_back(std::isfinite(x) ? nlohmann::ordered_json(x) : nlohmann::ordered_json(nullptr));
  j["energy_history"] = h;
  auto out = open_out(dir / "error.json");
  out << j.dump(2) << '\n';
}

// ---------------------------------------------------------------- calibrate

int cmd_calibrate(const std::vector<double>& rhos, int order, const std::string& out_path, bool display) {
  std::vector<profile::ProfileSolution> rows;
  if (order == 2) {
    rows.push_back({0.0, profile::kSecondOrderRStar, profile::kSecondOrderRStar, 0.0, 0.0, 0.0, 0.0,
                    profile::kSecondOrderC});
  } else {
    rows = profile::calibration_table(rhos);
  }
  std::ostringstream csv;
  if (order == 2) {
    char buf[200];
    csv << "rho,gamma,r_star,R_star,c_rho\n";
    std::snprintf(buf, sizeof buf, "%.12e,%.12e,%.12e,%.12e,%.12e\n", 0.0, 0.0, rows[0].r_star, rows[0].R_star,
                  rows[0].c_rho);
    csv << buf;
  } else {
    profile::write_calibration_csv(csv, rows);
  }
  if (out_path.empty() || out_path == "-") {
    std::cout << csv.str();
  } else {
    auto f = open_out(resolve_dir(out_path));
    f << csv.str();
  }
  if (display) {
    std::fprintf(stderr, "%10s %10s %10s\n", "rho", "R*", "c");
    for (const auto& r : rows) {
      if (order == 2) {
        std::fprintf(stderr, "%10s %10.4f %10.6f\n", "-", r.R_star, r.c_rho);
      } else {
        std::fprintf(stderr, "%10.4g %10.4f %10.4f\n", r.rho(), r.R_star, r.c_rho);
      }
    }
  }
  return 0;
}

// ---------------------------------------------------------------- profile

int cmd_profile(double rho, int order, int samples, double x_max, const std::string& out_path) {
  const profile::OptimalProfile w = order == 2 ? profile::OptimalProfile::second_order()
                                               : profile::OptimalProfile::fourth_order(profile::calibrate(rho));
  std::ostringstream csv;
  io::write_profile_csv(csv, w, samples, x_max);
  if (out_path.empty() || out_path == "-") {
    std::cout << csv.str();
  } else {
    auto f = open_out(resolve_dir(out_path));
    f << csv.str();
  }
  return 0;
}

// ---------------------------------------------------------------- run

struct RunOutcome {
  bench::SummaryReport summary;
  double h = 0.0;
  std::vector<bench::StepRecord> records;
};

RunOutcome execute(const RunConfig& cfg, const fs::path& dir, bool quiet) {
  const bench::BenchmarkSpec spec = cfg.spec();
  const ModelParams model = cfg.model();
  bench::Problem p = bench::setup(spec, model, cfg.mesh, cfg.solver);
  fs::create_directories(dir);
  {
    auto f = open_out(dir / "config.ini");
    write_config(f, cfg);
  }
  if (!quiet) {
    std::fprintf(stderr, "%s %s: %d x %d elements, h = %.6g, %d steps\n", spec.name.c_str(), model.name().c_str(),
                 p.disc->space().nex(), p.disc->space().ney(), p.h, spec.loading.n_steps());
  }
  const auto t0 = std::chrono::steady_clock::now();
  bench::RunOptions opts;
  opts.on_step = [&](const bench::StepRecord& r, const State& s) {
    for (double x : {r.reaction, r.E_elastic, r.E_surface, r.D, r.max_v})
      io::finite_or_throw(x, "step record");
    if (!quiet) {
      const double el = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      std::fprintf(stderr, "  step %4d u=%.4e R=%.6e D=%.6e max_v=%.4f iters=%d  [%.1fs]\n", r.step, r.u_bc,
                   r.reaction, r.D, r.max_v, r.stag_iters, el);
    }
    if (cfg.vtk) {
      const bool wanted = cfg.vtk_steps.empty() || std::find(cfg.vtk_steps.begin(), cfg.vtk_steps.end(), r.step) !=
                                                       cfg.vtk_steps.end();
      if (wanted) {
        char name[32];
        std::snprintf(name, sizeof name, "v_%04d.vtk", r.step);
        auto f = open_out(dir / name);
        io::write_vtk(f, p.disc->space(), {s.v.data(), static_cast<std::size_t>(s.v.size())});
      }
    }
  };
  RunOutcome out;
  out.records = bench::run_evolution(p, opts);
  out.summary = bench::summarize(p, out.records);
  out.h = p.h;
  if (cfg.csv) {
    auto f = open_out(dir / "steps.csv");
    io::write_steps_csv(f, out.records);
  }
  if (cfg.json) {
    auto f = open_out(dir / "summary.json");
    io::write_summary_json(f, out.summary);
  }
  return out;
}

// Runs one configuration, mapping failures to exit codes and a diagnostic JSON.
int guarded(const std::function<void()>& body, const fs::path& dir) {
  try {
    body();
    return 0;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const ConvergenceError& e) {
    std::fprintf(stderr, "solver failure: %s\n", e.what());
    write_failure(dir, {e.what(), static_cast<int>(e.last_iterate()), e.residual(), e.history()});
    return kExitSolver;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "solver failure: %s\n", e.what());
    write_failure(dir, {e.what(), std::nullopt, NAN, {}});
    return kExitSolver;
  }
}

struct RunFlags {
  std::string config;
  std::string benchmark;
  std::string variant = "AT1";
  int order = 4;
  std::optional<double> rho, eps, h, u_min, du, u_max, stag_tol;
  std::optional<int> n, stag_max_iters;
  std::string linear = "direct";
  std::string out = "out";
  bool vtk = false;
  std::vector<int> vtk_steps;
  bool quiet = false;
};

void add_run_flags(CLI::App* app, RunFlags& f, bool lists) {
  app->set_help_flag("--help", "Print this help message and exit");
  app->add_option("--config", f.config, "INI run configuration");
  app->add_option("--benchmark,-b", f.benchmark, "pure_traction | dcb | sen_tension | sen_shear");
  app->add_option("--variant", f.variant, "AT1 | AT2");
  app->add_option("--order", f.order, "2 | 4")->check(CLI::IsMember({2, 4}));
  if (!lists) {
    app->add_option("--rho", f.rho, "bilaplacian weight (AT1 order 4)");
    app->add_option("--n", f.n, "mesh divisor, h = R* eps / n")->check(CLI::IsMember({2, 4, 8, 16}));
  }
  app->add_option("--h", f.h, "explicit mesh spacing");
  app->add_option("--eps", f.eps, "internal length");
  app->add_option("--u-min", f.u_min, "first applied displacement");
  app->add_option("--du", f.du, "displacement increment");
  app->add_option("--u-max", f.u_max, "last applied displacement");
  app->add_option("--stag-tol", f.stag_tol, "staggered tolerance on max |dv|");
  app->add_option("--stag-max-iters", f.stag_max_iters, "staggered iteration cap per step");
  app->add_option("--linear", f.linear, "direct | cg")->check(CLI::IsMember({"direct", "cg"}));
  app->add_option("--out,-o", f.out, "output directory (relative to $PFIGA_OUTPUT_ROOT if set)");
  app->add_flag("--vtk", f.vtk, "write v snapshots");
  app->add_option("--vtk-steps", f.vtk_steps, "steps to snapshot (default: all)");
  app->add_flag("--quiet,-q", f.quiet, "no per-step progress");
}

RunConfig config_from_flags(const RunFlags& f, std::optional<double> rho, std::optional<int> n) {
  RunConfig c;
  if (!f.config.empty()) c = load_config(f.config);
  if (!f.benchmark.empty()) c.benchmark = f.benchmark;
  if (f.config.empty() || f.variant != "AT1") c.variant = variant_from_string(f.variant);
  if (f.config.empty() || f.order != 4) c.order = f.order;
  const bool needs_rho = c.variant == Variant::AT1 && c.order == 4;
  if (rho) c.rho = *rho;
  if (needs_rho && !c.rho) c.rho = 1.0;
  if (!needs_rho) c.rho.reset();
  if (f.eps) c.eps = *f.eps;
  if (n || f.h) c.mesh = {};
  if (n) c.mesh.n = *n;
  if (f.h) c.mesh.h = *f.h;
  if (c.mesh.empty() && !c.benchmark.empty()) {
    const bench::BenchmarkSpec s = bench::catalog(c.benchmark);
    if (s.default_h > 0.0) {
      c.mesh.h = s.default_h;
    } else {
      c.mesh.n = s.default_n;
    }
  }
  if (f.u_min) c.u_min = *f.u_min;
  if (f.du) c.du = *f.du;
  if (f.u_max) c.u_max = *f.u_max;
  if (f.stag_tol) c.solver.stag_tol = *f.stag_tol;
  if (f.stag_max_iters) c.solver.stag_max_iters = *f.stag_max_iters;
  if (f.config.empty() || f.linear != "direct")
    c.solver.linear = f.linear == "cg" ? LinearSolverKind::ConjugateGradient : LinearSolverKind::Direct;
  if (f.config.empty() || f.out != "out") c.output_dir = f.out;
  if (f.vtk) c.vtk = true;
  if (!f.vtk_steps.empty()) c.vtk_steps = f.vtk_steps;
  c.validate();
  return c;
}

int cmd_run(const RunFlags& f) {
  RunConfig cfg;
  try {
    cfg = config_from_flags(f, f.rho, f.n);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  }
  const fs::path dir = resolve_dir(cfg.output_dir);
  return guarded(
      [&] {
        const RunOutcome o = execute(cfg, dir, f.quiet);
        std::ostringstream js;
        io::write_summary_json(js, o.summary);
        std::cout << js.str();
      },
      dir);
}

// ---------------------------------------------------------------- sweep

int cmd_sweep(const RunFlags& f, std::vector<double> rhos, std::vector<int> ns, const std::string& mode,
              bool analytic) {
  if (rhos.empty() && ns.empty()) {
    std::fprintf(stderr, "config error: sweep needs --rho and/or --n lists\n");
    return kExitConfig;
  }
  RunConfig base;
  try {
    base = config_from_flags(f, std::nullopt, std::nullopt);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  }
  const bool uses_rho = base.variant == Variant::AT1 && base.order == 4;
  if (rhos.empty()) rhos = {base.rho.value_or(1.0)};
  if (!uses_rho) rhos = {0.0};
  std::vector<std::optional<int>> n_list;
  for (int n : ns) n_list.push_back(n);
  if (n_list.empty()) n_list.push_back(std::nullopt);

  const fs::path root = resolve_dir(base.output_dir);
  fs::create_directories(root);
  const bench::BenchmarkSpec spec = base.spec();
  const double R_ref = ModelParams::make(base.variant, base.order, 1.0, spec.eps).support_radius();

  struct Row {
    double rho;
    std::optional<int> n;
    double h = NAN, R_star = NAN, sigma_th = NAN;
    bench::SummaryReport s;
    std::string status = "ok";
  };
  std::vector<Row> rows;
  int worst = 0;
  for (double rho : rhos) {
    for (const auto& n : n_list) {
      Row row{rho, n};
      RunConfig c = base;
      if (uses_rho) c.rho = rho;
      if (n) {
        c.mesh = {};
        c.mesh.n = *n;
        if (mode == "fixed") c.mesh.R_star = R_ref;
      }
      char sub[96];
      std::snprintf(sub, sizeof sub, "rho_%g_n_%d", rho, n ? *n : 0);
      c.output_dir = (root / sub).string();
      try {
        c.validate();
        const ModelParams model = c.model();
        row.R_star = model.support_radius();
        row.sigma_th = profile::sigma_th(spec.material.Gc, spec.material.mu, spec.eps, model.c_norm);
      } catch (const std::exception& e) {
        row.status = std::string("config: ") + e.what();
        worst = std::max(worst, kExitConfig);
        rows.push_back(row);
        continue;
      }
      if (!analytic) {
        const int code = guarded(
            [&] {
              const RunOutcome o = execute(c, c.output_dir, f.quiet);
              row.s = o.summary;
              row.h = o.h;
            },
            c.output_dir);
        if (code != 0) {
          row.status = code == kExitConfig ? "config error" : "solver failure";
          worst = std::max(worst, code);
        }
      }
      rows.push_back(row);
    }
  }

  // Convergence rate along each rho series, in the order given.
  std::map<double, std::vector<std::size_t>> series;
  for (std::size_t k = 0; k < rows.size(); ++k) series[rows[k].rho].push_back(k);
  std::vector<std::optional<double>> cr(rows.size());
  for (auto& [rho, idx] : series) {
    for (std::size_t a = 1; a < idx.size(); ++a) {
      const Row &p = rows[idx[a - 1]], &q = rows[idx[a]];
      if (p.s.r_error && q.s.r_error && *p.s.r_error > 0 && *q.s.r_error > 0 && p.h != q.h) {
        const double e[2] = {*p.s.r_error, *q.s.r_error}, hs[2] = {p.h, q.h};
        cr[idx[a]] = bench::convergence_rate(e, hs)[0];
      }
    }
  }

  const auto opt = [](const std::optional<double>& v) {
    if (!v) return std::string();
    char b[40];
    std::snprintf(b, sizeof b, "%.12e", *v);
    return std::string(b);
  };
  const auto dbl = [&](double v) { return std::isfinite(v) ? opt(v) : std::string(); };
  auto out = open_out(root / "sweep.csv");
  out << "rho,n,h,R_star,sigma_th,gc_eff,r_error,crack_length,sigma_c,cr,status\n";
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const Row& r = rows[k];
    out << dbl(r.rho) << ',' << (r.n ? std::to_string(*r.n) : "") << ',' << dbl(r.h) << ',' << dbl(r.R_star) << ','
        << dbl(r.sigma_th) << ',' << opt(r.s.gc_eff) << ',' << opt(r.s.r_error) << ',' << opt(r.s.crack_length)
        << ',' << opt(r.s.sigma_c) << ',' << opt(cr[k]) << ',' << r.status << '\n';
  }
  std::fprintf(stderr, "wrote %s\n", (root / "sweep.csv").string().c_str());
  return worst == kExitConfig ? kExitConfig : (worst ? kExitSolver : 0);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fourth-order phase-field fracture on B-spline discretizations"};
  app.require_subcommand(1);

  std::vector<double> cal_rhos;
  int cal_order = 4;
  std::string cal_out;
  bool cal_display = false;
  auto* cal = app.add_subcommand("calibrate", "Tabulate R* and c_rho");
  cal->add_option("--rho", cal_rhos, "rho values");
  cal->add_option("--order", cal_order, "2 | 4")->check(CLI::IsMember({2, 4}));
  cal->add_option("--out,-o", cal_out, "CSV file (default stdout)");
  cal->add_flag("--display", cal_display, "print a rounded table to stderr");

  double prof_rho = 1.0, prof_xmax = 0.0;
  int prof_order = 4, prof_samples = 201;
  std::string prof_out;
  auto* prof = app.add_subcommand("profile", "Sample the optimal profile as CSV x,w");
  prof->add_option("--rho", prof_rho)->check(CLI::PositiveNumber);
  prof->add_option("--order", prof_order)->check(CLI::IsMember({2, 4}));
  prof->add_option("--samples", prof_samples)->check(CLI::Range(2, 10000000));
  prof->add_option("--x-max", prof_xmax, "sample range (default: support)");
  prof->add_option("--out,-o", prof_out);

  RunFlags run_flags;
  auto* run = app.add_subcommand("run", "Run one benchmark");
  add_run_flags(run, run_flags, false);

  RunFlags sweep_flags;
  std::vector<double> sweep_rhos;
  std::vector<int> sweep_ns;
  std::string sweep_mode = "rstar";
  bool sweep_analytic = false;
  auto* sweep = app.add_subcommand("sweep", "Cartesian sweep over rho and mesh divisors");
  add_run_flags(sweep, sweep_flags, true);
  sweep->add_option("--rho", sweep_rhos, "rho values");
  sweep->add_option("--n", sweep_ns, "mesh divisors")->check(CLI::IsMember({2, 4, 8, 16}));
  sweep->add_option("--mode", sweep_mode, "rstar: h = R*(rho) eps / n; fixed: h from rho = 1")
      ->check(CLI::IsMember({"rstar", "fixed"}));
  sweep->add_flag("--analytic", sweep_analytic, "only tabulate R*, sigma_th (no simulations)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*cal) return cmd_calibrate(cal_rhos, cal_order, cal_out, cal_display);
    if (*prof) return cmd_profile(prof_rho, prof_order, prof_samples, prof_xmax, prof_out);
    if (*run) return cmd_run(run_flags);
    if (*sweep) return cmd_sweep(sweep_flags, sweep_rhos, sweep_ns, sweep_mode, sweep_analytic);
  } catch (const DomainError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitSolver;
  }
  return 0;
}
