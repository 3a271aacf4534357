// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The pfiga Authors

#include "pfiga/mechanics.hpp"

#include <cmath>

#include "pfiga/error.hpp"
#include "pfiga/profile.hpp"

namespace pfiga {

Material Material::plane_strain(double E, double nu, double Gc) {
  Material m{};
  m.E = E;
  m.nu = nu;
  m.Gc = Gc;
  m.mu = E / (2.0 * (1.0 + nu));
  const double lambda = E * nu / ((1.0 + nu) * (1.0 - 2.0 * nu));
  m.kappa = lambda + m.mu;
  m.validate();
  return m;
}

void Material::validate() const {
  if (!(E > 0.0)) throw DomainError("Material: E must be positive");
  if (!(nu > -1.0 && nu < 0.5)) throw DomainError("Material: nu must lie in (-1, 0.5)");
  if (!(kappa > 0.0)) throw DomainError("Material: kappa must be positive");
  if (!(Gc > 0.0)) throw DomainError("Material: Gc must be positive");
  if (std::abs(mu - E / (2.0 * (1.0 + nu))) > 1e-12 * E) throw DomainError("Material: mu inconsistent with E, nu");
}

std::string to_string(Variant v) { return v == Variant::AT1 ? "AT1" : "AT2"; }

Variant variant_from_string(const std::string& s) {
  if (s == "AT1" || s == "at1") return Variant::AT1;
  if (s == "AT2" || s == "at2") return Variant::AT2;
  throw ConfigError("unknown model variant '" + s + "'");
}

ModelParams ModelParams::make(Variant variant, int order, double rho, double eps, double eta) {
  ModelParams m;
  m.variant = variant;
  m.order = order;
  m.rho = rho;
  m.eps = eps;
  m.eta = eta;
  if (order != 2 && order != 4) throw DomainError("ModelParams: order must be 2 or 4");
  if (variant == Variant::AT1) {
    m.c_norm = order == 4 ? profile::calibrate(rho).c_rho : profile::kSecondOrderC;
  } else {
    m.c_norm = 2.0;
  }
  m.validate();
  return m;
}

void ModelParams::validate() const {
  if (order != 2 && order != 4) throw DomainError("ModelParams: order must be 2 or 4");
  if (!(eps > 0.0)) throw DomainError("ModelParams: eps must be positive");
  if (!(eta > 0.0)) throw DomainError("ModelParams: eta must be positive");
  if (eta > 1e-2 * eps) throw DomainError("ModelParams: eta must satisfy eta <= 1e-2 eps");
  if (variant == Variant::AT1 && order == 4 && !(rho > 0.0)) throw DomainError("ModelParams: rho must be positive");
  if (!(c_norm > 0.0)) throw DomainError("ModelParams: c_norm must be positive");
}

SurfaceCoefficients ModelParams::surface() const {
  SurfaceCoefficients s;
  if (variant == Variant::AT1) {
    s.lin = 1.0 / (c_norm * eps);
    s.grad = eps / c_norm;
    if (order == 4) s.bilap = rho * eps * eps * eps / c_norm;
  } else if (order == 2) {
    s.quad = 0.5 / eps;
    s.grad = 0.5 * eps;
  } else {
    // (1/(4 eps)) (v^2 + 2 eps^2 |grad v|^2 + eps^4 (lap v)^2)
    s.quad = 0.25 / eps;
    s.grad = 0.5 * eps;
    s.bilap = 0.25 * eps * eps * eps;
  }
  return s;
}

double ModelParams::support_radius() const {
  if (variant == Variant::AT2) return 1.0;
  return order == 4 ? profile::calibrate(rho).R_star : profile::kSecondOrderRStar;
}

std::string ModelParams::name() const { return to_string(variant) + "-" + std::to_string(order); }

StrainSplit split(const Strain2& e) {
  const double tr = e.trace();
  const Sym2 vol{0.5 * tr, 0.5 * tr, 0.0};
  StrainSplit s;
  if (is_tensile(tr)) {
    s.vol_plus = vol;
  } else {
    s.vol_minus = vol;
  }
  s.dev = e - vol;
  return s;
}

double tensile_energy(const Strain2& strain, const Material& mat) {
  const StrainSplit s = split(strain);
  return mat.mu * s.dev.norm2() + mat.kappa * s.vol_plus.norm2();
}

EnergyDensity energy_density(double v, const Strain2& strain, const Material& mat, double eta) {
  if (v < -1e-10 || v > 1.0 + 1e-10) throw DomainError("energy_density: v outside [0, 1]");
  const StrainSplit s = split(strain);
  const double wp = mat.mu * s.dev.norm2() + mat.kappa * s.vol_plus.norm2();
  const double wm = mat.kappa * s.vol_minus.norm2();
  return {degradation(v, eta) * wp + wm, wp, wm};
}

Stress2 stress(double v, const Strain2& strain, const Material& mat, double eta) {
  const StrainSplit s = split(strain);
  const double psi = degradation(v, eta);
  return (s.dev * mat.mu + s.vol_plus * mat.kappa) * (2.0 * psi) + s.vol_minus * (2.0 * mat.kappa);
}

double driving_force(double v, const Strain2& strain, const Material& mat) {
  return 2.0 * (v - 1.0) * tensile_energy(strain, mat);
}

double surface_integrand(double v, double gx, double gy, double lap_v, const ModelParams& model) {
  const SurfaceCoefficients c = model.surface();
  return c.lin * v + c.quad * v * v + c.grad * (gx * gx + gy * gy) + c.bilap * lap_v * lap_v;
}

}  // namespace pfiga
