// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The pfiga Authors

/// @file mechanics.hpp
/// Volumetric-deviatoric split, degraded elastic energy, stress, crack
/// driving force and the surface densities of the AT1/AT2 model family.

#ifndef PFIGA_MECHANICS_HPP
#define PFIGA_MECHANICS_HPP

#include <string>

namespace pfiga {

struct Material {
  double E;
  double nu;
  double mu;
  double kappa;
  double Gc;

  /// Plane strain: mu = E / (2(1+nu)), kappa = lambda + mu.
  static Material plane_strain(double E, double nu, double Gc);
  void validate() const;
};

enum class Variant { AT1, AT2 };

std::string to_string(Variant v);
Variant variant_from_string(const std::string& s);

/// Surface density s(v) = lin v + quad v^2 + grad |grad v|^2 + bilap (lap v)^2,
/// already divided by the normalization constant.
struct SurfaceCoefficients {
  double lin = 0.0;
  double quad = 0.0;
  double grad = 0.0;
  double bilap = 0.0;
};

struct ModelParams {
  Variant variant = Variant::AT1;
  int order = 4;
  double rho = 1.0;      // bilaplacian weight, AT1 order 4 only
  double eps = 0.01;     // internal length, mm
  double eta = 1e-6;     // residual stiffness
  double c_norm = 0.0;   // normalization constant

  /// Fills c_norm (c_rho for AT1-4, 8/3 for AT1-2, 2 for AT2) and validates.
  static ModelParams make(Variant variant, int order, double rho, double eps, double eta = 1e-6);
  void validate() const;

  SurfaceCoefficients surface() const;
  /// Half-width of the damage band in units of eps (R*; 1 for AT2, which has no finite support).
  double support_radius() const;
  std::string name() const;
};

/// Symmetric 2x2 tensor; xy is the tensor (not engineering) shear component.
struct Sym2 {
  double xx = 0.0;
  double yy = 0.0;
  double xy = 0.0;

  double trace() const { return xx + yy; }
  double norm2() const { return xx * xx + yy * yy + 2.0 * xy * xy; }
  Sym2 operator+(const Sym2& o) const { return {xx + o.xx, yy + o.yy, xy + o.xy}; }
  Sym2 operator-(const Sym2& o) const { return {xx - o.xx, yy - o.yy, xy - o.xy}; }
  Sym2 operator*(double s) const { return {s * xx, s * yy, s * xy}; }
};

using Strain2 = Sym2;
using Stress2 = Sym2;

struct StrainSplit {
  Sym2 vol_plus;
  Sym2 vol_minus;
  Sym2 dev;
};

/// Traces with |tr| <= 1e-14 count as positive.
inline constexpr double kTraceTie = 1e-14;
inline bool is_tensile(double tr) { return tr >= -kTraceTie; }

StrainSplit split(const Strain2& strain);

struct EnergyDensity {
  double total;
  double plus;
  double minus;
};

inline double degradation(double v, double eta) { return (v - 1.0) * (v - 1.0) + eta; }

/// Throws DomainError when v leaves [0, 1] by more than 1e-10.
EnergyDensity energy_density(double v, const Strain2& strain, const Material& mat, double eta);
Stress2 stress(double v, const Strain2& strain, const Material& mat, double eta);
/// dW/dv = 2 (v - 1) W+.
double driving_force(double v, const Strain2& strain, const Material& mat);
double tensile_energy(const Strain2& strain, const Material& mat);

/// Per unit area; lap_v is ignored by second-order models.
double surface_integrand(double v, double grad_x, double grad_y, double lap_v, const ModelParams& model);

}  // namespace pfiga

#endif  // PFIGA_MECHANICS_HPP
