#pragma once

#include <optional>

#include "casimir/core.hpp"
#include "casimir/materials.hpp"

namespace casimir {

/// Imaginary-axis Fresnel coefficients; TE in the E-field convention,
/// TM in the H-field convention.
struct FresnelPair {
  double te = 0.0;
  double tm = 0.0;
};

/// Vacuum | medium interface. xi and k_par in rad/m.
FresnelPair fresnel(double xi, double k_par, double eps);

/// Half-space, optionally coated with a film. The reflecting surface is
/// the top of the film.
struct Mirror {
  MaterialModel substrate;
  struct Film {
    MaterialModel material;
    double thickness = 0.0;  // m
  };
  std::optional<Film> film;

  static Mirror half_space(MaterialModel m) { return Mirror{std::move(m), std::nullopt}; }
};

/// Fresnel pair of a film-on-substrate mirror, referenced to the film top.
/// Permittivities are passed in already evaluated at this xi.
FresnelPair film_fresnel(double xi, double k_par, double eps_film, double thickness,
                         double eps_substrate);

struct LifshitzOptions {
  int xi_nodes = 64;
  int k_nodes = 64;
  /// rad/m; 0 selects 1 / L.
  double scale = 0.0;
  double tolerance = 1e-4;
  /// Throw QuadratureNotConverged when node doubling moves the result by
  /// more than `tolerance`; otherwise report the delta only.
  bool throw_on_unconverged = true;
};

struct LifshitzResult {
  double energy = 0.0;    // J/m^2
  double pressure = 0.0;  // N/m^2, negative = attractive
  double delta = 0.0;     // relative change under node doubling
};

LifshitzResult lifshitz(double distance, const Mirror& m1, const Mirror& m2,
                        const LifshitzOptions& options = {});

/// Plane-plane pressure between two half-spaces.
LifshitzResult lifshitz_pressure(double distance, const MaterialModel& m1,
                                 const MaterialModel& m2, const LifshitzOptions& options = {});

/// Ideal-mirror value -pi^2 hbar c / (240 L^4).
double ideal_casimir_pressure(double distance);

struct PfaBreakdown {
  double pressure = 0.0;
  // Area fractions and local separations of the four facing region kinds:
  // bar/bar, bar/trench, trench/bar, trench/trench (lower/upper).
  double fraction[4] = {0, 0, 0, 0};
  double separation[4] = {0, 0, 0, 0};
};

/// Proximity-force pressure for two lamellar gratings: area-fraction
/// weighted plane-plane pressures of the facing regions. For d1 = d/2,
/// equal depths a and s = 0 this is (F_PP(L) + F_PP(L - 2a)) / 2.
PfaBreakdown pfa_breakdown(const ValidatedScene& scene, const LifshitzOptions& options = {});
double pfa_pressure(const ValidatedScene& scene, const LifshitzOptions& options = {});

/// Sphere-plate force gradient 2 pi R F_PP (N/m for F_PP in N/m^2, R in m).
double sphere_gradient(double plane_pressure, double radius);

}  // namespace casimir
