#pragma once

#include "casimir/materials.hpp"

namespace casimir {

/// Lamellar grating on a half-space substrate. The substrate surface sits
/// at y = 0 and the bars fill 0 < y < depth; bars are centred on x = 0
/// within each period. Lengths in metres.
struct GratingSpec {
  double period = 0.0;         // d
  double gap = 0.0;            // d1, width of the vacuum trench
  double depth = 0.0;          // a
  MaterialModel bar = MaterialModel::vacuum();
  MaterialModel substrate = MaterialModel::vacuum();
  double lateral_shift = 0.0;  // s, only meaningful for the upper grating

  /// Fraction of the period occupied by bar material.
  double filling() const { return (period - gap) / period; }

  /// No corrugation: reflects like the bare substrate surface at y = 0.
  bool is_bare_surface() const { return depth == 0.0 || gap == period || bar.is_vacuum(); }

  /// Corrugation layer completely filled: a uniform film of `bar` on `substrate`.
  bool is_uniform_film() const { return !is_bare_surface() && gap == 0.0; }

  bool is_flat() const { return is_bare_surface() || is_uniform_film(); }

  bool operator==(const GratingSpec&) const = default;

  static GratingSpec plane(MaterialModel substrate, double period = 1.0);
};

struct SceneSpec {
  GratingSpec lower;
  GratingSpec upper;
  /// Distance between the two substrate surfaces (gap bottoms).
  double distance = 0.0;

  bool operator==(const SceneSpec&) const = default;
};

struct AxisQuadrature {
  int nodes = 0;
  /// Scale of the u/(1-u) map in rad/m; 0 selects 1 / (minimal vacuum slit).
  double scale = 0.0;

  bool operator==(const AxisQuadrature&) const = default;
};

struct NumericsSpec {
  int truncation = 8;  // Rayleigh orders m = -N..N
  AxisQuadrature xi{40, 0.0};
  AxisQuadrature kz{24, 0.0};
  AxisQuadrature kx{16, 0.0};  // scale unused
  /// Finite-difference step as a fraction of the minimal slit.
  double fd_step = 1e-2;
  /// Relative tolerance for convergence deltas and derivative cross-checks.
  double tolerance = 1e-3;
  /// Fold the k_x integral onto (0, pi/d) when the scene is mirror symmetric.
  bool fold_kx = true;
  /// Use closed-form reflection matrices for flat mirrors instead of the modal solver.
  bool analytic_flat = true;
  /// Check the spectral radius of the round-trip operator at every node.
  bool check_spectral_radius = false;

  bool operator==(const NumericsSpec&) const = default;
};

struct ValidatedScene {
  SceneSpec scene;
  double min_gap = 0.0;  // L - a_lower - a_upper
  double period = 0.0;   // common period; the minimal gap when both mirrors are flat
  double filling_lower = 0.0;
  double filling_upper = 0.0;

  bool operator==(const ValidatedScene&) const = default;
};

void validate_grating(const GratingSpec& g);
void validate_numerics(const NumericsSpec& n);

/// Throws casimir::Error on ill-posed input.
ValidatedScene validate_scene(const SceneSpec& scene, const NumericsSpec& numerics);
ValidatedScene validate_scene(const ValidatedScene& scene, const NumericsSpec& numerics);

}  // namespace casimir
