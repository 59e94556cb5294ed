#include "casimir/core.hpp"

#include <cmath>
#include <string>

#include "casimir/error.hpp"

namespace casimir {

GratingSpec GratingSpec::plane(MaterialModel substrate, double period) {
  GratingSpec g;
  g.period = period;
  g.gap = period;
  g.depth = 0.0;
  g.substrate = std::move(substrate);
  return g;
}

void validate_grating(const GratingSpec& g) {
  if (!(g.period > 0.0) || !std::isfinite(g.period)) {
    throw Error(ErrorCode::NonPositivePeriod, "period must be > 0");
  }
  if (!(g.gap >= 0.0 && g.gap <= g.period)) {
    throw Error(ErrorCode::GapOutOfRange, "gap d1 must satisfy 0 <= d1 <= d");
  }
  if (!(g.depth >= 0.0) || !std::isfinite(g.depth)) {
    throw Error(ErrorCode::GapOutOfRange, "depth must be >= 0");
  }
  if (!(g.lateral_shift >= 0.0 && g.lateral_shift < g.period)) {
    throw Error(ErrorCode::GapOutOfRange, "lateral shift must satisfy 0 <= s < d");
  }
}

void validate_numerics(const NumericsSpec& n) {
  if (n.truncation < 0) throw Error(ErrorCode::InvalidNumerics, "truncation N must be >= 0");
  for (const auto* q : {&n.xi, &n.kz, &n.kx}) {
    if (q->nodes < 2) throw Error(ErrorCode::InvalidNumerics, "node counts must be >= 2");
    if (q->scale < 0.0) throw Error(ErrorCode::InvalidNumerics, "quadrature scales must be > 0");
  }
  if (!(n.fd_step > 0.0 && n.fd_step < 0.25)) {
    throw Error(ErrorCode::InvalidNumerics, "fd_step must lie in (0, 0.25)");
  }
  if (!(n.tolerance > 0.0)) throw Error(ErrorCode::InvalidNumerics, "tolerance must be > 0");
}

ValidatedScene validate_scene(const SceneSpec& scene, const NumericsSpec& numerics) {
  validate_numerics(numerics);
  validate_grating(scene.lower);
  validate_grating(scene.upper);

  const bool lower_flat = scene.lower.is_flat();
  const bool upper_flat = scene.upper.is_flat();
  if (!lower_flat && !upper_flat && scene.lower.period != scene.upper.period) {
    throw Error(ErrorCode::PeriodMismatch, "both gratings must share the period d");
  }

  const double gap = scene.distance - scene.lower.depth - scene.upper.depth;
  if (!(gap > 0.0)) {
    throw Error(ErrorCode::SlitNonPositive,
                "L = " + std::to_string(scene.distance) + " m leaves no vacuum slit");
  }

  ValidatedScene v;
  v.scene = scene;
  v.min_gap = gap;
  if (lower_flat && upper_flat) {
    // No physical period: any d works, but the 2N+1 orders must cover
    // |kx| up to (2N+1) pi / d, so tie it to the slit.
    v.period = gap;
  } else {
    v.period = lower_flat ? scene.upper.period : scene.lower.period;
  }
  v.filling_lower = scene.lower.filling();
  v.filling_upper = scene.upper.filling();
  return v;
}

ValidatedScene validate_scene(const ValidatedScene& scene, const NumericsSpec& numerics) {
  return validate_scene(scene.scene, numerics);
}

}  // namespace casimir
