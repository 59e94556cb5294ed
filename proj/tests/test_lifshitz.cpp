#include <doctest.h>

#include <cmath>

#include "casimir/constants.hpp"
#include "casimir/error.hpp"
#include "casimir/lifshitz.hpp"

using namespace casimir;
using constants::nm;

namespace {

MaterialModel near_perfect() { return MaterialModel::drude_lorentz("ideal", 1e8, {}); }

GratingSpec si_grating(double d, double a) {
  GratingSpec g;
  g.period = d;
  g.gap = d / 2;
  g.depth = a;
  g.bar = g.substrate = MaterialModel::silicon();
  return g;
}

}  // namespace

TEST_CASE("Fresnel coefficients") {
  const double k = 1e6;  // 1 rad/um
  const FresnelPair r = fresnel(k, k, 2.0);
  CHECK(r.te == doctest::Approx((std::sqrt(2.0) - std::sqrt(3.0)) / (std::sqrt(2.0) + std::sqrt(3.0))));
  CHECK(r.te == doctest::Approx(-0.10102).epsilon(1e-4));
  CHECK(r.tm == doctest::Approx((2 * std::sqrt(2.0) - std::sqrt(3.0)) / (2 * std::sqrt(2.0) + std::sqrt(3.0))));

  const FresnelPair none = fresnel(k, 3 * k, 1.0);
  CHECK(none.te == 0.0);
  CHECK(none.tm == 0.0);

  const FresnelPair mirror = fresnel(k, 0.5 * k, 1e12);
  CHECK(mirror.te == doctest::Approx(-1.0).epsilon(1e-5));
  CHECK(mirror.tm == doctest::Approx(1.0).epsilon(1e-5));

  CHECK_THROWS_AS(fresnel(0.0, 0.0, 2.0), Error);
}

TEST_CASE("Fresnel magnitudes stay below one") {
  for (double eps : {1.5, 11.87, 1e3}) {
    for (double ratio : {0.01, 1.0, 100.0}) {
      const FresnelPair r = fresnel(1e7, ratio * 1e7, eps);
      CHECK(r.te < 0.0);
      CHECK(r.te > -1.0);
      CHECK(r.tm > 0.0);
      CHECK(r.tm < 1.0);
    }
  }
}

TEST_CASE("film of zero thickness or of substrate material") {
  const double xi = 2e7;
  const double kp = 3e7;
  const FresnelPair bare = fresnel(xi, kp, 7.0);
  const FresnelPair thin = film_fresnel(xi, kp, 3.0, 0.0, 7.0);
  CHECK(thin.te == doctest::Approx(bare.te).epsilon(1e-14));
  CHECK(thin.tm == doctest::Approx(bare.tm).epsilon(1e-14));
  const FresnelPair same = film_fresnel(xi, kp, 7.0, 100 * nm, 7.0);
  CHECK(same.te == doctest::Approx(bare.te).epsilon(1e-14));
  CHECK(same.tm == doctest::Approx(bare.tm).epsilon(1e-14));
  const FresnelPair thick = film_fresnel(xi, kp, 3.0, 1e-3, 7.0);
  const FresnelPair film_only = fresnel(xi, kp, 3.0);
  CHECK(thick.te == doctest::Approx(film_only.te).epsilon(1e-12));
}

TEST_CASE("ideal-mirror limit") {
  for (double L : {0.1e-6, 1e-6, 10e-6}) {
    const LifshitzResult r = lifshitz_pressure(L, near_perfect(), near_perfect());
    const double ideal = ideal_casimir_pressure(L);
    CHECK(std::abs(r.pressure / ideal - 1.0) < 5e-3);
    CHECK(r.energy < 0.0);
  }
  CHECK(ideal_casimir_pressure(1e-6) == doctest::Approx(-1.3002e-3).epsilon(1e-4));
}

TEST_CASE("vacuum on either side gives zero") {
  const auto r = lifshitz_pressure(100 * nm, MaterialModel::vacuum(), MaterialModel::gold());
  CHECK(r.pressure == 0.0);
  CHECK(r.energy == 0.0);
}

TEST_CASE("pressure decreases with distance") {
  const auto gold = MaterialModel::gold();
  double previous = 0.0;
  bool first = true;
  for (double L : {50 * nm, 100 * nm, 500 * nm, 1000 * nm, 5000 * nm}) {
    const double p = lifshitz_pressure(L, gold, gold).pressure;
    CHECK(p < 0.0);
    if (!first) CHECK(std::abs(p) < std::abs(previous));
    previous = p;
    first = false;
  }
  const double near = lifshitz_pressure(100 * nm, gold, gold).pressure;
  const double far = lifshitz_pressure(1000 * nm, gold, gold).pressure;
  CHECK(std::abs(far) < std::abs(near));
}

TEST_CASE("exchange symmetry") {
  const auto a = lifshitz_pressure(180 * nm, MaterialModel::silicon(), MaterialModel::gold());
  const auto b = lifshitz_pressure(180 * nm, MaterialModel::gold(), MaterialModel::silicon());
  CHECK(a.pressure == doctest::Approx(b.pressure).epsilon(1e-14));
  CHECK(a.energy == doctest::Approx(b.energy).epsilon(1e-14));
}

TEST_CASE("analytic pressure matches a difference of energies") {
  const auto si = MaterialModel::silicon();
  const double L = 250 * nm;
  const double h = 0.5 * nm;
  LifshitzOptions o;
  o.scale = 1.0 / L;
  const double ep = lifshitz_pressure(L + h, si, si, o).energy;
  const double em = lifshitz_pressure(L - h, si, si, o).energy;
  const double p = lifshitz_pressure(L, si, si, o).pressure;
  CHECK(-(ep - em) / (2 * h) == doctest::Approx(p).epsilon(1e-5));
}

TEST_CASE("unconverged quadrature is an error when requested") {
  LifshitzOptions o;
  o.xi_nodes = 2;
  o.k_nodes = 2;
  o.tolerance = 1e-12;
  try {
    lifshitz_pressure(100 * nm, MaterialModel::gold(), MaterialModel::gold(), o);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::QuadratureNotConverged);
  }
  o.throw_on_unconverged = false;
  CHECK(lifshitz_pressure(100 * nm, MaterialModel::gold(), MaterialModel::gold(), o).delta > 1e-12);
}

TEST_CASE("PFA for flat mirrors is the plane-plane value") {
  const auto si = MaterialModel::silicon();
  const SceneSpec scene{GratingSpec::plane(si, 100 * nm), GratingSpec::plane(si, 100 * nm), 250 * nm};
  const auto v = validate_scene(scene, NumericsSpec{});
  CHECK(pfa_pressure(v) == doctest::Approx(lifshitz_pressure(250 * nm, si, si).pressure).epsilon(1e-14));
}

TEST_CASE("PFA for half-filled gratings averages the two separations") {
  const auto si = MaterialModel::silicon();
  const auto g = si_grating(100 * nm, 100 * nm);
  const auto v = validate_scene(SceneSpec{g, g, 250 * nm}, NumericsSpec{});
  const PfaBreakdown b = pfa_breakdown(v);
  const double expected = 0.5 * (lifshitz_pressure(250 * nm, si, si).pressure +
                                 lifshitz_pressure(50 * nm, si, si).pressure);
  CHECK(b.pressure == doctest::Approx(expected).epsilon(1e-12));
  CHECK(b.fraction[0] == doctest::Approx(0.5));
  CHECK(b.fraction[3] == doctest::Approx(0.5));
  CHECK(b.separation[0] == doctest::Approx(50 * nm));
}

TEST_CASE("PFA does not depend on the period and is swap symmetric") {
  const double ref = pfa_pressure(validate_scene(
      SceneSpec{si_grating(50 * nm, 100 * nm), si_grating(50 * nm, 100 * nm), 250 * nm}, NumericsSpec{}));
  for (double d : {100 * nm, 1000 * nm}) {
    const double p = pfa_pressure(
        validate_scene(SceneSpec{si_grating(d, 100 * nm), si_grating(d, 100 * nm), 250 * nm}, NumericsSpec{}));
    CHECK(p == doctest::Approx(ref).epsilon(1e-14));
  }
  auto lower = si_grating(400 * nm, 980 * nm);
  lower.gap = 196 * nm;
  const auto plate = GratingSpec::plane(MaterialModel::gold(), 400 * nm);
  const double a = pfa_pressure(validate_scene(SceneSpec{lower, plate, 1130 * nm}, NumericsSpec{}));
  const double b = pfa_pressure(validate_scene(SceneSpec{plate, lower, 1130 * nm}, NumericsSpec{}));
  CHECK(a == doctest::Approx(b).epsilon(1e-14));
}

TEST_CASE("PFA area fractions follow the lateral shift") {
  auto lower = si_grating(100 * nm, 50 * nm);
  auto upper = lower;
  upper.lateral_shift = 50 * nm;  // bars face trenches
  const PfaBreakdown b = pfa_breakdown(validate_scene(SceneSpec{lower, upper, 250 * nm}, NumericsSpec{}));
  CHECK(b.fraction[0] == doctest::Approx(0.0));
  CHECK(b.fraction[1] == doctest::Approx(0.5));
  CHECK(b.fraction[2] == doctest::Approx(0.5));
}

TEST_CASE("sphere gradient") {
  CHECK(sphere_gradient(0.51, 50e-6) == doctest::Approx(1.602e-4).epsilon(1e-3));
  CHECK(sphere_gradient(0.0, 50e-6) == 0.0);
  CHECK(sphere_gradient(0.3, 100e-6) == doctest::Approx(2.0 * sphere_gradient(0.3, 50e-6)));
}
