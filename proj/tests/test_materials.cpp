#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "casimir/constants.hpp"
#include "casimir/error.hpp"
#include "casimir/materials.hpp"

using namespace casimir;

namespace {

std::vector<double> log_grid() {
  std::vector<double> xs;
  for (double e = 12.0; e <= 18.0; e += 0.05) xs.push_back(std::pow(10.0, e));
  return xs;
}

void check_monotone(const MaterialModel& m) {
  double previous = m.permittivity(1e12);
  for (double xi : log_grid()) {
    const double eps = m.permittivity(xi);
    CHECK(eps >= 1.0);
    CHECK(eps <= previous);
    previous = eps;
  }
}

}  // namespace

TEST_CASE("plasma at xi = omega_p gives 2") {
  const auto m = MaterialModel::plasma("p", 3e15);
  CHECK(m.permittivity(3e15) == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("plasma at a tenth of omega_p gives 101") {
  const auto gold = MaterialModel::gold();
  const double wp = 9.0 * constants::eV_to_rad_per_s;
  CHECK(wp == doctest::Approx(1.36734e16).epsilon(1e-5));
  CHECK(gold.permittivity(wp / 10.0) == doctest::Approx(101.0).epsilon(1e-12));
}

TEST_CASE("plasma rejects xi = 0") {
  try {
    MaterialModel::gold().permittivity(0.0);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::PlasmaAtZeroFrequency);
  }
}

TEST_CASE("Drude-Lorentz static value is eps_inf + sum of strengths") {
  const auto m = MaterialModel::drude_lorentz("dl", 1.5, {{2.0, 1e15}, {3.5, 4e16}});
  CHECK(m.permittivity(0.0) == doctest::Approx(7.0));
  const auto si = MaterialModel::silicon();
  CHECK(si.permittivity(0.0) == doctest::Approx(11.87));
  CHECK(si.permittivity(1e22) == doctest::Approx(1.035).epsilon(1e-6));
}

TEST_CASE("vacuum is identically one") {
  const auto v = MaterialModel::vacuum();
  CHECK(v.is_vacuum());
  for (double xi : log_grid()) CHECK(v.permittivity(xi) == 1.0);
}

TEST_CASE("every model is >= 1 and non-increasing") {
  check_monotone(MaterialModel::gold());
  check_monotone(MaterialModel::silicon());
  check_monotone(MaterialModel::drude_lorentz("dl", 1.0, {{4.0, 2e15}, {1.0, 3e16}}));
  Table t{{1e11, 1e14, 1e17, 1e19}, {12.0, 11.0, 3.0, 1.2}, true, true};
  check_monotone(MaterialModel::table("t", t));
}

TEST_CASE("permittivity tends to one at large xi") {
  CHECK(MaterialModel::gold().permittivity(1e22) == doctest::Approx(1.0).epsilon(1e-9));
  Table t{{1e12, 1e15}, {5.0, 2.0}, false, true};
  CHECK(MaterialModel::table("t", t).permittivity(1e25) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("table interpolates in log xi and guards its ends") {
  Table t{{1e12, 1e14}, {10.0, 2.0}, false, false};
  const auto m = MaterialModel::table("t", t);
  CHECK(m.permittivity(1e13) == doctest::Approx(6.0));
  CHECK_THROWS_AS(m.permittivity(1e11), Error);
  CHECK_THROWS_AS(m.permittivity(1e15), Error);
  try {
    m.permittivity(1e15);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::TableOutOfRange);
  }
  Table held = t;
  held.static_asymptote = true;
  CHECK(MaterialModel::table("h", held).permittivity(1.0) == 10.0);
}

TEST_CASE("invalid models are rejected") {
  CHECK_THROWS_AS(MaterialModel::plasma("p", -1.0), Error);
  CHECK_THROWS_AS(MaterialModel::drude_lorentz("d", 0.5, {}), Error);
  CHECK_THROWS_AS(MaterialModel::table("t", Table{{1e12, 1e11}, {2.0, 1.5}}), Error);
  CHECK_THROWS_AS(MaterialModel::table("t", Table{{1e11, 1e12}, {2.0, 3.0}}), Error);
  CHECK_THROWS_AS(MaterialModel::table("t", Table{{1e11, 1e12}, {2.0, 0.5}}), Error);
}

TEST_CASE("material table file") {
  const auto path = std::filesystem::temp_directory_path() / "casimir_table_test.txt";
  {
    std::ofstream out(path);
    out << "# xi eps\n1e12 11.0\n\n1e14 9.5  # comment\n1e16 2.0\n";
  }
  const Table t = read_material_table(path);
  REQUIRE(t.xi.size() == 3);
  CHECK(t.eps[1] == 9.5);
  {
    std::ofstream out(path);
    out << "1e12 11.0\n1e14\n";
  }
  CHECK_THROWS_AS(read_material_table(path), Error);
  {
    std::ofstream out(path);
    out << "1e14 11.0\n1e12 10.0\n";
  }
  CHECK_THROWS_AS(read_material_table(path), Error);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(read_material_table(path), Error);
}
