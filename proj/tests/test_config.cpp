#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "casimir/config.hpp"
#include "casimir/constants.hpp"
#include "casimir/error.hpp"

using namespace casimir;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir() {
  const fs::path dir = fs::temp_directory_path() / "casimir_config_tests";
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

json grating_doc() {
  return json::parse(R"({
    "scenario": "rho-scan",
    "scene": {
      "lower": {"period_nm": 100, "gap_nm": 50, "depth_nm": 100, "substrate": "silicon"},
      "upper": {"period_nm": 100, "gap_nm": 50, "depth_nm": 100, "substrate": "silicon"},
      "L_nm": 250
    },
    "numerics": {"N": 1, "xi_nodes": 6, "kz_nodes": 4, "kx_nodes": 4},
    "sweep": {"axis": "d_nm", "values": [100, 200]}
  })");
}

ErrorCode code_of(const json& doc) {
  try {
    parse_config(doc);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::NonPositiveDeterminant;
}

}  // namespace

TEST_CASE("CSV schemas") {
  using V = std::vector<std::string>;
  CHECK(csv_columns(Scenario::RhoScan) ==
        V{"d_nm", "L_nm", "a_nm", "d1_nm", "F_exact_Nm2", "F_pfa_Nm2", "rho", "conv_delta", "status"});
  CHECK(csv_columns(Scenario::Chan) ==
        V{"sep_nm", "F_pp_Nm2", "F_grad_pN_per_um", "rho", "conv_delta", "status"});
  CHECK(csv_columns(Scenario::Lifshitz) == V{"L_nm", "E_J_m2", "P_Nm2", "conv_delta", "status"});
}

TEST_CASE("config parsing converts units and resolves materials") {
  json doc = grating_doc();
  doc["materials"] = {{"au", {{"model", "plasma"}, {"omega_p_eV", 9.0}}},
                      {"dl", {{"model", "drude_lorentz"}, {"eps_inf", 1.5}, {"oscillators", {{{"strength", 2.0}, {"omega_eV", 3.0}}}}}}};
  doc["scene"]["upper"] = {{"plane", "au"}};
  doc["scene"]["lower"]["bar"] = "dl";
  const RunConfig c = parse_config(doc);
  CHECK(c.scenario == Scenario::RhoScan);
  CHECK(c.scene.lower.period == doctest::Approx(100e-9));
  CHECK(c.scene.distance == doctest::Approx(250e-9));
  CHECK(c.scene.upper.is_bare_surface());
  CHECK(c.scene.upper.period == c.scene.lower.period);
  CHECK(c.scene.lower.bar.permittivity(0.0) == doctest::Approx(3.5));
  CHECK(c.materials.at("au").permittivity(0.9 * constants::eV_to_rad_per_s) == doctest::Approx(101.0));
  CHECK(c.numerics.truncation == 1);
  REQUIRE(c.sweep);
  CHECK(c.sweep->values == std::vector<double>{100, 200});
}

TEST_CASE("separation is measured from the top of the bars") {
  json doc = grating_doc();
  doc["scene"].erase("L_nm");
  doc["scene"]["sep_nm"] = 50;
  CHECK(parse_config(doc).scene.distance == doctest::Approx(250e-9));
  doc["scene"]["L_nm"] = 250;
  CHECK(code_of(doc) == ErrorCode::ConfigValidation);
}

TEST_CASE("sweeps") {
  json doc = grating_doc();
  doc["sweep"] = {{"axis", "L_nm"}, {"range", {{"start", 250}, {"stop", 1000}, {"count", 3}, {"spacing", "log"}}}};
  const RunConfig c = parse_config(doc);
  REQUIRE(c.sweep->values.size() == 3);
  CHECK(c.sweep->values[1] == doctest::Approx(500.0));

  NumericsSpec n;
  const SceneSpec s = apply_sweep(c.scene, n, "d_nm", 400);
  CHECK(s.lower.period == doctest::Approx(400e-9));
  CHECK(s.lower.gap == doctest::Approx(200e-9));
  CHECK(apply_sweep(c.scene, n, "a_nm", 60).upper.depth == doctest::Approx(60e-9));
  CHECK(apply_sweep(c.scene, n, "sep_nm", 60).distance == doctest::Approx(260e-9));
  apply_sweep(c.scene, n, "N", 7);
  CHECK(n.truncation == 7);

  doc["sweep"] = {{"axis", "colour"}, {"values", {1}}};
  CHECK(code_of(doc) == ErrorCode::ConfigValidation);
  doc["sweep"] = {{"axis", "L_nm"}, {"values", {150}}};  // no slit left
  CHECK(code_of(doc) == ErrorCode::SlitNonPositive);
}

TEST_CASE("config errors") {
  json doc = grating_doc();
  doc["scenario"] = "nope";
  CHECK(code_of(doc) == ErrorCode::ConfigValidation);
  doc = grating_doc();
  doc["numerics"]["N_typo"] = 3;
  CHECK(code_of(doc) == ErrorCode::ConfigValidation);
  doc = grating_doc();
  doc["scene"]["lower"]["substrate"] = "unobtainium";
  CHECK(code_of(doc) == ErrorCode::ConfigValidation);
  doc = grating_doc();
  doc["scene"]["upper"]["period_nm"] = 120;
  CHECK_NOTHROW(parse_config(doc));  // a d sweep sets both periods
  doc.erase("sweep");
  CHECK(code_of(doc) == ErrorCode::PeriodMismatch);
  doc = grating_doc();
  doc["numerics"]["xi_nodes"] = 1;
  CHECK(code_of(doc) == ErrorCode::InvalidNumerics);
}

TEST_CASE("overrides") {
  json doc = grating_doc();
  apply_override(doc, "numerics.N=4");
  apply_override(doc, "scene.lower.substrate=gold");
  apply_override(doc, "sweep.values=[300]");
  CHECK(doc["numerics"]["N"] == 4);
  CHECK(doc["scene"]["lower"]["substrate"] == "gold");
  const RunConfig c = parse_config(doc);
  CHECK(c.numerics.truncation == 4);
  CHECK(c.sweep->values == std::vector<double>{300});
  CHECK_THROWS_AS(apply_override(doc, "novalue"), Error);
  CHECK_THROWS_AS(apply_override(doc, "numerics.N.x=1"), Error);
}

TEST_CASE("lifshitz scenario with vacuum gives a zero force column") {
  const fs::path out = scratch_dir() / "vac.csv";
  json doc = json::parse(R"({
    "scenario": "lifshitz",
    "scene": {"lower": {"plane": "vacuum"}, "upper": {"plane": "gold"}, "L_nm": 100},
    "sweep": {"axis": "L_nm", "values": [50, 100, 200]}
  })");
  RunConfig c = parse_config(doc);
  c.output = out;
  std::ostringstream log;
  const RunSummary s = run(c, log, true);
  CHECK(s.rows == 3);
  CHECK(log.str().empty());
  const auto rows = read_csv(out);
  REQUIRE(rows.size() == 4);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK(std::stod(rows[i][2]) == 0.0);
    CHECK(rows[i][4] == "ok");
  }
}

TEST_CASE("grating scenarios write their schema and rerun byte-identically") {
  const fs::path dir = scratch_dir();
  json doc = grating_doc();
  RunConfig c = parse_config(doc);
  c.output = dir / "rho_a.csv";
  std::ostringstream log;
  run(c, log);
  c.output = dir / "rho_b.csv";
  run(c, log);
  CHECK(slurp(dir / "rho_a.csv") == slurp(dir / "rho_b.csv"));
  const auto rows = read_csv(dir / "rho_a.csv");
  REQUIRE(rows.size() == 3);
  CHECK(rows[0] == csv_columns(Scenario::RhoScan));
  CHECK(std::stod(rows[1][0]) == doctest::Approx(100.0));
  CHECK(std::stod(rows[2][3]) == doctest::Approx(100.0));  // d1 follows d
  CHECK(std::stod(rows[1][4]) > 0.0);                      // attraction
  CHECK(!std::isnan(std::stod(rows[1][7])));
  CHECK(rows[1][1] == "2.5000000000e+02");
  CHECK(log.str().find("status=") != std::string::npos);

  // coarse numerics with a tight tolerance: flagged, not dropped
  doc["numerics"]["tolerance"] = 1e-12;
  c = parse_config(doc);
  c.output = dir / "flagged.csv";
  const RunSummary s = run(c, log, true);
  CHECK(s.rows == 2);
  CHECK(s.flagged == 2);
  CHECK(read_csv(c.output)[1].back() != "ok");

  doc = grating_doc();
  doc["scenario"] = "chan";
  doc["scene"]["upper"] = {{"plane", "gold"}};
  doc["sweep"] = {{"axis", "sep_nm"}, {"values", {150}}};
  c = parse_config(doc);
  c.output = dir / "chan.csv";
  run(c, log, true);
  const auto chan = read_csv(c.output);
  REQUIRE(chan.size() == 2);
  CHECK(chan[0] == csv_columns(Scenario::Chan));
  // F' = 2 pi R F_pp with R = 50 um, reported in pN/um
  CHECK(std::stod(chan[1][2]) == doctest::Approx(2 * constants::pi * 50e-6 * std::stod(chan[1][1]) * 1e6));

  doc = grating_doc();
  doc["scenario"] = "convergence";
  doc.erase("sweep");
  doc["convergence"] = {{"axis", "quad_kz"}, {"steps", 1}};
  c = parse_config(doc);
  c.output = dir / "conv.csv";
  run(c, log, true);
  const auto conv = read_csv(c.output);
  REQUIRE(conv.size() == 3);
  CHECK(conv[1][0] == "quad_kz");
  CHECK(conv[2][1] == "8");
}

#ifdef CASIMIR_CLI_PATH
TEST_CASE("command line exit codes") {
  const fs::path dir = scratch_dir();
  const fs::path cfg = dir / "cli.json";
  {
    json doc = json::parse(R"({
      "scenario": "lifshitz",
      "scene": {"lower": {"plane": "silicon"}, "upper": {"plane": "gold"}, "L_nm": 100}
    })");
    std::ofstream(cfg) << doc.dump(2);
  }
  const std::string cli = CASIMIR_CLI_PATH;
  auto status = [&](const std::string& args) {
    const int raw = std::system((cli + " " + args + " > /dev/null 2>&1").c_str());
    return WEXITSTATUS(raw);
  };
  const fs::path out = dir / "cli.csv";
  CHECK(status("--config " + cfg.string() + " --output " + out.string()) == 0);
  CHECK(read_csv(out)[0] == csv_columns(Scenario::Lifshitz));
  CHECK(status("--config " + cfg.string() + " --output " + out.string() +
               " --override scene.L_nm=300 --override threads=1 --quiet") == 0);
  CHECK(read_csv(out)[1][0] == "3.0000000000e+02");
  CHECK(status("--config " + cfg.string() + " --override scene.bogus=1") == 2);
  CHECK(status("--config " + (dir / "missing.json").string()) == 2);
  CHECK(status("") == 2);
  {
    std::ofstream(cfg) << "{ not json";
  }
  CHECK(status("--config " + cfg.string()) == 2);
}
#endif
