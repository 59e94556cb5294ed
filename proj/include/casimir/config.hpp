#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "casimir/core.hpp"
#include "casimir/error.hpp"
#include "casimir/engine.hpp"

namespace casimir {

enum class Scenario { Lifshitz, GratingForce, RhoScan, Chan, Convergence };

Scenario parse_scenario(const std::string& name);
std::string to_string(Scenario scenario);

/// Sweep over one scene parameter. Values are in the axis' own unit (nm,
/// or orders for N).
///   d_nm    period of both gratings, trench widths scaled to keep d1/d
///   L_nm    distance between the substrate surfaces
///   sep_nm  minimal vacuum slit L - a_lower - a_upper
///   a_nm    depth of every corrugated grating
///   N       truncation
struct SweepSpec {
  std::string axis;
  std::vector<double> values;
};

struct RunConfig {
  Scenario scenario = Scenario::GratingForce;
  std::map<std::string, MaterialModel> materials;
  SceneSpec scene;
  NumericsSpec numerics;
  std::optional<SweepSpec> sweep;
  std::filesystem::path output = "casimir.csv";
  int threads = 0;
  double sphere_radius = 50e-6;  // m
  /// Re-evaluate every point at N + 2 and report the relative change.
  bool convergence_check = true;
  ConvergenceAxis convergence_axis = ConvergenceAxis::Truncation;
  int convergence_steps = 2;
};

/// Sets `path` (dot separated) to `value`; the value is parsed as JSON and
/// falls back to a plain string.
void apply_override(nlohmann::json& document, const std::string& assignment);

/// Relative paths inside the document (material tables) resolve against `base_dir`.
RunConfig parse_config(const nlohmann::json& document,
                       const std::filesystem::path& base_dir = {});

RunConfig load_config(const std::filesystem::path& path,
                      const std::vector<std::string>& overrides = {});

/// Scene after applying one sweep value.
SceneSpec apply_sweep(const SceneSpec& scene, NumericsSpec& numerics, const std::string& axis,
                      double value);

struct RunSummary {
  std::size_t rows = 0;
  std::size_t flagged = 0;
};

/// Runs the scenario and writes its CSV. Progress lines go to `log` unless
/// `quiet`. Throws casimir::Error.
RunSummary run(const RunConfig& config, std::ostream& log, bool quiet = false);

/// Exact header of the CSV written for a scenario.
std::vector<std::string> csv_columns(Scenario scenario);

/// 0 ok, 2 config error, 3 numerical error.
int exit_code_for(const Error& error);

}  // namespace casimir
