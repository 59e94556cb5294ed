#include "casimir/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

#include "casimir/constants.hpp"
#include "casimir/error.hpp"
#include "casimir/lifshitz.hpp"

namespace casimir {

using nlohmann::json;

namespace {

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorCode::ConfigValidation, what); }

// Rejects keys outside `allowed` so that typos do not silently fall back to defaults.
void check_keys(const json& object, const std::string& where, std::set<std::string> allowed) {
  if (!object.is_object()) invalid(where + " must be an object");
  for (const auto& item : object.items()) {
    if (!allowed.count(item.key())) invalid("unknown key '" + item.key() + "' in " + where);
  }
}

template <typename T>
T get_or(const json& object, const std::string& key, T fallback, const std::string& where) {
  if (!object.contains(key)) return fallback;
  try {
    return object.at(key).get<T>();
  } catch (const json::exception&) {
    invalid("bad value for '" + key + "' in " + where);
  }
}

double required_number(const json& object, const std::string& key, const std::string& where) {
  if (!object.contains(key)) invalid("missing '" + key + "' in " + where);
  if (!object.at(key).is_number()) invalid("'" + key + "' in " + where + " must be a number");
  return object.at(key).get<double>();
}

double ev(double value) { return value * constants::eV_to_rad_per_s; }

MaterialModel preset(const std::string& name) {
  if (name == "silicon") return MaterialModel::silicon();
  if (name == "gold") return MaterialModel::gold();
  if (name == "vacuum") return MaterialModel::vacuum();
  invalid("unknown material preset '" + name + "'");
}

MaterialModel parse_material(const std::string& name, const json& j,
                             const std::filesystem::path& base_dir) {
  const std::string where = "materials." + name;
  if (j.is_string()) return preset(j.get<std::string>());
  if (!j.is_object()) invalid(where + " must be a preset name or an object");
  if (j.contains("preset")) {
    check_keys(j, where, {"preset"});
    return preset(get_or<std::string>(j, "preset", "", where));
  }
  const std::string model = get_or<std::string>(j, "model", "", where);
  if (model == "vacuum") {
    check_keys(j, where, {"model"});
    return MaterialModel::vacuum();
  }
  if (model == "plasma") {
    check_keys(j, where, {"model", "omega_p_eV"});
    return MaterialModel::plasma(name, ev(required_number(j, "omega_p_eV", where)));
  }
  if (model == "drude_lorentz") {
    check_keys(j, where, {"model", "eps_inf", "oscillators"});
    std::vector<Oscillator> oscillators;
    const json list = get_or<json>(j, "oscillators", json::array(), where);
    if (!list.is_array()) invalid(where + ".oscillators must be an array");
    for (const json& o : list) {
      check_keys(o, where + ".oscillators", {"strength", "omega_eV"});
      oscillators.push_back({required_number(o, "strength", where + ".oscillators"),
                             ev(required_number(o, "omega_eV", where + ".oscillators"))});
    }
    return MaterialModel::drude_lorentz(name, get_or<double>(j, "eps_inf", 1.0, where),
                                        std::move(oscillators));
  }
  if (model == "table") {
    check_keys(j, where, {"model", "path", "static_asymptote", "transparent_asymptote"});
    std::filesystem::path path = get_or<std::string>(j, "path", "", where);
    if (path.empty()) invalid(where + " needs a 'path'");
    if (path.is_relative()) path = base_dir / path;
    Table table = read_material_table(path);
    table.static_asymptote = get_or<bool>(j, "static_asymptote", false, where);
    table.transparent_asymptote = get_or<bool>(j, "transparent_asymptote", false, where);
    return MaterialModel::table(name, std::move(table));
  }
  invalid(where + ": unknown model '" + model + "'");
}

const MaterialModel& lookup(const std::map<std::string, MaterialModel>& materials,
                            const std::string& name, const std::string& where) {
  const auto it = materials.find(name);
  if (it == materials.end()) invalid(where + " refers to unknown material '" + name + "'");
  return it->second;
}

GratingSpec parse_grating(const json& j, const std::map<std::string, MaterialModel>& materials,
                          const std::string& where, std::optional<double> default_period) {
  if (j.contains("plane")) {
    check_keys(j, where, {"plane"});
    const MaterialModel& m = lookup(materials, get_or<std::string>(j, "plane", "", where), where);
    return GratingSpec::plane(m, default_period.value_or(1.0));
  }
  check_keys(j, where, {"period_nm", "gap_nm", "depth_nm", "bar", "substrate", "shift_nm"});
  GratingSpec g;
  if (j.contains("period_nm")) {
    g.period = required_number(j, "period_nm", where) * constants::nm;
  } else if (default_period) {
    g.period = *default_period;
  } else {
    invalid("missing 'period_nm' in " + where);
  }
  g.gap = get_or<double>(j, "gap_nm", 0.0, where) * constants::nm;
  g.depth = get_or<double>(j, "depth_nm", 0.0, where) * constants::nm;
  g.lateral_shift = get_or<double>(j, "shift_nm", 0.0, where) * constants::nm;
  const std::string substrate = get_or<std::string>(j, "substrate", "vacuum", where);
  g.substrate = lookup(materials, substrate, where);
  // Bars default to the substrate material, the usual etched-grating case.
  g.bar = lookup(materials, get_or<std::string>(j, "bar", substrate, where), where);
  return g;
}

AxisQuadrature parse_axis(const json& n, const std::string& prefix, AxisQuadrature q) {
  q.nodes = get_or<int>(n, prefix + "_nodes", q.nodes, "numerics");
  // Config gives the length l of the map u/(1-u) * (1/l); 0 keeps the default.
  const double length_nm = get_or<double>(n, prefix + "_scale_nm", 0.0, "numerics");
  if (length_nm < 0.0) invalid("numerics." + prefix + "_scale_nm must be >= 0");
  q.scale = length_nm > 0.0 ? 1.0 / (length_nm * constants::nm) : 0.0;
  return q;
}

NumericsSpec parse_numerics(const json& n) {
  check_keys(n, "numerics",
             {"N", "xi_nodes", "xi_scale_nm", "kz_nodes", "kz_scale_nm", "kx_nodes", "fd_step",
              "tolerance", "fold_kx", "analytic_flat", "check_spectral_radius"});
  NumericsSpec out;
  out.truncation = get_or<int>(n, "N", out.truncation, "numerics");
  out.xi = parse_axis(n, "xi", out.xi);
  out.kz = parse_axis(n, "kz", out.kz);
  out.kx.nodes = get_or<int>(n, "kx_nodes", out.kx.nodes, "numerics");
  out.fd_step = get_or<double>(n, "fd_step", out.fd_step, "numerics");
  out.tolerance = get_or<double>(n, "tolerance", out.tolerance, "numerics");
  out.fold_kx = get_or<bool>(n, "fold_kx", out.fold_kx, "numerics");
  out.analytic_flat = get_or<bool>(n, "analytic_flat", out.analytic_flat, "numerics");
  out.check_spectral_radius =
      get_or<bool>(n, "check_spectral_radius", out.check_spectral_radius, "numerics");
  return out;
}

const std::set<std::string> kSweepAxes = {"d_nm", "L_nm", "sep_nm", "a_nm", "N"};

SweepSpec parse_sweep(const json& s) {
  check_keys(s, "sweep", {"axis", "values", "range"});
  SweepSpec out;
  out.axis = get_or<std::string>(s, "axis", "", "sweep");
  if (!kSweepAxes.count(out.axis)) invalid("sweep axis '" + out.axis + "' is not a scene parameter");
  if (s.contains("values") == s.contains("range")) invalid("sweep needs exactly one of 'values' or 'range'");
  if (s.contains("values")) {
    out.values = get_or<std::vector<double>>(s, "values", {}, "sweep");
  } else {
    const json& r = s.at("range");
    check_keys(r, "sweep.range", {"start", "stop", "count", "spacing"});
    const double start = required_number(r, "start", "sweep.range");
    const double stop = required_number(r, "stop", "sweep.range");
    const int count = get_or<int>(r, "count", 0, "sweep.range");
    const std::string spacing = get_or<std::string>(r, "spacing", "linear", "sweep.range");
    if (count < 1) invalid("sweep.range.count must be >= 1");
    if (spacing != "linear" && spacing != "log") invalid("sweep.range.spacing must be linear or log");
    if (spacing == "log" && !(start > 0.0 && stop > 0.0)) invalid("log range needs positive ends");
    for (int i = 0; i < count; ++i) {
      const double t = count == 1 ? 0.0 : double(i) / (count - 1);
      out.values.push_back(spacing == "log"
                               ? std::exp(std::log(start) + t * (std::log(stop) - std::log(start)))
                               : start + t * (stop - start));
    }
  }
  if (out.values.empty()) invalid("sweep has no values");
  return out;
}

json parse_scalar(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception&) {
    return json(text);
  }
}

// ---- output ----

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10e", v);
  return buf;
}

std::string status_of(double conv_delta, double mismatch, double tolerance) {
  std::string s;
  if (std::isnan(conv_delta)) {
    s = "unchecked";
  } else if (conv_delta > tolerance) {
    s = "unconverged";
  }
  if (mismatch > tolerance) s += s.empty() ? "derivative_mismatch" : "+derivative_mismatch";
  return s.empty() ? "ok" : s;
}

bool flagged(const std::string& status) { return status != "ok"; }

double relative_delta(double a, double b) {
  if (a == b) return 0.0;
  return std::abs(a - b) / std::max(std::abs(a), std::abs(b));
}

struct PointResult {
  ForceResult force;
  double conv_delta = std::nan("");
  std::string status;
};

PointResult evaluate_point(const SceneSpec& scene, const NumericsSpec& numerics,
                           const RunConfig& config, const EngineOptions& options) {
  const ValidatedScene v = validate_scene(scene, numerics);
  PointResult out;
  out.force = pressure(v, numerics, options);
  if (config.convergence_check) {
    NumericsSpec finer = numerics;
    finer.truncation += 2;
    const ForceResult next = pressure(v, finer, options);
    out.conv_delta = relative_delta(out.force.pressure, next.pressure);
  }
  out.status = status_of(out.conv_delta, out.force.diagnostics.derivative_mismatch,
                         numerics.tolerance);
  return out;
}

std::string strip_code(const Error& e) {
  const std::string msg = e.what();
  const auto pos = msg.find(": ");
  return pos == std::string::npos ? msg : msg.substr(pos + 2);
}

Mirror flat_mirror(const GratingSpec& g) {
  if (g.is_bare_surface()) return Mirror::half_space(g.substrate);
  if (g.is_uniform_film()) return Mirror{g.substrate, Mirror::Film{g.bar, g.depth}};
  invalid("the lifshitz scenario needs flat mirrors (depth 0, no trenches, or no bars)");
}

class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& columns)
      : path_(path), out_(path) {
    if (!out_) throw Error(ErrorCode::ConfigValidation, "cannot write " + path.string());
    for (std::size_t i = 0; i < columns.size(); ++i) out_ << (i ? "," : "") << columns[i];
    out_ << '\n';
  }

  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
    out_ << '\n';
    out_.flush();
  }

 private:
  std::filesystem::path path_;
  std::ofstream out_;
};

double nm(double metres) { return metres / constants::nm; }

}  // namespace

Scenario parse_scenario(const std::string& name) {
  if (name == "lifshitz") return Scenario::Lifshitz;
  if (name == "grating-force") return Scenario::GratingForce;
  if (name == "rho-scan") return Scenario::RhoScan;
  if (name == "chan") return Scenario::Chan;
  if (name == "convergence") return Scenario::Convergence;
  invalid("unknown scenario '" + name + "'");
}

std::string to_string(Scenario scenario) {
  switch (scenario) {
    case Scenario::Lifshitz: return "lifshitz";
    case Scenario::GratingForce: return "grating-force";
    case Scenario::RhoScan: return "rho-scan";
    case Scenario::Chan: return "chan";
    case Scenario::Convergence: return "convergence";
  }
  return "?";
}

std::vector<std::string> csv_columns(Scenario scenario) {
  switch (scenario) {
    case Scenario::Lifshitz: return {"L_nm", "E_J_m2", "P_Nm2", "conv_delta", "status"};
    case Scenario::GratingForce:
      return {"L_nm",  "sep_nm",          "E_J_m2",     "P_Nm2", "P_fd_Nm2",
              "P_pfa_Nm2", "rho", "deriv_mismatch", "conv_delta", "status"};
    case Scenario::RhoScan:
      return {"d_nm", "L_nm", "a_nm", "d1_nm", "F_exact_Nm2", "F_pfa_Nm2", "rho", "conv_delta",
              "status"};
    case Scenario::Chan:
      return {"sep_nm", "F_pp_Nm2", "F_grad_pN_per_um", "rho", "conv_delta", "status"};
    case Scenario::Convergence:
      return {"axis", "setting", "E_J_m2", "P_Nm2", "E_delta", "P_delta", "status"};
  }
  return {};
}

void apply_override(json& document, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw Error(ErrorCode::ConfigParse, "override '" + assignment + "' is not key=value");
  }
  const std::string path = assignment.substr(0, eq);
  json* node = &document;
  std::size_t start = 0;
  while (true) {
    const auto dot = path.find('.', start);
    const std::string key = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (key.empty()) throw Error(ErrorCode::ConfigParse, "empty key in override '" + path + "'");
    if (!node->is_object()) {
      throw Error(ErrorCode::ConfigParse, "override path '" + path + "' crosses a non-object");
    }
    node = &(*node)[key];
    if (dot == std::string::npos) break;
    start = dot + 1;
  }
  *node = parse_scalar(assignment.substr(eq + 1));
}

RunConfig parse_config(const json& doc, const std::filesystem::path& base_dir) {
  check_keys(doc, "config",
             {"scenario", "materials", "scene", "numerics", "sweep", "output", "threads",
              "sphere_radius_um", "convergence"});
  RunConfig cfg;
  cfg.scenario = parse_scenario(get_or<std::string>(doc, "scenario", "", "config"));

  cfg.materials = {{"silicon", MaterialModel::silicon()},
                   {"gold", MaterialModel::gold()},
                   {"vacuum", MaterialModel::vacuum()}};
  if (doc.contains("materials") && !doc.at("materials").is_object()) invalid("materials must be an object");
  const json materials = get_or<json>(doc, "materials", json::object(), "config");
  for (const auto& item : materials.items()) {
    cfg.materials[item.key()] = parse_material(item.key(), item.value(), base_dir);
  }

  if (!doc.contains("scene")) invalid("missing 'scene'");
  const json& scene = doc.at("scene");
  check_keys(scene, "scene", {"lower", "upper", "L_nm", "sep_nm"});
  if (!scene.contains("lower") || !scene.contains("upper")) invalid("scene needs 'lower' and 'upper'");
  cfg.scene.lower = parse_grating(scene.at("lower"), cfg.materials, "scene.lower", std::nullopt);
  cfg.scene.upper = parse_grating(scene.at("upper"), cfg.materials, "scene.upper",
                                  cfg.scene.lower.period);
  if (scene.contains("L_nm") == scene.contains("sep_nm")) invalid("scene needs exactly one of L_nm or sep_nm");
  if (scene.contains("L_nm")) {
    cfg.scene.distance = required_number(scene, "L_nm", "scene") * constants::nm;
  } else {
    cfg.scene.distance = required_number(scene, "sep_nm", "scene") * constants::nm +
                         cfg.scene.lower.depth + cfg.scene.upper.depth;
  }

  cfg.numerics = parse_numerics(get_or<json>(doc, "numerics", json::object(), "config"));
  if (doc.contains("sweep")) cfg.sweep = parse_sweep(doc.at("sweep"));
  cfg.output = get_or<std::string>(doc, "output", cfg.output.string(), "config");
  cfg.threads = get_or<int>(doc, "threads", 0, "config");
  if (cfg.threads < 0) invalid("threads must be >= 0");
  cfg.sphere_radius = get_or<double>(doc, "sphere_radius_um", 50.0, "config") * constants::um;
  if (!(cfg.sphere_radius > 0.0)) invalid("sphere_radius_um must be > 0");

  const json conv = get_or<json>(doc, "convergence", json::object(), "config");
  check_keys(conv, "convergence", {"check", "axis", "steps"});
  cfg.convergence_check = get_or<bool>(conv, "check", true, "convergence");
  cfg.convergence_axis = parse_convergence_axis(get_or<std::string>(conv, "axis", "N", "convergence"));
  cfg.convergence_steps = get_or<int>(conv, "steps", 2, "convergence");
  if (cfg.convergence_steps < 1) invalid("convergence.steps must be >= 1");

  if (cfg.scenario == Scenario::Convergence && cfg.sweep) invalid("the convergence scenario takes no sweep");
  if (cfg.scenario == Scenario::Lifshitz && cfg.sweep && cfg.sweep->axis != "L_nm" &&
      cfg.sweep->axis != "sep_nm") {
    invalid("the lifshitz scenario sweeps L_nm or sep_nm only");
  }

  // Fail early on geometry problems instead of at the first sweep point.
  NumericsSpec numerics = cfg.numerics;
  if (cfg.sweep) {
    for (double value : cfg.sweep->values) {
      NumericsSpec n = cfg.numerics;
      validate_scene(apply_sweep(cfg.scene, n, cfg.sweep->axis, value), n);
    }
  } else {
    validate_scene(cfg.scene, numerics);
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path, const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ConfigParse, "cannot open " + path.string());
  json doc;
  try {
    doc = json::parse(in, nullptr, true, true);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ConfigParse, path.string() + ": " + e.what());
  }
  for (const std::string& o : overrides) apply_override(doc, o);
  return parse_config(doc, path.parent_path());
}

SceneSpec apply_sweep(const SceneSpec& scene, NumericsSpec& numerics, const std::string& axis,
                      double value) {
  SceneSpec out = scene;
  if (axis == "d_nm") {
    const double d = value * constants::nm;
    for (GratingSpec* g : {&out.lower, &out.upper}) {
      g->gap = g->period > 0.0 ? g->gap / g->period * d : d;
      g->lateral_shift = g->period > 0.0 ? g->lateral_shift / g->period * d : 0.0;
      g->period = d;
    }
  } else if (axis == "L_nm") {
    out.distance = value * constants::nm;
  } else if (axis == "sep_nm") {
    out.distance = value * constants::nm + out.lower.depth + out.upper.depth;
  } else if (axis == "a_nm") {
    for (GratingSpec* g : {&out.lower, &out.upper}) {
      if (!g->is_bare_surface()) g->depth = value * constants::nm;
    }
  } else if (axis == "N") {
    if (value != std::round(value)) invalid("sweep over N needs integer values");
    numerics.truncation = static_cast<int>(value);
  } else {
    invalid("sweep axis '" + axis + "' is not a scene parameter");
  }
  return out;
}

int exit_code_for(const Error& error) { return error.is_input_error() ? 2 : 3; }

RunSummary run(const RunConfig& config, std::ostream& log, bool quiet) {
  EngineOptions options;
  options.threads = config.threads;
  options.enforce_derivative_check = false;
  options.lifshitz.tolerance = config.numerics.tolerance;

  CsvWriter csv(config.output, csv_columns(config.scenario));
  RunSummary summary;
  auto emit = [&](const std::vector<std::string>& cells, const std::string& status,
                  const std::string& line) {
    csv.row(cells);
    ++summary.rows;
    if (flagged(status)) ++summary.flagged;
    if (!quiet) log << line << " status=" << status << '\n' << std::flush;
  };

  if (config.scenario == Scenario::Convergence) {
    const ValidatedScene v = validate_scene(config.scene, config.numerics);
    const auto rows = convergence_scan(v, config.numerics, config.convergence_axis,
                                       config.convergence_steps, options);
    const std::string axis = to_string(config.convergence_axis);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const ConvergenceRow& r = rows[i];
      const std::string status =
          i == 0 ? "reference" : (r.pressure_delta > config.numerics.tolerance ? "unconverged" : "ok");
      emit({axis, std::to_string(r.setting), fmt(r.energy), fmt(r.pressure), fmt(r.energy_delta),
            fmt(r.pressure_delta), status},
           status == "reference" ? "ok" : status,
           axis + "=" + std::to_string(r.setting) + " P=" + fmt(r.pressure) +
               " P_delta=" + fmt(r.pressure_delta));
    }
    return summary;
  }

  std::vector<double> values;
  std::string axis;
  if (config.sweep) {
    axis = config.sweep->axis;
    values = config.sweep->values;
  } else {
    values = {std::nan("")};
  }

  for (double value : values) {
    NumericsSpec numerics = config.numerics;
    const SceneSpec scene = axis.empty() ? config.scene : apply_sweep(config.scene, numerics, axis, value);
    const std::string point = axis.empty() ? std::string("point") : axis + "=" + fmt(value);
    try {
      const ValidatedScene v = validate_scene(scene, numerics);
      const double L = nm(scene.distance);
      switch (config.scenario) {
        case Scenario::Lifshitz: {
          LifshitzOptions lo = options.lifshitz;
          const LifshitzResult r = lifshitz(scene.distance, flat_mirror(scene.lower),
                                            flat_mirror(scene.upper), lo);
          const std::string status = status_of(r.delta, 0.0, config.numerics.tolerance);
          emit({fmt(L), fmt(r.energy), fmt(r.pressure), fmt(r.delta), status}, status,
               point + " P=" + fmt(r.pressure));
          break;
        }
        case Scenario::GratingForce: {
          const PointResult p = evaluate_point(scene, numerics, config, options);
          const ForceResult& f = p.force;
          emit({fmt(L), fmt(nm(v.min_gap)), fmt(f.energy_per_area), fmt(f.pressure),
                fmt(f.pressure_fd), fmt(f.pfa_pressure), fmt(f.rho),
                fmt(f.diagnostics.derivative_mismatch), fmt(p.conv_delta), p.status},
               p.status, point + " P=" + fmt(f.pressure) + " rho=" + fmt(f.rho));
          break;
        }
        case Scenario::RhoScan: {
          const PointResult p = evaluate_point(scene, numerics, config, options);
          const ForceResult& f = p.force;
          // F columns are attractive force per area (positive for attraction).
          emit({fmt(nm(scene.lower.period)), fmt(L), fmt(nm(scene.lower.depth)),
                fmt(nm(scene.lower.gap)), fmt(-f.pressure), fmt(-f.pfa_pressure), fmt(f.rho),
                fmt(p.conv_delta), p.status},
               p.status, point + " rho=" + fmt(f.rho));
          break;
        }
        case Scenario::Chan: {
          const PointResult p = evaluate_point(scene, numerics, config, options);
          const ForceResult& f = p.force;
          const double gradient = sphere_gradient(-f.pressure, config.sphere_radius);
          // N/m -> pN/um
          const double gradient_pn_um = gradient * 1e6;
          emit({fmt(nm(v.min_gap)), fmt(-f.pressure), fmt(gradient_pn_um), fmt(f.rho),
                fmt(p.conv_delta), p.status},
               p.status, point + " F_pp=" + fmt(-f.pressure) + " F'=" + fmt(gradient_pn_um));
          break;
        }
        case Scenario::Convergence: break;
      }
    } catch (const Error& e) {
      throw Error(e.code(), point + ": " + strip_code(e));
    }
  }
  return summary;
}

}  // namespace casimir
