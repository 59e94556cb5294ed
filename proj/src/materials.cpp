#include "casimir/materials.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "casimir/constants.hpp"
#include "casimir/error.hpp"

namespace casimir {

namespace {

double eval(const Vacuum&, double) { return 1.0; }

double eval(const Plasma& m, double xi) {
  if (!(xi > 0.0)) {
    throw Error(ErrorCode::PlasmaAtZeroFrequency, "plasma permittivity diverges at xi = 0");
  }
  const double r = m.omega_p / xi;
  return 1.0 + r * r;
}

double eval(const DrudeLorentz& m, double xi) {
  double eps = m.eps_inf;
  for (const auto& osc : m.oscillators) {
    const double w2 = osc.omega * osc.omega;
    eps += osc.strength * w2 / (w2 + xi * xi);
  }
  return eps;
}

double eval(const Table& t, double xi) {
  if (xi < t.xi.front()) {
    if (!t.static_asymptote) {
      throw Error(ErrorCode::TableOutOfRange, "xi below table range");
    }
    return t.eps.front();
  }
  if (xi > t.xi.back()) {
    if (!t.transparent_asymptote) {
      throw Error(ErrorCode::TableOutOfRange, "xi above table range");
    }
    const double r = t.xi.back() / xi;
    return 1.0 + (t.eps.back() - 1.0) * r * r;
  }
  const auto it = std::upper_bound(t.xi.begin(), t.xi.end(), xi);
  if (it == t.xi.end()) return t.eps.back();
  const auto hi = static_cast<std::size_t>(it - t.xi.begin());
  const auto lo = hi - 1;
  const double u = std::log(xi / t.xi[lo]) / std::log(t.xi[hi] / t.xi[lo]);
  return t.eps[lo] + u * (t.eps[hi] - t.eps[lo]);
}

void check_table(const Table& t) {
  if (t.xi.size() < 2 || t.xi.size() != t.eps.size()) {
    throw Error(ErrorCode::InvalidMaterial, "table needs >= 2 rows of (xi, eps)");
  }
  for (std::size_t i = 0; i < t.xi.size(); ++i) {
    if (!(t.xi[i] > 0.0)) throw Error(ErrorCode::InvalidMaterial, "table xi must be positive");
    if (t.eps[i] < 1.0) throw Error(ErrorCode::InvalidMaterial, "table eps must be >= 1");
    if (i > 0 && !(t.xi[i] > t.xi[i - 1])) {
      throw Error(ErrorCode::InvalidMaterial, "table xi must be strictly increasing");
    }
    if (i > 0 && t.eps[i] > t.eps[i - 1]) {
      throw Error(ErrorCode::InvalidMaterial, "eps(i xi) must be non-increasing in xi");
    }
  }
}

}  // namespace

MaterialModel::MaterialModel(std::string name, Variant model)
    : name_(std::move(name)), model_(std::move(model)) {
  std::visit(
      [](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, Plasma>) {
          if (!(m.omega_p > 0.0)) throw Error(ErrorCode::InvalidMaterial, "omega_p must be > 0");
        } else if constexpr (std::is_same_v<T, DrudeLorentz>) {
          if (m.eps_inf < 1.0) throw Error(ErrorCode::InvalidMaterial, "eps_inf must be >= 1");
          for (const auto& o : m.oscillators) {
            if (o.strength < 0.0 || !(o.omega > 0.0)) {
              throw Error(ErrorCode::InvalidMaterial, "oscillators need strength >= 0, omega > 0");
            }
          }
        } else if constexpr (std::is_same_v<T, Table>) {
          check_table(m);
        }
      },
      model_);
}

MaterialModel MaterialModel::vacuum() { return {}; }

MaterialModel MaterialModel::plasma(std::string name, double omega_p) {
  return {std::move(name), Plasma{omega_p}};
}

MaterialModel MaterialModel::drude_lorentz(std::string name, double eps_inf,
                                           std::vector<Oscillator> oscillators) {
  return {std::move(name), DrudeLorentz{eps_inf, std::move(oscillators)}};
}

MaterialModel MaterialModel::table(std::string name, Table table) {
  return {std::move(name), std::move(table)};
}

MaterialModel MaterialModel::silicon() {
  constexpr double eps_inf = 1.035;
  constexpr double eps_0 = 11.87;
  return drude_lorentz("silicon", eps_inf,
                       {{eps_0 - eps_inf, 4.34 * constants::eV_to_rad_per_s}});
}

MaterialModel MaterialModel::gold() {
  return plasma("gold", 9.0 * constants::eV_to_rad_per_s);
}

double MaterialModel::permittivity(double xi) const {
  if (xi < 0.0) throw Error(ErrorCode::InvalidMaterial, "xi must be >= 0");
  return std::visit([xi](const auto& m) { return eval(m, xi); }, model_);
}

bool MaterialModel::operator==(const MaterialModel& other) const {
  if (name_ != other.name_ || model_.index() != other.model_.index()) return false;
  return std::visit(
      [&other](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        const auto& o = std::get<T>(other.model_);
        if constexpr (std::is_same_v<T, Vacuum>) {
          return true;
        } else if constexpr (std::is_same_v<T, Plasma>) {
          return m.omega_p == o.omega_p;
        } else if constexpr (std::is_same_v<T, DrudeLorentz>) {
          if (m.eps_inf != o.eps_inf || m.oscillators.size() != o.oscillators.size()) return false;
          for (std::size_t i = 0; i < m.oscillators.size(); ++i) {
            if (m.oscillators[i].strength != o.oscillators[i].strength ||
                m.oscillators[i].omega != o.oscillators[i].omega) {
              return false;
            }
          }
          return true;
        } else {
          return m.xi == o.xi && m.eps == o.eps && m.static_asymptote == o.static_asymptote &&
                 m.transparent_asymptote == o.transparent_asymptote;
        }
      },
      model_);
}

double permittivity(const MaterialModel& model, double xi) { return model.permittivity(xi); }

Table read_material_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidMaterial, "cannot open table " + path.string());
  Table t;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ss(line);
    double xi = 0.0;
    double eps = 0.0;
    if (!(ss >> xi)) continue;
    if (!(ss >> eps)) {
      throw Error(ErrorCode::InvalidMaterial,
                  path.string() + ":" + std::to_string(lineno) + ": expected two columns");
    }
    t.xi.push_back(xi);
    t.eps.push_back(eps);
  }
  check_table(t);
  return t;
}

}  // namespace casimir
