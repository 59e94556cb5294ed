#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace casimir {

// Permittivity models evaluated on the imaginary frequency axis, eps(i xi).
// All frequencies here are angular frequencies in rad/s.

struct Vacuum {};

struct Plasma {
  double omega_p;  // rad/s
};

struct Oscillator {
  double strength;  // dimensionless s_k
  double omega;     // rad/s
};

/// eps(i xi) = eps_inf + sum_k s_k w_k^2 / (w_k^2 + xi^2)
struct DrudeLorentz {
  double eps_inf = 1.0;
  std::vector<Oscillator> oscillators;
};

/// Sampled eps(i xi_j), linearly interpolated in log(xi).
struct Table {
  std::vector<double> xi;   // strictly increasing, > 0
  std::vector<double> eps;  // >= 1, non-increasing
  /// Below xi.front(): hold eps.front() (the static value).
  bool static_asymptote = false;
  /// Above xi.back(): 1 + (eps_last - 1) (xi_last / xi)^2.
  bool transparent_asymptote = false;
};

class MaterialModel {
 public:
  using Variant = std::variant<Vacuum, Plasma, DrudeLorentz, Table>;

  MaterialModel() = default;
  MaterialModel(std::string name, Variant model);

  static MaterialModel vacuum();
  static MaterialModel plasma(std::string name, double omega_p);
  static MaterialModel drude_lorentz(std::string name, double eps_inf,
                                     std::vector<Oscillator> oscillators);
  static MaterialModel table(std::string name, Table table);

  /// eps_inf = 1.035, eps_0 = 11.87, w_0 = 4.34 eV single-oscillator model
  /// for intrinsic silicon.
  static MaterialModel silicon();
  /// Plasma model with w_p = 9 eV.
  static MaterialModel gold();

  const std::string& name() const noexcept { return name_; }
  const Variant& model() const noexcept { return model_; }
  bool is_vacuum() const noexcept { return std::holds_alternative<Vacuum>(model_); }

  /// eps(i xi), xi in rad/s.
  double permittivity(double xi) const;

  bool operator==(const MaterialModel& other) const;

 private:
  std::string name_ = "vacuum";
  Variant model_ = Vacuum{};
};

double permittivity(const MaterialModel& model, double xi);

/// Two-column text: xi [rad/s], eps. '#' starts a comment.
Table read_material_table(const std::filesystem::path& path);

}  // namespace casimir
