#pragma once

#include <string>
#include <vector>

#include "casimir/core.hpp"
#include "casimir/grating.hpp"
#include "casimir/lifshitz.hpp"
#include "casimir/quadrature.hpp"

namespace casimir {

/// Tensor grid over (xi, kz, kx). kz is folded onto (0, inf) with doubled
/// weights; kx covers the Brillouin zone (-pi/d, pi/d), or (0, pi/d) with
/// doubled weights when folded.
struct QuadratureGrid {
  QuadratureRule xi;
  QuadratureRule kz;
  QuadratureRule kx;
  bool kx_folded = false;

  std::size_t size() const { return xi.size() * kz.size() * kx.size(); }
  Wavevector node(std::size_t index) const;
  double weight(std::size_t index) const;
};

/// One node of the log-determinant integrand ln det(I - R1 K R2 K).
struct NodeValue {
  double logdet = 0.0;
  /// d/dL of logdet from dK/dL = -Gamma K.
  double dlogdet = 0.0;
  /// logdet at L - 2h, L - h, L + h, L + 2h.
  double shifted[4] = {0, 0, 0, 0};
  /// arg det(I - A); zero for an exact evaluation.
  double phase = 0.0;
  /// Spectral radius of the round-trip operator (0 if not checked).
  double spectral_radius = 0.0;
};

enum class Execution { Parallel, Serial };

struct EngineOptions {
  Execution execution = Execution::Parallel;
  int threads = 0;  // 0: OpenMP default
  SolverOptions solver;
  LifshitzOptions lifshitz{64, 64, 0.0, 1e-4, false};
  /// pressure() throws DerivativeMismatch when set; otherwise the mismatch
  /// is only reported in the diagnostics.
  bool enforce_derivative_check = true;
};

/// Evaluates the integrand at single nodes. Immutable after construction
/// and safe to call from several threads.
class CasimirIntegrand {
 public:
  CasimirIntegrand(ValidatedScene scene, NumericsSpec numerics, SolverOptions solver = {});

  /// kx is reduced into (-pi/d, pi/d] before the orders are built.
  NodeValue operator()(const Wavevector& k) const;

  const ValidatedScene& scene() const { return scene_; }
  const NumericsSpec& numerics() const { return numerics_; }
  double fd_step() const { return fd_step_; }

 private:
  ReflectionMatrix reflect(const GratingSpec& g, const Wavevector& k) const;

  ValidatedScene scene_;
  NumericsSpec numerics_;
  SolverOptions solver_;
  bool same_gratings_ = false;
  double fd_step_ = 0.0;
};

/// ln det(I - R1 K R2up K) at one node (real part).
double logdet_integrand(const ValidatedScene& scene, const NumericsSpec& numerics,
                        const Wavevector& k);

QuadratureGrid make_grid(const ValidatedScene& scene, const NumericsSpec& numerics,
                         bool fold_kx);

/// Data-parallel evaluation over every node of the grid.
std::vector<NodeValue> evaluate_nodes(const CasimirIntegrand& integrand, const QuadratureGrid& grid,
                                      const EngineOptions& options = {});
/// Single-threaded reference with identical results.
std::vector<NodeValue> evaluate_nodes_serial(const CasimirIntegrand& integrand,
                                             const QuadratureGrid& grid);

struct Diagnostics {
  int truncation = 0;
  int xi_nodes = 0;
  int kz_nodes = 0;
  int kx_nodes = 0;
  bool kx_folded = false;
  double kz_symmetry_error = 0.0;
  double kx_symmetry_error = 0.0;
  double max_logdet = 0.0;      // should be <= 0
  double max_phase = 0.0;       // max |arg det|
  double max_spectral_radius = 0.0;
  long nonpositive_determinants = 0;
  double derivative_mismatch = 0.0;  // |P - P_fd| / |P|
  double pfa_delta = 0.0;
};

struct ForceResult {
  double energy_per_area = 0.0;  // J/m^2
  double pressure = 0.0;         // N/m^2, analytic L-derivative
  double pressure_fd = 0.0;      // Richardson central difference
  double pfa_pressure = 0.0;
  double rho = 0.0;
  Diagnostics diagnostics;
};

double energy_per_area(const ValidatedScene& scene, const NumericsSpec& numerics,
                       const EngineOptions& options = {});

/// Full evaluation: energy, analytic and finite-difference pressure, PFA
/// and rho. Throws DerivativeMismatch when the two pressures disagree by
/// more than numerics.tolerance.
ForceResult pressure(const ValidatedScene& scene, const NumericsSpec& numerics,
                     const EngineOptions& options = {});

double rho(const ValidatedScene& scene, const NumericsSpec& numerics,
           const EngineOptions& options = {});

enum class ConvergenceAxis { Truncation, QuadXi, QuadKz, QuadKx };

ConvergenceAxis parse_convergence_axis(const std::string& name);
std::string to_string(ConvergenceAxis axis);

struct ConvergenceRow {
  int setting = 0;
  double energy = 0.0;
  double pressure = 0.0;
  double energy_delta = 0.0;    // relative to the previous row
  double pressure_delta = 0.0;
};

/// Increments N by 2 or doubles the node count of one axis, `steps` times.
std::vector<ConvergenceRow> convergence_scan(const ValidatedScene& scene,
                                             const NumericsSpec& numerics, ConvergenceAxis axis,
                                             int steps = 2, const EngineOptions& options = {});

}  // namespace casimir
