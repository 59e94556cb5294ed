#include "casimir/engine.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <exception>
#include <mutex>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "casimir/constants.hpp"
#include "casimir/error.hpp"

namespace casimir {

namespace {

using cplx = std::complex<double>;
using Eigen::Index;

double energy_prefactor() {
  const double two_pi = 2.0 * constants::pi;
  return constants::hbar * constants::c / (two_pi * two_pi * two_pi);
}

double relative_change(double a, double b) {
  if (a == b) return 0.0;
  return std::abs(a - b) / std::max(std::abs(a), std::abs(b));
}

struct LogDet {
  double value = 0.0;
  double phase = 0.0;
};

LogDet log_det(const Eigen::PartialPivLU<CMatrix>& lu) {
  const CMatrix& u = lu.matrixLU();
  double re = 0.0;
  double arg = lu.permutationP().determinant() < 0 ? constants::pi : 0.0;
  for (Index i = 0; i < u.rows(); ++i) {
    const cplx d = u(i, i);
    const double mag = std::abs(d);
    if (!(mag > 0.0) || !std::isfinite(mag)) {
      throw Error(ErrorCode::NonPositiveDeterminant, "det(I - R1 K R2 K) vanished");
    }
    re += std::log(mag);
    arg += std::arg(d);
  }
  arg = std::remainder(arg, 2.0 * constants::pi);
  return {re, arg};
}

double shift_of(const GratingSpec& upper) { return upper.is_flat() ? 0.0 : upper.lateral_shift; }

}  // namespace

Wavevector QuadratureGrid::node(std::size_t index) const {
  const std::size_t nk = kx.size();
  const std::size_t nz = kz.size();
  const std::size_t ix = index % nk;
  const std::size_t iz = (index / nk) % nz;
  const std::size_t ixi = index / (nk * nz);
  return {xi.nodes[ixi], kx.nodes[ix], kz.nodes[iz]};
}

double QuadratureGrid::weight(std::size_t index) const {
  const std::size_t nk = kx.size();
  const std::size_t nz = kz.size();
  const std::size_t ix = index % nk;
  const std::size_t iz = (index / nk) % nz;
  const std::size_t ixi = index / (nk * nz);
  return xi.weights[ixi] * kz.weights[iz] * kx.weights[ix];
}

CasimirIntegrand::CasimirIntegrand(ValidatedScene scene, NumericsSpec numerics,
                                   SolverOptions solver)
    : scene_(std::move(scene)), numerics_(std::move(numerics)), solver_(solver) {
  GratingSpec a = scene_.scene.lower;
  GratingSpec b = scene_.scene.upper;
  a.lateral_shift = b.lateral_shift = 0.0;
  same_gratings_ = (a == b);
  fd_step_ = numerics_.fd_step * scene_.min_gap;
}

ReflectionMatrix CasimirIntegrand::reflect(const GratingSpec& g, const Wavevector& k) const {
  GratingSpec local = g;
  local.period = scene_.period;
  const double omega = k.xi * constants::c;
  const double eps_bar = local.bar.permittivity(omega);
  const double eps_sub = local.substrate.permittivity(omega);
  const int n = numerics_.truncation;
  if (numerics_.analytic_flat && local.is_flat()) {
    return flat_reflection_matrix(local, eps_bar, eps_sub, k, n, ReferencePlane::Top);
  }
  SolverOptions solver = solver_;
  solver.reference = ReferencePlane::Top;
  return reflection_matrix(local, eps_bar, eps_sub, k, n, solver);
}

NodeValue CasimirIntegrand::operator()(const Wavevector& k_in) const {
  Wavevector k = k_in;
  const double d = scene_.period;
  const double zone = 2.0 * constants::pi / d;
  k.kx -= zone * std::round(k.kx / zone);
  if (k.kx <= -0.5 * zone) k.kx += zone;

  const int n = numerics_.truncation;
  const ReflectionMatrix r1 = reflect(scene_.scene.lower, k);
  const ReflectionMatrix r2 = same_gratings_ ? r1 : reflect(scene_.scene.upper, k);
  // Top-referenced matrices: propagate across the vacuum slit only.
  const double distance = scene_.scene.distance - r1.reference - r2.reference;
  const RVector K = propagation_K(k, distance, d, n);
  const CMatrix r2up = upper_reflection(r2, K, shift_of(scene_.scene.upper), d);

  const Index dim = r1.R.rows();
  const CMatrix I = CMatrix::Identity(dim, dim);
  const CMatrix A = r1.R * r2up;
  const Eigen::PartialPivLU<CMatrix> lu(I - A);
  const LogDet ld = log_det(lu);

  NodeValue out;
  out.logdet = ld.value;
  out.phase = ld.phase;
  if (std::abs(ld.phase) > 0.5 * constants::pi) {
    throw Error(ErrorCode::NonPositiveDeterminant,
                "det(I - R1 K R2 K) has phase " + std::to_string(ld.phase));
  }

  const RVector gamma1 = decay_constants(k, 1.0, d, n);
  RVector gamma(dim);
  gamma << gamma1, gamma1;
  // dA/dL = -(R1 Gamma R2up + A Gamma); d ln det(I - A)/dL = -tr((I - A)^-1 dA/dL)
  const CMatrix dA = -(r1.R * gamma.asDiagonal() * r2up + A * gamma.asDiagonal());
  out.dlogdet = -lu.solve(dA).trace().real();

  const double h = fd_step_;
  const double offsets[4] = {-2.0 * h, -h, h, 2.0 * h};
  for (int i = 0; i < 4; ++i) {
    const RVector f = (-offsets[i] * gamma.array()).exp().matrix();
    const CMatrix Ai = r1.R * (f.asDiagonal() * r2up * f.asDiagonal());
    out.shifted[i] = log_det(Eigen::PartialPivLU<CMatrix>(I - Ai)).value;
  }

  if (numerics_.check_spectral_radius) {
    const Eigen::ComplexEigenSolver<CMatrix> es(A, false);
    out.spectral_radius = es.eigenvalues().cwiseAbs().maxCoeff();
  }
  return out;
}

double logdet_integrand(const ValidatedScene& scene, const NumericsSpec& numerics,
                        const Wavevector& k) {
  return CasimirIntegrand(scene, numerics)(k).logdet;
}

QuadratureGrid make_grid(const ValidatedScene& scene, const NumericsSpec& numerics, bool fold_kx) {
  const double auto_scale = 1.0 / scene.min_gap;
  QuadratureGrid grid;
  grid.xi = semi_infinite(numerics.xi.nodes, numerics.xi.scale > 0 ? numerics.xi.scale : auto_scale);
  grid.kz = semi_infinite(numerics.kz.nodes, numerics.kz.scale > 0 ? numerics.kz.scale : auto_scale);
  for (double& w : grid.kz.weights) w *= 2.0;
  const double half_zone = constants::pi / scene.period;
  grid.kx_folded = fold_kx;
  if (fold_kx) {
    grid.kx = gauss_legendre(std::max(1, numerics.kx.nodes / 2), 0.0, half_zone);
    for (double& w : grid.kx.weights) w *= 2.0;
  } else {
    grid.kx = gauss_legendre(numerics.kx.nodes, -half_zone, half_zone);
  }
  return grid;
}

std::vector<NodeValue> evaluate_nodes(const CasimirIntegrand& integrand, const QuadratureGrid& grid,
                                      const EngineOptions& options) {
  if (options.execution == Execution::Serial) return evaluate_nodes_serial(integrand, grid);
  const long count = static_cast<long>(grid.size());
  std::vector<NodeValue> values(grid.size());
  std::exception_ptr failure;
  std::mutex failure_mutex;
#ifdef _OPENMP
  const int threads = options.threads > 0 ? options.threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 4) num_threads(threads)
#endif
  for (long i = 0; i < count; ++i) {
    try {
      values[i] = integrand(grid.node(static_cast<std::size_t>(i)));
    } catch (...) {
      std::lock_guard<std::mutex> lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return values;
}

std::vector<NodeValue> evaluate_nodes_serial(const CasimirIntegrand& integrand,
                                             const QuadratureGrid& grid) {
  std::vector<NodeValue> values;
  values.reserve(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) values.push_back(integrand(grid.node(i)));
  return values;
}

namespace {

// Both symmetries are exact for s = 0 mirror-symmetric profiles; the fold
// is only taken when a spot check confirms it.
struct SymmetryCheck {
  double kz_error = 0.0;
  double kx_error = 0.0;
};

SymmetryCheck spot_check(const CasimirIntegrand& integrand) {
  const double g = integrand.scene().min_gap;
  const double d = integrand.scene().period;
  const Wavevector k{0.7 / g, 0.31 * constants::pi / d, 0.45 / g};
  const double base = integrand(k).logdet;
  SymmetryCheck s;
  s.kz_error = relative_change(base, integrand({k.xi, k.kx, -k.kz}).logdet);
  s.kx_error = relative_change(base, integrand({k.xi, -k.kx, k.kz}).logdet);
  return s;
}

ForceResult integrate(const ValidatedScene& scene, const NumericsSpec& numerics,
                      const EngineOptions& options) {
  const CasimirIntegrand integrand(scene, numerics, options.solver);
  const SymmetryCheck sym = spot_check(integrand);
  const bool symmetric_setup = shift_of(scene.scene.upper) == 0.0;
  const bool fold = numerics.fold_kx && symmetric_setup && sym.kx_error < 1e-10;
  const QuadratureGrid grid = make_grid(scene, numerics, fold);
  const std::vector<NodeValue> values = evaluate_nodes(integrand, grid, options);

  ForceResult out;
  Diagnostics& diag = out.diagnostics;
  diag.truncation = numerics.truncation;
  diag.xi_nodes = static_cast<int>(grid.xi.size());
  diag.kz_nodes = static_cast<int>(grid.kz.size());
  diag.kx_nodes = static_cast<int>(grid.kx.size());
  diag.kx_folded = fold;
  diag.kz_symmetry_error = sym.kz_error;
  diag.kx_symmetry_error = sym.kx_error;
  diag.max_logdet = values.empty() ? 0.0 : values.front().logdet;

  // Fixed-order reduction: identical for any thread count.
  double energy = 0.0;
  double denergy = 0.0;
  double fd = 0.0;
  const double h = integrand.fd_step();
  for (std::size_t i = 0; i < values.size(); ++i) {
    const NodeValue& v = values[i];
    const double w = grid.weight(i);
    energy += w * v.logdet;
    denergy += w * v.dlogdet;
    fd += w * (8.0 * (v.shifted[2] - v.shifted[1]) - (v.shifted[3] - v.shifted[0])) / (12.0 * h);
    diag.max_logdet = std::max(diag.max_logdet, v.logdet);
    diag.max_phase = std::max(diag.max_phase, std::abs(v.phase));
    diag.max_spectral_radius = std::max(diag.max_spectral_radius, v.spectral_radius);
  }
  const double c = energy_prefactor();
  out.energy_per_area = c * energy;
  out.pressure = -c * denergy;
  out.pressure_fd = -c * fd;
  diag.derivative_mismatch = relative_change(out.pressure, out.pressure_fd);
  return out;
}

}  // namespace

double energy_per_area(const ValidatedScene& scene, const NumericsSpec& numerics,
                       const EngineOptions& options) {
  return integrate(scene, numerics, options).energy_per_area;
}

ForceResult pressure(const ValidatedScene& scene, const NumericsSpec& numerics,
                     const EngineOptions& options) {
  ForceResult out = integrate(scene, numerics, options);
  if (options.enforce_derivative_check &&
      out.diagnostics.derivative_mismatch > numerics.tolerance) {
    throw Error(ErrorCode::DerivativeMismatch,
                "analytic and finite-difference pressure differ by " +
                    std::to_string(out.diagnostics.derivative_mismatch));
  }
  const PfaBreakdown pfa = pfa_breakdown(scene, options.lifshitz);
  out.pfa_pressure = pfa.pressure;
  out.rho = pfa.pressure != 0.0 ? out.pressure / pfa.pressure : 0.0;
  return out;
}

double rho(const ValidatedScene& scene, const NumericsSpec& numerics,
           const EngineOptions& options) {
  return pressure(scene, numerics, options).rho;
}

ConvergenceAxis parse_convergence_axis(const std::string& name) {
  if (name == "N" || name == "truncation") return ConvergenceAxis::Truncation;
  if (name == "quad_xi" || name == "xi") return ConvergenceAxis::QuadXi;
  if (name == "quad_kz" || name == "kz") return ConvergenceAxis::QuadKz;
  if (name == "quad_kx" || name == "kx") return ConvergenceAxis::QuadKx;
  throw Error(ErrorCode::ConfigValidation, "unknown convergence axis '" + name + "'");
}

std::string to_string(ConvergenceAxis axis) {
  switch (axis) {
    case ConvergenceAxis::Truncation: return "N";
    case ConvergenceAxis::QuadXi: return "quad_xi";
    case ConvergenceAxis::QuadKz: return "quad_kz";
    case ConvergenceAxis::QuadKx: return "quad_kx";
  }
  return "?";
}

std::vector<ConvergenceRow> convergence_scan(const ValidatedScene& scene,
                                             const NumericsSpec& numerics, ConvergenceAxis axis,
                                             int steps, const EngineOptions& options) {
  std::vector<ConvergenceRow> rows;
  NumericsSpec current = numerics;
  for (int step = 0; step <= steps; ++step) {
    ConvergenceRow row;
    switch (axis) {
      case ConvergenceAxis::Truncation: row.setting = current.truncation; break;
      case ConvergenceAxis::QuadXi: row.setting = current.xi.nodes; break;
      case ConvergenceAxis::QuadKz: row.setting = current.kz.nodes; break;
      case ConvergenceAxis::QuadKx: row.setting = current.kx.nodes; break;
    }
    const ForceResult r = integrate(scene, current, options);
    row.energy = r.energy_per_area;
    row.pressure = r.pressure;
    if (!rows.empty()) {
      row.energy_delta = relative_change(rows.back().energy, row.energy);
      row.pressure_delta = relative_change(rows.back().pressure, row.pressure);
    }
    rows.push_back(row);
    switch (axis) {
      case ConvergenceAxis::Truncation: current.truncation += 2; break;
      case ConvergenceAxis::QuadXi: current.xi.nodes *= 2; break;
      case ConvergenceAxis::QuadKz: current.kz.nodes *= 2; break;
      case ConvergenceAxis::QuadKx: current.kx.nodes *= 2; break;
    }
  }
  return rows;
}

}  // namespace casimir
