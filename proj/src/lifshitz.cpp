#include "casimir/lifshitz.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "casimir/constants.hpp"
#include "casimir/error.hpp"
#include "casimir/quadrature.hpp"

namespace casimir {

namespace {

struct Interface {
  double te;
  double tm;
};

// Reflection at an interface from medium i into medium j.
Interface interface(double gamma_i, double eps_i, double gamma_j, double eps_j) {
  return {(gamma_i - gamma_j) / (gamma_i + gamma_j),
          (eps_j * gamma_i - eps_i * gamma_j) / (eps_j * gamma_i + eps_i * gamma_j)};
}

struct EvaluatedMirror {
  double eps_sub = 1.0;
  double eps_film = 1.0;
  double thickness = 0.0;
  bool has_film = false;

  FresnelPair reflect(double xi, double k) const {
    if (has_film) return film_fresnel(xi, k, eps_film, thickness, eps_sub);
    return fresnel(xi, k, eps_sub);
  }
};

EvaluatedMirror evaluate(const Mirror& m, double xi) {
  EvaluatedMirror e;
  const double omega = xi * constants::c;
  e.eps_sub = m.substrate.permittivity(omega);
  if (m.film && m.film->thickness > 0.0) {
    e.has_film = true;
    e.eps_film = m.film->material.permittivity(omega);
    e.thickness = m.film->thickness;
  }
  return e;
}

LifshitzResult integrate(double distance, const Mirror& m1, const Mirror& m2, int n_xi, int n_k,
                         double scale) {
  const QuadratureRule xs = semi_infinite(n_xi, scale);
  const QuadratureRule ks = semi_infinite(n_k, scale);
  double energy = 0.0;
  double dE = 0.0;  // d(E/A)/dL without prefactor
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double xi = xs.nodes[i];
    const EvaluatedMirror e1 = evaluate(m1, xi);
    const EvaluatedMirror e2 = evaluate(m2, xi);
    double inner_e = 0.0;
    double inner_d = 0.0;
    for (std::size_t j = 0; j < ks.size(); ++j) {
      const double k = ks.nodes[j];
      const double kappa = std::hypot(xi, k);
      const double decay = std::exp(-2.0 * kappa * distance);
      const FresnelPair r1 = e1.reflect(xi, k);
      const FresnelPair r2 = e2.reflect(xi, k);
      double f = 0.0;
      double g = 0.0;
      for (const double rr : {r1.te * r2.te, r1.tm * r2.tm}) {
        const double x = rr * decay;
        f += std::log1p(-x);
        g += 2.0 * kappa * x / (1.0 - x);
      }
      inner_e += ks.weights[j] * k * f;
      inner_d += ks.weights[j] * k * g;
    }
    energy += xs.weights[i] * inner_e;
    dE += xs.weights[i] * inner_d;
  }
  const double prefactor = constants::hbar * constants::c / (4.0 * constants::pi * constants::pi);
  // P = -d(E/A)/dL; d/dL ln(1 - x) = 2 kappa x / (1 - x).
  return {prefactor * energy, -prefactor * dE, 0.0};
}

double relative_change(double a, double b) {
  if (a == b) return 0.0;
  return std::abs(a - b) / std::max(std::abs(a), std::abs(b));
}

}  // namespace

FresnelPair fresnel(double xi, double k_par, double eps) {
  if (xi == 0.0 && k_par == 0.0) {
    throw Error(ErrorCode::DegenerateMomentum, "fresnel needs xi > 0 or k_par > 0");
  }
  const double kappa = std::hypot(xi, k_par);
  // eps == 1 must give exact zeros, not a rounding difference of two roots.
  const double kappa_m = eps == 1.0 ? kappa : std::sqrt(eps * xi * xi + k_par * k_par);
  const Interface r = interface(kappa, 1.0, kappa_m, eps);
  return {r.te, r.tm};
}

FresnelPair film_fresnel(double xi, double k_par, double eps_film, double thickness,
                         double eps_substrate) {
  if (xi == 0.0 && k_par == 0.0) {
    throw Error(ErrorCode::DegenerateMomentum, "fresnel needs xi > 0 or k_par > 0");
  }
  const double g0 = std::hypot(xi, k_par);
  const double g1 = eps_film == 1.0 ? g0 : std::sqrt(eps_film * xi * xi + k_par * k_par);
  const double g2 = eps_substrate == 1.0 ? g0 : std::sqrt(eps_substrate * xi * xi + k_par * k_par);
  const Interface r01 = interface(g0, 1.0, g1, eps_film);
  const Interface r12 = interface(g1, eps_film, g2, eps_substrate);
  const double phase = std::exp(-2.0 * g1 * thickness);
  return {(r01.te + r12.te * phase) / (1.0 + r01.te * r12.te * phase),
          (r01.tm + r12.tm * phase) / (1.0 + r01.tm * r12.tm * phase)};
}

LifshitzResult lifshitz(double distance, const Mirror& m1, const Mirror& m2,
                        const LifshitzOptions& options) {
  if (!(distance > 0.0)) throw Error(ErrorCode::SlitNonPositive, "Lifshitz distance must be > 0");
  if (m1.substrate.is_vacuum() && (!m1.film || m1.film->material.is_vacuum())) return {};
  if (m2.substrate.is_vacuum() && (!m2.film || m2.film->material.is_vacuum())) return {};
  const double scale = options.scale > 0.0 ? options.scale : 1.0 / distance;
  LifshitzResult coarse = integrate(distance, m1, m2, options.xi_nodes, options.k_nodes, scale);
  LifshitzResult fine =
      integrate(distance, m1, m2, 2 * options.xi_nodes, 2 * options.k_nodes, scale);
  fine.delta = std::max(relative_change(coarse.energy, fine.energy),
                        relative_change(coarse.pressure, fine.pressure));
  if (options.throw_on_unconverged && fine.delta > options.tolerance) {
    throw Error(ErrorCode::QuadratureNotConverged,
                "Lifshitz node doubling changed the result by " + std::to_string(fine.delta));
  }
  return fine;
}

LifshitzResult lifshitz_pressure(double distance, const MaterialModel& m1,
                                 const MaterialModel& m2, const LifshitzOptions& options) {
  return lifshitz(distance, Mirror::half_space(m1), Mirror::half_space(m2), options);
}

double ideal_casimir_pressure(double distance) {
  const double l2 = distance * distance;
  return -constants::pi * constants::pi * constants::hbar * constants::c / (240.0 * l2 * l2);
}

namespace {

// Length of [a0, a1] intersected with the periodic images of [b0, b1].
double periodic_overlap(double a0, double a1, double b0, double b1, double period) {
  double total = 0.0;
  for (int k = -2; k <= 2; ++k) {
    const double lo = std::max(a0, b0 + k * period);
    const double hi = std::min(a1, b1 + k * period);
    if (hi > lo) total += hi - lo;
  }
  return total;
}

Mirror bar_mirror(const GratingSpec& g) {
  if (g.bar == g.substrate) return Mirror::half_space(g.substrate);
  return Mirror{g.substrate, Mirror::Film{g.bar, g.depth}};
}

double effective_filling(const GratingSpec& g) {
  if (g.is_bare_surface()) return 0.0;
  return g.filling();
}

}  // namespace

PfaBreakdown pfa_breakdown(const ValidatedScene& vs, const LifshitzOptions& options) {
  const SceneSpec& s = vs.scene;
  const double f1 = effective_filling(s.lower);
  const double f2 = effective_filling(s.upper);
  const double d = vs.period;
  // Lower bar centred at 0, upper bar centred at -s.
  const double w1 = f1 * d;
  const double w2 = f2 * d;
  const double shift = s.upper.is_flat() ? 0.0 : s.upper.lateral_shift;
  const double bb =
      (w1 > 0.0 && w2 > 0.0)
          ? periodic_overlap(-0.5 * w1, 0.5 * w1, -shift - 0.5 * w2, -shift + 0.5 * w2, d) / d
          : 0.0;

  PfaBreakdown out;
  out.fraction[0] = bb;
  out.fraction[1] = f1 - bb;
  out.fraction[2] = f2 - bb;
  out.fraction[3] = 1.0 - f1 - f2 + bb;

  const double a1 = f1 > 0.0 ? s.lower.depth : 0.0;
  const double a2 = f2 > 0.0 ? s.upper.depth : 0.0;
  out.separation[0] = s.distance - a1 - a2;
  out.separation[1] = s.distance - a1;
  out.separation[2] = s.distance - a2;
  out.separation[3] = s.distance;

  const Mirror lower_bar = bar_mirror(s.lower);
  const Mirror upper_bar = bar_mirror(s.upper);
  const Mirror lower_trench = Mirror::half_space(s.lower.substrate);
  const Mirror upper_trench = Mirror::half_space(s.upper.substrate);
  const std::array<std::pair<const Mirror*, const Mirror*>, 4> pairs{{
      {&lower_bar, &upper_bar},
      {&lower_bar, &upper_trench},
      {&lower_trench, &upper_bar},
      {&lower_trench, &upper_trench},
  }};
  for (int i = 0; i < 4; ++i) {
    if (out.fraction[i] <= 1e-15) {
      out.fraction[i] = std::max(out.fraction[i], 0.0);
      continue;
    }
    if (!(out.separation[i] > 0.0)) {
      throw Error(ErrorCode::SlitNonPositive, "PFA region with non-positive separation");
    }
    LifshitzOptions local = options;
    local.scale = 0.0;
    out.pressure +=
        out.fraction[i] * lifshitz(out.separation[i], *pairs[i].first, *pairs[i].second, local).pressure;
  }
  return out;
}

double pfa_pressure(const ValidatedScene& scene, const LifshitzOptions& options) {
  return pfa_breakdown(scene, options).pressure;
}

double sphere_gradient(double plane_pressure, double radius) {
  return 2.0 * constants::pi * radius * plane_pressure;
}

}  // namespace casimir
