#include "casimir/quadrature.hpp"

#include <cmath>
#include <stdexcept>

#include "casimir/constants.hpp"

namespace casimir {

QuadratureRule gauss_legendre(int n, double lo, double hi) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double mid = 0.5 * (hi + lo);
  const double half = 0.5 * (hi - lo);
  // Newton iteration on P_n from the Tricomi initial guess; roots are symmetric.
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double x = std::cos(constants::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute the derivative at the converged root.
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = (n == 1) ? 1.0 : n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    // Ascending order.
    rule.nodes[i] = mid - half * x;
    rule.nodes[n - 1 - i] = mid + half * x;
    rule.weights[i] = half * w;
    rule.weights[n - 1 - i] = half * w;
  }
  return rule;
}

QuadratureRule semi_infinite(int n, double scale) {
  QuadratureRule rule = gauss_legendre(n, 0.0, 1.0);
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const double u = rule.nodes[i];
    const double one_minus = 1.0 - u;
    rule.nodes[i] = scale * u / one_minus;
    rule.weights[i] *= scale / (one_minus * one_minus);
  }
  return rule;
}

}  // namespace casimir
