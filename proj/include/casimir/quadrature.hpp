#pragma once

#include <vector>

namespace casimir {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const noexcept { return nodes.size(); }
};

/// n-point Gauss-Legendre rule on (lo, hi).
QuadratureRule gauss_legendre(int n, double lo, double hi);

/// Gauss-Legendre on (0, 1) pushed to (0, inf) by x = scale * u / (1 - u).
QuadratureRule semi_infinite(int n, double scale);

}  // namespace casimir
