#include <doctest.h>

#include <cmath>

#include "casimir/quadrature.hpp"

using namespace casimir;

TEST_CASE("Gauss-Legendre integrates polynomials exactly") {
  const auto q = gauss_legendre(6, -1.0, 3.0);
  double sum = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) sum += q.weights[i] * std::pow(q.nodes[i], 11);
  // int_{-1}^{3} x^11 dx = (3^12 - 1) / 12
  CHECK(sum == doctest::Approx((std::pow(3.0, 12) - 1.0) / 12.0).epsilon(1e-13));
  for (double x : q.nodes) {
    CHECK(x > -1.0);
    CHECK(x < 3.0);
  }
}

TEST_CASE("semi-infinite rule") {
  const double scale = 2.5;
  const auto q = semi_infinite(40, scale);
  double sum = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    CHECK(q.nodes[i] > 0.0);
    CHECK(q.weights[i] > 0.0);
    sum += q.weights[i] * std::exp(-q.nodes[i] / scale);
  }
  CHECK(sum == doctest::Approx(scale).epsilon(1e-10));
}
