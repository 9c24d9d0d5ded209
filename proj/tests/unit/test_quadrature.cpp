#include <doctest.h>

#include <cmath>

#include "hypercqed/error.hpp"
#include "hypercqed/quadrature.hpp"

using namespace hypercqed;

TEST_CASE("Gauss-Legendre integrates polynomials exactly") {
  for (int n : {1, 2, 5, 12, 20}) {
    const auto r = gauss_legendre(n);
    double wsum = 0;
    for (double w : r.weights) wsum += w;
    CHECK(wsum == doctest::Approx(2.0).epsilon(1e-14));
    // x^(2n-2) is integrated exactly: 2 / (2n - 1)
    double s = 0;
    for (int i = 0; i < n; ++i) s += r.weights[i] * std::pow(r.nodes[i], 2 * n - 2);
    CHECK(s == doctest::Approx(2.0 / (2 * n - 1)).epsilon(1e-13));
  }
  CHECK(integrate([](double x) { return std::exp(x); }, 0.0, 2.0, 4, 12) ==
        doctest::Approx(std::exp(2.0) - 1.0).epsilon(1e-14));
}

TEST_CASE("root finder") {
  const auto r = find_root([](double x) { return std::cos(x) - x; }, 0.0, 1.0);
  CHECK(r.x == doctest::Approx(0.7390851332151607).epsilon(1e-15));
  // steep function near a pole
  const auto r2 = find_root([](double x) { return x - 1.0 / (x - 2.0) - 5.0; }, 2.0 + 1e-12, 100.0);
  CHECK(std::abs(r2.x - 2.0 - 1.0 / (r2.x - 2.0) - 5.0 + 2.0) < 1e-9);
  CHECK_THROWS_AS(find_root([](double x) { return x * x + 1.0; }, -1.0, 1.0), BracketingError);
}
