#include <doctest.h>

#include <cmath>
#include <complex>

#include "hypercqed/error.hpp"
#include "hypercqed/special_functions.hpp"

using namespace hypercqed;

namespace {
// reference values from mpmath (legenq/legenp type 3, gamma, hyp2f1), 20 digits
bool close(cplx a, cplx b, double rel) { return std::abs(a - b) <= rel * std::abs(b); }
}  // namespace

TEST_CASE("gamma and 2F1 reference values") {
  CHECK(close(gamma(cplx(0.3, 2.1)), cplx(0.053019426201761701519, -0.059829016981994704816), 1e-13));
  CHECK(close(gamma(cplx(-2.5, 0.0)), cplx(-0.94530872048294188123, 0.0), 1e-13));
  CHECK(close(gamma(cplx(5.0, 0.0)), cplx(24.0, 0.0), 1e-14));
  CHECK(close(hyp2f1(0.5, 1.3, 2.1, 0.7), cplx(1.3883460238128345721, 0.0), 1e-13));
  CHECK_THROWS(hyp2f1(0.5, 1.3, 2.1, 1.2));
}

TEST_CASE("Legendre Q reference values") {
  CHECK(close(legendre_q(0.3, 1.5), cplx(0.51710482657058865639, 0), 1e-10));
  CHECK(close(legendre_q(-0.5, 2.0), cplx(1.6566381702365941664, 0), 1e-10));
  CHECK(close(legendre_q(2.7, 5.0), cplx(0.00019832582612888157498, 0), 1e-10));
  CHECK(close(legendre_q(cplx(-0.5, 1.3), 1.8),
              cplx(-0.54180222484223141297, -0.70598959780926710466), 1e-10));
  CHECK(close(legendre_q(0.8, 1.02), cplx(1.480507199950564238, 0), 1e-10));
  CHECK(close(legendre_q(-0.25, 1.001), cplx(4.3088487798206574238, 0), 1e-10));
}

TEST_CASE("Legendre P reference values") {
  CHECK(close(legendre_p(0.3, 1.5), cplx(1.0889857426782068715, 0), 1e-10));
  CHECK(close(legendre_p(cplx(-0.5, 1.3), 3.0), cplx(0.069152123964735059351, 0), 1e-9));
  CHECK(close(legendre_p(1.7, 10.0), cplx(65.367706610878538457, 0), 1e-10));
  CHECK(close(legendre_p(-0.5, 1.9), cplx(0.90933098307519972004, 0), 1e-10));
  // integer degree: Legendre polynomials
  for (double x : {1.2, 3.0, 7.5}) {
    CHECK(legendre_p(2.0, x).real() == doctest::Approx(0.5 * (3 * x * x - 1)).epsilon(1e-11));
  }
}

TEST_CASE("Q_0 closed form") {
  for (double x : {1.01, 1.3, 2.0, 4.0, 20.0}) {
    CHECK(legendre_q(0.0, x).real() == doctest::Approx(0.5 * std::log((x + 1) / (x - 1))).epsilon(1e-11));
    CHECK(std::abs(legendre_q(0.0, x).imag()) < 1e-12);
  }
}

TEST_CASE("series and integral representations agree") {
  for (cplx nu : {cplx(0.3, 0), cplx(-0.5, 0.7), cplx(-0.5, 2.5), cplx(1.2, -0.4)}) {
    for (double x : {1.6, 2.2, 3.0}) {
      CHECK(close(legendre_q_series(nu, x), legendre_q_integral(nu, x), 1e-8));
    }
    for (double x : {1.3, 1.8}) {
      CHECK(close(legendre_p_series(nu, x), legendre_p_integral(nu, x), 1e-8));
    }
  }
}

TEST_CASE("decaying combination Q_nu - pi cot(pi nu) P_nu = Q_{-nu-1}") {
  for (double k : {0.4, 1.5, 3.0}) {
    const cplx nu(-0.5, 0.5 * k);
    const cplx mu = -nu - 1.0;
    for (double x : {1.5, 3.0}) {
      const cplx lhs = legendre_q(nu, x) - M_PI / std::tan(M_PI * nu) * legendre_p(nu, x);
      CHECK(close(lhs, legendre_q(mu, x), 1e-8));
    }
  }
}

TEST_CASE("domain errors") {
  CHECK_THROWS_AS(legendre_q(0.3, 1.0), DomainError);
  CHECK_THROWS_AS(legendre_q(0.3, 0.5), DomainError);
  CHECK_THROWS_AS(legendre_p(0.3, 0.9), DomainError);
  CHECK_THROWS_AS(legendre_q_integral(cplx(-1.5, 0), 3.0), NumericError);
}
