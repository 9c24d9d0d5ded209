#include <doctest.h>

#include <cmath>
#include <random>

#include "hypercqed/error.hpp"
#include "hypercqed/geometry.hpp"
#include "hypercqed/quadrature.hpp"

using namespace hypercqed;

namespace {

DiskPoint random_point(std::mt19937_64& rng, double rmax = 0.95) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double r = rmax * std::sqrt(u(rng));
  const double phi = 2.0 * M_PI * u(rng);
  return DiskPoint(std::polar(r, phi));
}

}  // namespace

TEST_CASE("distance: coincident points and artanh closed form") {
  CHECK(hyperbolic_distance(DiskPoint(0, 0), DiskPoint(0, 0)) == 0.0);
  // 2 kappa artanh(1/2)
  CHECK(hyperbolic_distance(DiskPoint(0, 0), DiskPoint(0.5, 0)) ==
        doctest::Approx(0.549306144334054846).epsilon(1e-14));
  CHECK(hyperbolic_distance(DiskPoint(0, 0), DiskPoint(0, 0.5), 1.0) ==
        doctest::Approx(2.0 * std::atanh(0.5)).epsilon(1e-14));
}

TEST_CASE("distance: symmetry and triangle inequality") {
  std::mt19937_64 rng(7);
  for (int k = 0; k < 100; ++k) {
    const DiskPoint a = random_point(rng), b = random_point(rng), c = random_point(rng);
    CHECK(hyperbolic_distance(a, b) == hyperbolic_distance(b, a));
    CHECK(hyperbolic_distance(a, c) <= hyperbolic_distance(a, b) + hyperbolic_distance(b, c) + 1e-12);
  }
}

TEST_CASE("points on or outside the circle are rejected") {
  CHECK_THROWS_AS(DiskPoint(1.0, 0.0), DomainError);
  CHECK_THROWS_AS(DiskPoint(0.8, 0.7), DomainError);
  CHECK_THROWS_AS(DiskPoint(std::nan(""), 0.0), DomainError);
  CHECK_NOTHROW(DiskPoint(0.999999, 0.0));
  CHECK_THROWS_AS(hyperbolic_distance(DiskPoint(0, 0), DiskPoint(0.1, 0), 0.0), DomainError);
}

TEST_CASE("mobius_map: identity, translation, isometry") {
  std::mt19937_64 rng(11);
  const DiskPoint z(0.3, -0.4);
  CHECK(std::abs(mobius_map(z, DiskPoint(0, 0), 0.0).z() - z.z()) < 1e-15);
  CHECK(std::abs(mobius_map(z, z, 0.0).z()) < 1e-15);
  for (int k = 0; k < 100; ++k) {
    const DiskPoint a = random_point(rng, 0.9);
    const double phi = 6.0 * k / 100.0;
    const DiskPoint p = random_point(rng, 0.9), q = random_point(rng, 0.9);
    const double d0 = hyperbolic_distance(p, q);
    const double d1 = hyperbolic_distance(mobius_map(p, a, phi), mobius_map(q, a, phi));
    CHECK(std::abs(d0 - d1) < 1e-12);
    CHECK(std::abs(mobius_inverse(mobius_map(p, a, phi), a, phi).z() - p.z()) < 1e-12);
  }
}

TEST_CASE("geodesic_samples: endpoints, diameters, additivity") {
  const DiskPoint a(-0.6, 0.0), b(0.6, 0.0);
  const auto two = geodesic_samples(a, b, 2);
  REQUIRE(two.size() == 2);
  CHECK(std::abs(two[0].z() - a.z()) < 1e-14);
  CHECK(std::abs(two[1].z() - b.z()) < 1e-14);
  for (const auto& w : geodesic_samples(a, b, 9)) CHECK(std::abs(w.im()) < 1e-14);

  const DiskPoint p(0.2, 0.7), q(-0.5, -0.3);
  const double d = hyperbolic_distance(p, q);
  const auto s = geodesic_samples(p, q, 11);
  REQUIRE(s.size() == 11);
  for (std::size_t k = 0; k < s.size(); ++k) {
    CHECK(std::abs(hyperbolic_distance(p, s[k]) + hyperbolic_distance(s[k], q) - d) < 1e-9);
    CHECK(hyperbolic_distance(p, s[k]) == doctest::Approx(d * k / 10.0).epsilon(1e-9));
    CHECK(distance_to_geodesic(s[k], p, q) < 1e-7);
  }
  CHECK_THROWS(geodesic_samples(p, p, 3));
  CHECK_THROWS(geodesic_samples(p, q, 1));
}

TEST_CASE("midpoint and distance to a geodesic") {
  const DiskPoint p(0.1, 0.5), q(-0.4, 0.2);
  const DiskPoint m = hyperbolic_midpoint(p, q);
  CHECK(hyperbolic_distance(p, m) == doctest::Approx(hyperbolic_distance(m, q)).epsilon(1e-12));
  // off-diameter point: kappa * asinh(2 y / (1 - y^2)) from the real axis
  const double y = 0.3;
  CHECK(distance_to_geodesic(DiskPoint(0, y), DiskPoint(-0.5, 0), DiskPoint(0.5, 0)) ==
        doctest::Approx(0.5 * std::asinh(2 * y / (1 - y * y))).epsilon(1e-12));
}

TEST_CASE("invariant measure: integral unchanged by a disk automorphism") {
  // f = exp(-d(z, c)^2) integrated against d^2z / (1 - |z|^2)^2 in polar
  // coordinates; the pull-back by a Mobius map moves the centre c.
  const DiskPoint c(0.3, 0.1);
  const DiskPoint a(-0.2, 0.25);
  const double phi = 0.7;
  const DiskPoint c2 = mobius_map(c, a, phi);
  const auto integral = [](DiskPoint centre) {
    return integrate(
        [&](double r) {
          return integrate(
              [&](double th) {
                const DiskPoint z(std::polar(r, th));
                const double d = hyperbolic_distance(z, centre);
                return std::exp(-4.0 * d * d) * area_density(z) * r;
              },
              0.0, 2.0 * M_PI, 16, 16);
        },
        0.0, 0.995, 64, 16);
  };
  const double i1 = integral(c);
  const double i2 = integral(c2);
  CHECK(std::abs(i1 - i2) / i1 < 1e-6);
}
