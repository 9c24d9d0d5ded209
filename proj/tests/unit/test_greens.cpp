#include <doctest.h>

#include <cmath>
#include <sstream>

#include "hypercqed/error.hpp"
#include "hypercqed/greens.hpp"
#include "hypercqed/spectral.hpp"

#ifdef HYPERCQED_HAVE_BOOST
#include <boost/math/quadrature/gauss_kronrod.hpp>
#endif

using namespace hypercqed;

TEST_CASE("toy graphs: closed-form resolvents") {
  const auto one = build_operator(1, {}, 1.0);
  for (double w : {-2.0, 0.5, 3.0}) CHECK(lattice_green(one, 0, 0, w).value.real() == doctest::Approx(1.0 / w).epsilon(1e-14));
  const auto two = build_operator(2, {{0, 1}}, 1.0);
  for (double w : {-2.5, 1.5}) {
    CHECK(lattice_green(two, 0, 0, w).value.real() == doctest::Approx(w / (w * w - 1)).epsilon(1e-14));
    CHECK(lattice_green(two, 0, 1, w).value.real() == doctest::Approx(-1.0 / (w * w - 1)).epsilon(1e-14));
  }
  const auto ge = lattice_green(two, 0, 0, 0.3, 0.1);
  const std::complex<double> z(0.3, 0.1);
  CHECK(std::abs(ge.value - z / (z * z - 1.0)) < 1e-14);
  CHECK(ge.provenance == GreenProvenance::lattice_resolvent);
}

TEST_CASE("lattice resolvent: symmetry, spectral representation, in-band error") {
  const auto lat = generate_lattice({7, 3, 3});
  const auto op = build_photon_operator(lat, 1.0);
  const auto s = eigendecompose(op, true);
  const double w = -3.1;
  Resolvent r(op.matrix(), w);
  const auto c0 = r.column(0);
  const auto c5 = r.column(5);
  CHECK(c0(5) == doctest::Approx(c5(0)).epsilon(1e-13));
  for (std::size_t i : {0u, 5u, 40u}) {
    double spec = 0;
    for (Eigen::Index k = 0; k < s.values.size(); ++k)
      spec += s.vectors(static_cast<Eigen::Index>(i), k) * s.vectors(0, k) / (w - s.values(k));
    CHECK(std::abs(c0(static_cast<Eigen::Index>(i)) - spec) < 1e-8);
  }
  CHECK(c0(0) < 0.0);  // negative below the band
  // upper side: positive
  CHECK(Resolvent(op.matrix(), 3.1).column(0)(0) > 0.0);
  CHECK_THROWS_AS(Resolvent(op.matrix(), -1.0), DomainError);
  // with broadening the in-band value is complex with negative imaginary part
  const auto gc = lattice_green(op, 0, 0, -1.0, 0.05);
  CHECK(gc.value.imag() < 0.0);
  CHECK(gc.eta == 0.05);
}

TEST_CASE("cutoff calibration") {
  double prev = 0.0;
  for (int l = 1; l <= 5; ++l) {
    const auto cal = calibrate_cutoff(generate_lattice({7, 3, l}));
    CHECK(cal.rings == l);
    CHECK(cal.M == doctest::Approx(17.529).epsilon(1e-4));
    CHECK(cal.Lambda1 > prev);
    CHECK(cal.Lambda1 < cal.Lambda);
    prev = cal.Lambda1;
    CHECK(cutoff_integral(cal.Lambda, cal.M) == doctest::Approx(cal.C).epsilon(1e-12));
    CHECK(lambda1_from(cal.C, cal.M) == cal.Lambda1);
    const auto again = calibrate_cutoff(generate_lattice({7, 3, l}));
    CHECK(again.Lambda == cal.Lambda);
  }
  const auto c3 = calibrate_cutoff(generate_lattice({7, 3, 3}));
  CHECK(c3.C == doctest::Approx(0.7069).epsilon(2e-4));
  CHECK(c3.Lambda1 == doctest::Approx(9.52).epsilon(0.005));
  CHECK_THROWS_AS(solve_cutoff(-0.1, 17.5), NumericError);
}

TEST_CASE("continuum on-site value") {
  auto p = ContinuumParams::defaults();
  CHECK(p.M == doctest::Approx(17.529).epsilon(1e-4));
  CHECK(p.E0 == doctest::Approx(-3 + 1 / p.M).epsilon(1e-14));
  p.Lambda = 10.6;
  const double w = p.E0 - 0.3;
  const double v = continuum_green_onsite(w, p).value.real();
#ifdef HYPERCQED_HAVE_BOOST
  const double a = p.M * (p.E0 - w);
  const double ref = -(p.M / 56) * boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
                                       [&](double k) { return k * std::tanh(M_PI * k / 2) / (k * k + a); }, 0.0,
                                       p.Lambda, 15, 1e-14);
  CHECK(v == doctest::Approx(ref).epsilon(1e-6));
#endif
  CHECK(v < 0.0);
  // Lambda -> 0 vanishes like Lambda^3
  auto small = p;
  small.Lambda = 1e-3;
  CHECK(std::abs(continuum_green_onsite(w, small).value.real()) < 1e-9);
  // log approximation far from the edge, large cutoff
  auto big = p;
  big.Lambda = 200;
  const double far = p.E0 - 5.0;
  CHECK(continuum_green_onsite_log(far, big) == doctest::Approx(continuum_green_onsite(far, big).value.real()).epsilon(0.05));
  CHECK_THROWS_AS(continuum_green_onsite(p.E0 + 0.1, p), DomainError);
}

TEST_CASE("continuum off-site Legendre form") {
  const auto p = ContinuumParams::defaults();
  // at the edge G decays as exp(-d / (2 kappa))
  const double d1 = 6.0, d2 = 8.0;
  const double g1 = continuum_green_at_distance(d1, p.E0, p);
  const double g2 = continuum_green_at_distance(d2, p.E0, p);
  CHECK(g1 < 0.0);
  CHECK(std::log(g1 / g2) / (d2 - d1) == doctest::Approx(1.0 / (2 * p.kappa)).epsilon(1e-3));
  // Q_{-1/2}(cosh x) -> pi e^{-x/2}
  const double asym = -(p.M / 56) * M_PI * std::exp(-d2 / (2 * p.kappa));
  CHECK(g2 == doctest::Approx(asym).epsilon(0.02));
  // explicit coefficient pi cot(pi nu) reproduces the default evaluation
  const double w = p.E0 - 0.4;
  const std::complex<double> nuc = 0.5 * (-1.0 + std::sqrt(std::complex<double>(p.M * (w - p.E0), 0.0)) * std::complex<double>(0, 1));
  CHECK(continuum_green_legendre(1.3, w, M_PI / std::tan(M_PI * nuc), p) ==
        doctest::Approx(continuum_green_at_distance(1.3, w, p)).epsilon(1e-8));
  // decays faster further below the edge
  CHECK(std::abs(continuum_green_at_distance(3.0, p.E0 - 1.0, p)) < std::abs(continuum_green_at_distance(3.0, p.E0 - 0.1, p)));
  const DiskPoint z{0.1, 0.2};
  CHECK_THROWS_AS(continuum_green_offsite(z, z, w, p), DomainError);
  const auto ev = continuum_green_offsite(DiskPoint{0.0, 0.0}, DiskPoint{0.3, 0.0}, w, p);
  CHECK(ev.provenance == GreenProvenance::continuum_legendre);
  CHECK(ev.distance == doctest::Approx(hyperbolic_distance(DiskPoint{0, 0}, DiskPoint{0.3, 0})));
}

TEST_CASE("continuum off-site tracks the lattice") {
  const auto lat = generate_lattice({7, 3, 6});
  const auto op = build_photon_operator(lat, 1.0);
  const auto cal = calibrate_cutoff(lat);
  auto p = ContinuumParams::defaults();
  p.Lambda = cal.Lambda;
  const double w = -3.2;
  const auto col = Resolvent(op.matrix(), w).column(lat.center_site());
  const double h = lat.edge_length();
  double sq = 0;
  int n = 0;
  for (std::size_t i = 0; i < lat.size(); ++i) {
    const double d = hyperbolic_distance(lat.site(i), lat.site(lat.center_site()));
    if (d < 2 * h || d > 6 * h) continue;
    const double c = continuum_green_at_distance(d, w, p);
    const double rel = (c - col(static_cast<Eigen::Index>(i))) / col(static_cast<Eigen::Index>(i));
    sq += rel * rel;
    ++n;
  }
  REQUIRE(n > 20);
  CHECK(std::sqrt(sq / n) < 0.15);
}

TEST_CASE("correlation length and decay fits") {
  CHECK(correlation_length(-3.0, 17.5, -3.0) == 0.5);
  CHECK(correlation_length(-1e6, 17.5, -3.0) < 1e-3);
  CHECK(correlation_length(-3.5, 17.5, -3.0) < 0.5);
  std::vector<std::pair<double, double>> samples;
  for (double d = 0.5; d < 4; d += 0.25) samples.push_back({d, 2.5 * std::exp(-d / (2 * 0.37))});
  const auto fit = fit_decay(samples);
  CHECK(fit.xi == doctest::Approx(0.37).epsilon(1e-12));
  CHECK(fit.prefactor == doctest::Approx(2.5).epsilon(1e-12));
  CHECK(fit.residual < 1e-12);
  CHECK_THROWS_AS(fit_decay({{1.0, 1.0}}), NumericError);
  CHECK_THROWS_AS(fit_decay({{1, 1.0}, {2, 0.5}, {3, -0.1}, {4, 0.1}}), DomainError);
  // continuum Legendre decay at the edge saturates at kappa
  auto p = ContinuumParams::defaults();
  samples.clear();
  for (double d = 2; d <= 8; d += 0.5) samples.push_back({d, std::abs(continuum_green_at_distance(d, p.E0, p))});
  CHECK(fit_decay(samples).xi == doctest::Approx(p.kappa).epsilon(0.01));
}

TEST_CASE("Green CSV") {
  std::ostringstream os;
  write_green_csv(os, {GreenEvaluation{-3.2, 0.0, 0.5, {-0.1, 0.0}, GreenProvenance::continuum_legendre}});
  CHECK(os.str().rfind("d,omega,value,provenance\n", 0) == 0);
  CHECK(os.str().find("continuum_legendre") != std::string::npos);
}
