#include <doctest.h>

#include <cmath>
#include <sstream>

#include "hypercqed/dynamics.hpp"
#include "hypercqed/error.hpp"

using namespace hypercqed;

namespace {
std::vector<double> grid(double t1, int n) {
  std::vector<double> t;
  for (int k = 0; k < n; ++k) t.push_back(t1 * k / (n - 1));
  return t;
}
}  // namespace

TEST_CASE("uncoupled qubit stays excited") {
  const auto lat = generate_lattice({7, 3, 2});
  const auto op = build_qubit_photon_operator(lat, 1.0, {{0, -1.0, 0.0}});
  const auto r = evolve(op, op.qubit_index(0), grid(10, 21));
  for (Eigen::Index k = 0; k < r.excited_population.rows(); ++k)
    CHECK(r.excited_population(k, 0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("vacuum Rabi oscillation") {
  const double g = 0.35;
  const auto op = build_operator(1, {}, 1.0, {{0, 0.0, g}});
  const auto r = evolve(op, op.qubit_index(0), grid(12, 49), true);
  for (std::size_t k = 0; k < r.times.size(); ++k) {
    const double c = std::cos(g * r.times[k]);
    CHECK(r.excited_population(static_cast<Eigen::Index>(k), 0) == doctest::Approx(c * c).epsilon(1e-12));
    CHECK(r.photon_populations(static_cast<Eigen::Index>(k), 0) == doctest::Approx(1 - c * c).epsilon(1e-10));
    CHECK(r.norm[k] == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("time reversal, linearity and norm") {
  const auto lat = generate_lattice({7, 3, 3});
  const auto op = build_qubit_photon_operator(lat, 1.0, {{0, -0.5, 0.4}});
  const auto r = evolve(op, op.qubit_index(0), {-4.0, -1.5, 0.0, 1.5, 4.0});
  CHECK(r.excited_population(0, 0) == doctest::Approx(r.excited_population(4, 0)).epsilon(1e-12));
  CHECK(r.excited_population(1, 0) == doctest::Approx(r.excited_population(3, 0)).epsilon(1e-12));
  for (double nrm : r.norm) CHECK(nrm == doctest::Approx(1.0).epsilon(1e-12));

  const Propagator prop(eigendecompose(op, true));
  const auto n = static_cast<Eigen::Index>(op.dim());
  const Eigen::VectorXcd a = Eigen::VectorXcd::Random(n), b = Eigen::VectorXcd::Random(n);
  const std::complex<double> ca(0.3, -1.2), cb(-0.7, 0.4);
  const Eigen::VectorXcd lhs = prop.apply(ca * a + cb * b, 2.7);
  const Eigen::VectorXcd rhs = ca * prop.apply(a, 2.7) + cb * prop.apply(b, 2.7);
  CHECK((lhs - rhs).norm() < 1e-11);
  CHECK(prop.apply(a, 3.3).norm() == doctest::Approx(a.norm()).epsilon(1e-12));
}

TEST_CASE("arrowhead propagator matches full evolution") {
  const auto lat = generate_lattice({7, 3, 3});
  const auto ph = eigendecompose(build_photon_operator(lat, 1.0), true);
  for (const auto& [site, delta, g] : {std::tuple{0ul, -1.0, 0.3}, std::tuple{17ul, -2.0, 0.5}, std::tuple{3ul, -3.4, 0.2}}) {
    const auto op = build_qubit_photon_operator(lat, 1.0, {{site, delta, g}});
    const auto times = grid(15, 31);
    const auto full = evolve(op, op.qubit_index(0), times);
    const QubitPropagator qp(ph, site, delta, g);
    double wsum = 0;
    for (double w : qp.weights()) wsum += w;
    CHECK(wsum == doctest::Approx(1.0).epsilon(1e-10));
    for (std::size_t k = 0; k < times.size(); ++k)
      CHECK(std::abs(qp.excited_population(times[k]) - full.excited_population(static_cast<Eigen::Index>(k), 0)) < 1e-9);
  }
  // the flat band is degenerate at l=3 of the line graph: degenerate levels are handled
  const auto lg = line_graph(lat);
  const auto phl = eigendecompose(build_photon_operator(lg, 1.0), true);
  const auto op = build_qubit_photon_operator(lg, 1.0, {{5, -1.9, 0.2}});
  const auto full = evolve(op, op.qubit_index(0), {0.0, 3.0, 9.0});
  const QubitPropagator qp(phl, 5, -1.9, 0.2);
  CHECK(std::abs(qp.excited_population(9.0) - full.excited_population(2, 0)) < 1e-9);
}

TEST_CASE("decay fit") {
  std::vector<double> t = grid(15, 151), p;
  for (double x : t) p.push_back(0.98 * std::exp(-0.2 * x));
  const auto f = fit_decay_rate(t, p);
  CHECK(f.gamma == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(f.stderr_ < 1e-12);
  CHECK_FALSE(f.quality_warning);
  const auto w = fit_decay_rate(t, p, 5.0, 10.0);
  CHECK(w.t_min == 5.0);
  CHECK(w.gamma == doctest::Approx(0.2).epsilon(1e-12));
  p[20] = 0.0;
  CHECK_THROWS_AS(fit_decay_rate(t, p), DomainError);
}

TEST_CASE("Markov conventions") {
  CHECK(markov_gamma(0.3, MarkovConvention::full) == 0.3);
  CHECK(markov_gamma(0.3, MarkovConvention::full) / markov_gamma(0.3, MarkovConvention::half) == 2.0);
  CHECK_THROWS_AS(markov_gamma(-0.1, MarkovConvention::full), DomainError);
  CHECK(markov_convention_from_string(to_string(MarkovConvention::half)) == MarkovConvention::half);
  CHECK_THROWS(markov_convention_from_string("quarter"));
}

TEST_CASE("decay scan: golden rule scaling and determinism") {
  const auto lat = generate_lattice({7, 3, 5});
  const auto ph = eigendecompose(build_photon_operator(lat, 1.0), true);
  const std::vector<double> deltas{-1.5, -0.5, 0.5};
  const auto a = decay_scan(ph, 0, 0.1, deltas, 0.3);
  const auto b = decay_scan(ph, 0, 0.2, deltas, 0.3);
  const auto c = decay_scan(ph, 0, 0.2, deltas, 0.3, 15.0, 151, 3);
  for (std::size_t k = 0; k < deltas.size(); ++k) {
    CHECK(b[k].gamma / a[k].gamma == doctest::Approx(4.0).epsilon(0.25));
    CHECK(b[k].j_binned / a[k].j_binned == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(c[k].gamma == b[k].gamma);
  }
}

TEST_CASE("finite-size revivals trip the quality flag") {
  // small lattices return the excitation inside the fit window
  const auto l1 = generate_lattice({7, 3, 1});
  const auto p1 = eigendecompose(build_photon_operator(l1, 1.0), true);
  CHECK(decay_scan(p1, 0, 0.3, {-1.2}, 0.3)[0].quality_warning);
  const auto l2 = generate_lattice({7, 3, 2});
  const auto p2 = eigendecompose(build_photon_operator(l2, 1.0), true);
  CHECK(decay_scan(p2, 0, 0.3, {0.0}, 0.3)[0].quality_warning);
  // a larger lattice decays cleanly
  const auto l5 = generate_lattice({7, 3, 5});
  const auto p5 = eigendecompose(build_photon_operator(l5, 1.0), true);
  for (const auto& row : decay_scan(p5, 0, 0.3, {-1.2, 0.0, 1.0}, 0.3)) {
    CHECK_FALSE(row.quality_warning);
    CHECK(row.stderr_ / row.gamma < 0.1);
  }
}

TEST_CASE("evolution CSV") {
  const auto op = build_operator(2, {{0, 1}}, 1.0, {{0, 0.0, 0.2}});
  const auto r = evolve(op, op.qubit_index(0), {0.0, 1.0}, true);
  std::ostringstream os;
  write_evolution_csv(os, r);
  CHECK(os.str().rfind("t,P_up,site_0,site_1\n", 0) == 0);
  std::ostringstream ds;
  write_decay_scan_csv(ds, {DecayScanRow{-1.0, 0.1, 0.01, 0.12, 0.3, false}});
  CHECK(ds.str().rfind("delta,gamma,stderr,j_binned,rho_binned", 0) == 0);
}
