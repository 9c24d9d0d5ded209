#include <doctest.h>

#include <cmath>
#include <sstream>

#include "hypercqed/boundstates.hpp"
#include "hypercqed/error.hpp"

using namespace hypercqed;

namespace {
const HyperbolicLattice& l4() {
  static const HyperbolicLattice lat = generate_lattice({7, 3, 4});
  return lat;
}

std::size_t rotated_site(const HyperbolicLattice& lat, std::size_t i) {
  const auto z = lat.site(i).z() * std::polar(1.0, 2 * M_PI / 7);
  for (std::size_t j = 0; j < lat.size(); ++j)
    if (std::abs(lat.site(j).z() - z) < 1e-9) return j;
  FAIL("no rotated image");
  return 0;
}

Eigen::VectorXd full_vector(const BoundStateResult& r) {
  Eigen::VectorXd v(r.photon_amplitudes.size() + static_cast<Eigen::Index>(r.spin_amplitudes.size()));
  v << r.photon_amplitudes, Eigen::Map<const Eigen::VectorXd>(r.spin_amplitudes.data(), static_cast<Eigen::Index>(r.spin_amplitudes.size()));
  return v;
}
}  // namespace

TEST_CASE("single qubit: exact diagonalization agreement") {
  const auto& lat = l4();
  LatticeBackend gb(lat);
  for (double g : {0.05, 0.3, 0.8}) {
    const QubitSpec q{0, -3.1, g};
    const auto r = solve_single_bound_state(gb, q);
    const auto ed = exact_bound_levels(lat, 1.0, {q}, gb.lower_edge());
    REQUIRE(!ed.empty());
    CHECK(r.energy == doctest::Approx(ed.front()).epsilon(1e-10));
    CHECK(r.residual < 1e-10);
    CHECK(r.energy < gb.lower_edge());
    // normalised eigenvector of the full operator
    const Eigen::VectorXd v = full_vector(r);
    CHECK(v.norm() == doctest::Approx(1.0).epsilon(1e-10));
    const auto op = build_qubit_photon_operator(lat, 1.0, {q});
    CHECK((op.matrix() * v - r.energy * v).norm() < 1e-8);
  }
  // upper branch
  const QubitSpec up{0, 3.2, 0.4};
  const auto ru = solve_single_bound_state(gb, up, Branch::upper);
  CHECK(ru.energy > gb.upper_edge());
  const auto op = build_qubit_photon_operator(lat, 1.0, {up});
  const auto s = eigendecompose(op, false);
  CHECK(ru.energy == doctest::Approx(s.highest()).epsilon(1e-10));
}

TEST_CASE("weak coupling limit") {
  LatticeBackend gb(l4());
  const QubitSpec q{3, -3.5, 1e-3};
  const auto r = solve_single_bound_state(gb, q);
  CHECK(std::abs(r.energy - q.delta) < 1e-5);
  CHECK(std::abs(r.energy - weak_coupling_energy(gb, q)) < 1e-10);
  CHECK(r.spin_amplitudes[0] * r.spin_amplitudes[0] > 0.999);
  // g^2 scaling of the shift
  const double s1 = solve_single_bound_state(gb, {3, -3.5, 0.01}).energy + 3.5;
  const double s2 = solve_single_bound_state(gb, {3, -3.5, 0.02}).energy + 3.5;
  CHECK(s2 / s1 == doctest::Approx(4.0).epsilon(1e-3));
}

TEST_CASE("photon cloud is centred on the qubit") {
  const auto& lat = l4();
  LatticeBackend gb(lat);
  const std::size_t site = 0;
  const auto r = solve_single_bound_state(gb, {site, -3.0, 0.5});
  const auto n = photon_density(r);
  Eigen::Index imax;
  n.maxCoeff(&imax);
  CHECK(static_cast<std::size_t>(imax) == site);
  // a rotated copy of the qubit gives the same energy
  const auto r2 = solve_single_bound_state(gb, {rotated_site(lat, site), -3.0, 0.5});
  CHECK(r2.energy == doctest::Approx(r.energy).epsilon(1e-12));
}

TEST_CASE("two qubits") {
  const auto& lat = l4();
  LatticeBackend gb(lat);
  const QubitSpec a{0, -3.0, 0.5}, b{1, -3.0, 0.5};
  const auto tq = solve_two_qubit_bound_states(gb, a, b);
  REQUIRE(tq.plus.has_value());
  REQUIRE(tq.minus.has_value());
  CHECK(tq.plus->energy < tq.minus->energy);
  CHECK(tq.plus->parity == Parity::symmetric);
  CHECK(tq.minus->parity == Parity::antisymmetric);
  CHECK(tq.plus->spin_amplitudes[0] == doctest::Approx(tq.plus->spin_amplitudes[1]).epsilon(1e-8));
  CHECK(tq.minus->spin_amplitudes[0] == doctest::Approx(-tq.minus->spin_amplitudes[1]).epsilon(1e-8));
  const auto ed = exact_bound_levels(lat, 1.0, {a, b}, gb.lower_edge());
  REQUIRE(ed.size() == 2);
  CHECK(tq.plus->energy == doctest::Approx(ed[0]).epsilon(1e-10));
  CHECK(tq.minus->energy == doctest::Approx(ed[1]).epsilon(1e-10));
  CHECK(std::abs(full_vector(*tq.plus).dot(full_vector(*tq.minus))) < 1e-8);

  // a far-detuned, barely coupled second qubit leaves the single-qubit root
  const auto single = solve_single_bound_state(gb, a);
  const auto red = solve_two_qubit_bound_states(gb, a, {20, -5.0, 1e-6});
  bool found = false;
  for (const auto* r : {red.plus ? &*red.plus : nullptr, red.minus ? &*red.minus : nullptr})
    if (r && std::abs(r->energy - single.energy) < 1e-9) found = true;
  CHECK(found);

  // the splitting shrinks with separation (symmetry-equivalent sites only)
  std::size_t s3 = 0;
  while (lat.ring_of_site()[s3] != 3 || lat.degree(s3) != 3) ++s3;
  const std::size_t opposite = rotated_site(lat, rotated_site(lat, rotated_site(lat, s3)));
  const auto near = solve_two_qubit_bound_states(gb, {0, -3.6, 0.2}, {1, -3.6, 0.2});
  const auto far = solve_two_qubit_bound_states(gb, {s3, -3.6, 0.2}, {opposite, -3.6, 0.2});
  REQUIRE(far.plus.has_value());
  REQUIRE(far.minus.has_value());
  const double split_far = far.minus->energy - far.plus->energy;
  CHECK(split_far >= 0.0);
  CHECK(split_far < 0.1 * (near.minus->energy - near.plus->energy));
}

TEST_CASE("continuum backend") {
  const auto& lat = l4();
  auto p = ContinuumParams::defaults();
  p.Lambda = calibrate_cutoff(lat).Lambda;
  ContinuumBackend cb(lat, p);
  CHECK(std::isinf(cb.upper_edge()));
  const auto r = solve_single_bound_state(cb, {0, -3.3, 0.2});
  CHECK(r.energy < p.E0);
  CHECK(r.backend == Backend::continuum);
  CHECK(r.residual < 1e-10);
  // weak coupling: close to the lattice value
  LatticeBackend gb(lat);
  CHECK(r.energy == doctest::Approx(solve_single_bound_state(gb, {0, -3.3, 0.2}).energy).epsilon(2e-3));
  CHECK_THROWS_AS(solve_single_bound_state(cb, {0, 3.5, 0.2}, Branch::upper), ContractError);
  // the continuum G stays finite at E0, so a far-detuned weakly coupled qubit has no bound state
  CHECK_THROWS_AS(solve_single_bound_state(cb, {0, 0.0, 0.05}), BracketingError);
}

TEST_CASE("scan and density CSV") {
  std::ostringstream os;
  write_scan_csv(os, {{0.5, -3.1, std::nan(""), 1e-12}});
  CHECK(os.str().rfind("param,E_plus,E_minus,residual\n", 0) == 0);
  CHECK(os.str().find("nan") != std::string::npos);
  std::ostringstream d;
  const auto lat = generate_lattice({7, 3, 1});
  write_density_csv(d, lat, Eigen::VectorXd::Constant(7, 1.0 / 7));
  CHECK(d.str().rfind("site,re,im,n_ph\n", 0) == 0);
  int lines = 0;
  for (char c : d.str()) lines += c == '\n';
  CHECK(lines == 8);
}
