#include <benchmark/benchmark.h>

#include <complex>
#include <vector>

#include "hypercqed/boundstates.hpp"
#include "hypercqed/dynamics.hpp"
#include "hypercqed/greens.hpp"
#include "hypercqed/hamiltonian.hpp"
#include "hypercqed/special_functions.hpp"
#include "hypercqed/spectral.hpp"
#include "hypercqed/tessellation.hpp"

namespace hc = hypercqed;

namespace {

hc::HyperbolicLattice lattice(int rings) {
  hc::LatticeSpec spec;
  spec.rings = rings;
  return hc::generate_lattice(spec);
}

}  // namespace

static void BM_GenerateLattice(benchmark::State& state) {
  hc::LatticeSpec spec;
  spec.rings = static_cast<int>(state.range(0));
  std::size_t n = 0;
  for (auto _ : state) {
    auto lat = hc::generate_lattice(spec);
    n = lat.size();
    benchmark::DoNotOptimize(n);
  }
  state.counters["sites"] = static_cast<double>(n);
}
BENCHMARK(BM_GenerateLattice)->DenseRange(3, 7)->Unit(benchmark::kMillisecond);

static void BM_LineGraph(benchmark::State& state) {
  hc::LatticeSpec spec;
  spec.rings = static_cast<int>(state.range(0));
  spec.kind = hc::LatticeKind::line_graph;
  for (auto _ : state) benchmark::DoNotOptimize(hc::generate_lattice(spec).size());
}
BENCHMARK(BM_LineGraph)->DenseRange(3, 5)->Unit(benchmark::kMillisecond);

static void BM_Eigendecompose(benchmark::State& state) {
  auto lat = lattice(static_cast<int>(state.range(0)));
  auto op = hc::build_photon_operator(lat, 1.0);
  const bool vectors = state.range(1) != 0;
  for (auto _ : state) benchmark::DoNotOptimize(hc::eigendecompose(op, vectors).values.data());
  state.counters["sites"] = static_cast<double>(lat.size());
}
BENCHMARK(BM_Eigendecompose)
    ->ArgsProduct({{3, 4, 5}, {0, 1}})
    ->Unit(benchmark::kMillisecond);

static void BM_BandEdges(benchmark::State& state) {
  auto lat = lattice(static_cast<int>(state.range(0)));
  auto op = hc::build_photon_operator(lat, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(hc::band_edges(op.matrix()).lower);
}
BENCHMARK(BM_BandEdges)->DenseRange(4, 7)->Unit(benchmark::kMillisecond);

// Factorisation plus one column solve below the band.
static void BM_ResolventColumn(benchmark::State& state) {
  auto lat = lattice(static_cast<int>(state.range(0)));
  auto op = hc::build_photon_operator(lat, 1.0);
  const auto c = lat.center_site();
  for (auto _ : state) {
    hc::Resolvent r(op.matrix(), -3.0);
    benchmark::DoNotOptimize(r.column(c).data());
  }
}
BENCHMARK(BM_ResolventColumn)->DenseRange(4, 7)->Unit(benchmark::kMillisecond);

static void BM_ResolventComplex(benchmark::State& state) {
  auto lat = lattice(static_cast<int>(state.range(0)));
  auto op = hc::build_photon_operator(lat, 1.0);
  const auto c = lat.center_site();
  for (auto _ : state) {
    hc::Resolvent r(op.matrix(), -2.5, 0.05);
    benchmark::DoNotOptimize(r.complex_column(c).data());
  }
}
BENCHMARK(BM_ResolventComplex)->DenseRange(4, 6)->Unit(benchmark::kMillisecond);

static void BM_LegendreQ(benchmark::State& state) {
  const std::complex<double> nu(-0.5, 1.7);
  double x = 1.05;
  for (auto _ : state) {
    benchmark::DoNotOptimize(hc::legendre_q(nu, x));
    x = x < 50.0 ? x * 1.1 : 1.05;
  }
}
BENCHMARK(BM_LegendreQ);

static void BM_ContinuumOffsite(benchmark::State& state) {
  const auto p = hc::ContinuumParams::defaults();
  const double omega = p.E0 - 0.3;
  double d = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(hc::continuum_green_at_distance(d, omega, p));
    d = d < 3.0 ? d + 0.1 : 0.1;
  }
}
BENCHMARK(BM_ContinuumOffsite);

static void BM_SingleBoundState(benchmark::State& state) {
  auto lat = lattice(static_cast<int>(state.range(0)));
  hc::LatticeBackend backend(lat);
  const hc::QubitSpec q{lat.center_site(), -3.0, 0.5};
  for (auto _ : state) benchmark::DoNotOptimize(hc::solve_single_bound_state(backend, q).energy);
}
BENCHMARK(BM_SingleBoundState)->DenseRange(4, 6)->Unit(benchmark::kMillisecond);

// Arrowhead qubit propagator versus full evolution of the dressed operator.
static void BM_QubitPropagator(benchmark::State& state) {
  auto lat = lattice(5);
  auto photons = hc::eigendecompose(hc::build_photon_operator(lat, 1.0), true);
  const auto c = lat.center_site();
  const auto samples = static_cast<int>(state.range(0));
  for (auto _ : state) {
    hc::QubitPropagator prop(photons, c, -2.5, 0.3);
    double acc = 0.0;
    for (int k = 0; k < samples; ++k) acc += prop.excited_population(0.1 * k);
    benchmark::DoNotOptimize(acc);
  }
}
BENCHMARK(BM_QubitPropagator)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

static void BM_FullEvolution(benchmark::State& state) {
  auto lat = lattice(5);
  auto op = hc::build_qubit_photon_operator(lat, 1.0, {{lat.center_site(), -2.5, 0.3}});
  const auto samples = static_cast<int>(state.range(0));
  std::vector<double> times(static_cast<std::size_t>(samples));
  for (int k = 0; k < samples; ++k) times[static_cast<std::size_t>(k)] = 0.1 * k;
  for (auto _ : state)
    benchmark::DoNotOptimize(hc::evolve(op, lat.size(), times).excited_population.data());
}
BENCHMARK(BM_FullEvolution)->Arg(100)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
