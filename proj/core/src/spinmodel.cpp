#include "hypercqed/spinmodel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <queue>

#include <nlohmann/json.hpp>

#include "hypercqed/error.hpp"
#include "hypercqed/greens.hpp"
#include "hypercqed/hamiltonian.hpp"
#include "hypercqed/spectral.hpp"

namespace hypercqed {

namespace {

constexpr double kSupportCut = 1e-10;

void guard_check(SpinCouplingMatrix& m, double distance, const GuardOptions& guard,
                 const std::string& what) {
  // relative slack so that a detuning of exactly factor * g passes
  if (distance >= guard.factor * m.g * (1.0 - 1e-12)) return;
  char buf[128];
  std::snprintf(buf, sizeof buf, ": detuning %.6g < %g g = %.6g", distance, guard.factor, guard.factor * m.g);
  const std::string msg = what + buf;
  if (guard.strict) throw DomainError(msg);
  m.warnings.push_back(msg);
}

std::vector<int> bfs(const HyperbolicLattice& lat, std::size_t s, int rmax) {
  std::vector<int> dist(lat.size(), -1);
  std::queue<std::size_t> todo;
  dist[s] = 0;
  todo.push(s);
  while (!todo.empty()) {
    const std::size_t u = todo.front();
    todo.pop();
    if (dist[u] == rmax) continue;
    for (std::size_t v : lat.neighbors()[u]) {
      if (dist[v] < 0) {
        dist[v] = dist[u] + 1;
        todo.push(v);
      }
    }
  }
  return dist;
}

void check_sites(const HyperbolicLattice& lat, const std::vector<std::size_t>& sites) {
  std::vector<std::size_t> sorted = sites;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw InvalidSpecError("duplicate qubit sites");
  }
  for (std::size_t s : sites) {
    if (s >= lat.size()) throw InvalidSpecError("qubit site " + std::to_string(s) + " out of range");
  }
}

}  // namespace

std::string_view to_string(CouplingGenerator g) noexcept {
  return g == CouplingGenerator::green_function ? "green_function" : "flat_band";
}

std::string_view to_string(FlatBandKernel k) noexcept {
  return k == FlatBandKernel::localized ? "localized" : "projector";
}

FlatBandKernel flat_band_kernel_from_string(std::string_view s) {
  if (s == "localized") return FlatBandKernel::localized;
  if (s == "projector") return FlatBandKernel::projector;
  throw InvalidSpecError("unknown flat-band kernel '" + std::string(s) + "'");
}

SpinCouplingMatrix effective_flip_flop(const HyperbolicLattice& lat, double t,
                                       const std::vector<std::size_t>& sites, double delta,
                                       double g, GuardOptions guard) {
  check_sites(lat, sites);
  if (!(g >= 0.0)) throw InvalidSpecError("coupling g must be >= 0");
  const auto op = build_photon_operator(lat, t);
  const BandEdges be = band_edges(op.matrix());
  if (delta >= be.lower && delta <= be.upper) {
    throw DomainError("Delta = " + std::to_string(delta) + " lies inside the photon band [" +
                      std::to_string(be.lower) + ", " + std::to_string(be.upper) + "]");
  }
  SpinCouplingMatrix m;
  m.generator = CouplingGenerator::green_function;
  m.delta = delta;
  m.g = g;
  m.qubit_sites = sites;
  for (std::size_t s : sites) m.positions.push_back(lat.site(s));
  guard_check(m, delta < be.lower ? be.lower - delta : delta - be.upper, guard,
              "adiabatic condition |E_edge - Delta| >> g");
  const Resolvent r(op.matrix(), delta);
  const auto n = static_cast<Eigen::Index>(sites.size());
  m.J = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index b = 0; b < n; ++b) {
    const Eigen::VectorXd col = r.column(sites[static_cast<std::size_t>(b)]);
    for (Eigen::Index a = 0; a < n; ++a) {
      const double v = g * g * col(static_cast<Eigen::Index>(sites[static_cast<std::size_t>(a)]));
      if (a == b) {
        m.onsite_shift.push_back(v);
      } else {
        m.J(a, b) = v;
      }
    }
  }
  m.J = 0.5 * (m.J + m.J.transpose()).eval();
  return m;
}

FlatBandProjector find_flat_band(const HyperbolicLattice& lat, double t, double tol) {
  if (lat.spec().kind != LatticeKind::line_graph) {
    throw ContractError("flat-band search expects a line_graph lattice");
  }
  const Spectrum s = eigendecompose(build_photon_operator(lat, t), true);
  const double hnorm = std::max(std::abs(s.lowest()), std::abs(s.highest()));
  if (tol <= 0.0) tol = 1e-8 * hnorm;

  // largest cluster of eigenvalues within tol of their neighbour
  std::size_t best_start = 0, best_len = 0;
  for (std::size_t k = 0; k < s.size();) {
    std::size_t e = k + 1;
    while (e < s.size() && s.values(static_cast<Eigen::Index>(e)) -
                                   s.values(static_cast<Eigen::Index>(e - 1)) <= tol) {
      ++e;
    }
    if (e - k > best_len) {
      best_len = e - k;
      best_start = k;
    }
    k = e;
  }
  if (best_len <= 3) {
    throw NumericError("no degenerate level with multiplicity > 3 (largest cluster " +
                       std::to_string(best_len) + ")");
  }
  FlatBandProjector fb;
  fb.degeneracy = best_len;
  fb.omega_flat = s.values.segment(static_cast<Eigen::Index>(best_start),
                                   static_cast<Eigen::Index>(best_len)).mean();
  fb.basis = s.vectors.middleCols(static_cast<Eigen::Index>(best_start),
                                  static_cast<Eigen::Index>(best_len));
  fb.spectrum.assign(s.values.data(), s.values.data() + s.values.size());
  double next = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < s.size(); ++k) {
    if (k >= best_start && k < best_start + best_len) continue;
    const double v = s.values(static_cast<Eigen::Index>(k));
    if (std::abs(v - fb.omega_flat) < std::abs(next - fb.omega_flat)) next = v;
  }
  fb.next_level = next;
  fb.gap = std::abs(next - fb.omega_flat);

  // Compact localized states: null vectors of (H - omega_flat) restricted to
  // graph balls, grown until some ball carries exactly one.
  const Eigen::MatrixXd hm = build_photon_operator(lat, t).dense() -
                             fb.omega_flat * Eigen::MatrixXd::Identity(lat.size(), lat.size());
  int max_ring = 0;
  for (int r : lat.ring_of_site()) max_ring = std::max(max_ring, r);
  std::vector<Eigen::VectorXd> found;
  for (int radius = 1; radius <= 8 && found.empty(); ++radius) {
    fb.search_radius = radius;
    for (std::size_t site = 0; site < lat.size(); ++site) {
      const std::vector<int> dist = bfs(lat, site, radius + 1);
      std::vector<Eigen::Index> cols, rows;
      for (std::size_t i = 0; i < lat.size(); ++i) {
        if (dist[i] >= 0 && dist[i] <= radius) cols.push_back(static_cast<Eigen::Index>(i));
        if (dist[i] >= 0) rows.push_back(static_cast<Eigen::Index>(i));
      }
      const Eigen::MatrixXd a = hm(rows, cols);
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
      const auto& sv = svd.singularValues();
      const double thresh = 1e-9 * std::max(1.0, sv.size() ? sv(0) : 1.0);
      Eigen::Index nullity = static_cast<Eigen::Index>(cols.size()) - sv.size();
      for (Eigen::Index k = 0; k < sv.size(); ++k) nullity += sv(k) <= thresh ? 1 : 0;
      if (nullity != 1) continue;
      const Eigen::VectorXd z = svd.matrixV().col(static_cast<Eigen::Index>(cols.size()) - 1);
      Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(lat.size()));
      for (std::size_t k = 0; k < cols.size(); ++k) v(cols[k]) = z(static_cast<Eigen::Index>(k));
      for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (std::abs(v(i)) < kSupportCut) v(i) = 0.0;
      }
      v.normalize();
      for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (v(i) != 0.0) {
          if (v(i) < 0.0) v = -v;
          break;
        }
      }
      const bool dup = std::any_of(found.begin(), found.end(),
                                   [&](const Eigen::VectorXd& u) { return (u - v).cwiseAbs().maxCoeff() < 1e-8; });
      if (!dup) found.push_back(v);
    }
  }
  fb.localized.resize(static_cast<Eigen::Index>(lat.size()), static_cast<Eigen::Index>(found.size()));
  for (std::size_t k = 0; k < found.size(); ++k) {
    fb.localized.col(static_cast<Eigen::Index>(k)) = found[k];
    std::vector<std::size_t> sup;
    bool edge = false;
    for (Eigen::Index i = 0; i < found[k].size(); ++i) {
      if (std::abs(found[k](i)) > kSupportCut) {
        sup.push_back(static_cast<std::size_t>(i));
        edge = edge || lat.ring_of_site()[static_cast<std::size_t>(i)] == max_ring;
      }
    }
    fb.support.push_back(std::move(sup));
    fb.boundary.push_back(edge);
  }
  if (!found.empty()) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(fb.localized);
    qr.setThreshold(1e-9);
    fb.localized_rank = static_cast<std::size_t>(qr.rank());
  }
  return fb;
}

Eigen::MatrixXd flat_band_kernel(const FlatBandProjector& fb, FlatBandKernel kind) {
  if (kind == FlatBandKernel::projector) return fb.basis * fb.basis.transpose();
  if (fb.localized.cols() == 0) throw ContractError("no compact localized states available");
  return fb.localized * fb.localized.transpose();
}

SpinCouplingMatrix flat_band_spin_model(const FlatBandProjector& fb, const HyperbolicLattice& lat,
                                        const std::vector<std::size_t>& sites, double delta,
                                        double g, FlatBandKernel kind, GuardOptions guard) {
  check_sites(lat, sites);
  SpinCouplingMatrix m;
  m.generator = CouplingGenerator::flat_band;
  m.delta = delta;
  m.g = g;
  m.omega_flat = fb.omega_flat;
  m.qubit_sites = sites;
  for (std::size_t s : sites) m.positions.push_back(lat.site(s));
  const double det = delta - fb.omega_flat;
  if (det == 0.0) throw DomainError("Delta coincides with the flat band");
  guard_check(m, std::abs(det), guard, "flat-band detuning |Delta - omega_flat| >> g");
  for (double e : fb.spectrum) {
    if (std::abs(e - fb.omega_flat) > 1e-6 && std::abs(delta - e) < std::abs(det)) {
      m.warnings.push_back("Delta is closer to a dispersive level (" + std::to_string(e) +
                           ") than to the flat band; band mixing is neglected");
      break;
    }
  }
  const Eigen::MatrixXd K = flat_band_kernel(fb, kind);
  const auto n = static_cast<Eigen::Index>(sites.size());
  m.J = Eigen::MatrixXd::Zero(n, n);
  const double pre = g * g / det;
  for (Eigen::Index a = 0; a < n; ++a) {
    const auto sa = static_cast<Eigen::Index>(sites[static_cast<std::size_t>(a)]);
    m.onsite_shift.push_back(pre * K(sa, sa));
    for (Eigen::Index b = 0; b < n; ++b) {
      if (a != b) m.J(a, b) = pre * K(sa, static_cast<Eigen::Index>(sites[static_cast<std::size_t>(b)]));
    }
  }
  return m;
}

std::string spin_model_to_json(const SpinCouplingMatrix& m) {
  nlohmann::json j;
  j["generator"] = to_string(m.generator);
  j["params"] = {{"delta", m.delta}, {"g", m.g}};
  if (m.generator == CouplingGenerator::flat_band) j["params"]["omega_flat"] = m.omega_flat;
  j["qubit_sites"] = m.qubit_sites;
  nlohmann::json pos = nlohmann::json::array();
  for (const auto& z : m.positions) pos.push_back({z.re(), z.im()});
  j["positions"] = pos;
  std::vector<double> flat;
  for (Eigen::Index a = 0; a < m.J.rows(); ++a) {
    for (Eigen::Index b = 0; b < m.J.cols(); ++b) flat.push_back(m.J(a, b));
  }
  j["J"] = flat;
  j["onsite_shift"] = m.onsite_shift;
  if (!m.warnings.empty()) j["warnings"] = m.warnings;
  return j.dump(1) + "\n";
}

}  // namespace hypercqed
