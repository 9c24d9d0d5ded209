#include "hypercqed/boundstates.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "hypercqed/error.hpp"
#include "hypercqed/quadrature.hpp"

namespace hypercqed {

namespace {

constexpr double kEdgeGap = 1e-9;

// Eigen-pair of a symmetric 2x2 matrix; k = 0 lowest, k = 1 highest.
std::pair<double, Eigen::Vector2d> eig2(const Eigen::Matrix2d& m, int k) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(m);
  Eigen::Vector2d v = es.eigenvectors().col(k);
  if (v(0) < 0.0 || (v(0) == 0.0 && v(1) < 0.0)) v = -v;
  return {es.eigenvalues()(k), v};
}

// Extends `far` away from `near` until f(far) has the required sign.
double extend_bracket(const std::function<double(double)>& f, double near, double far,
                      bool want_negative) {
  for (int it = 0; it < 60; ++it) {
    const double v = f(far);
    if (want_negative ? v < 0.0 : v > 0.0) return far;
    far = near + 2.0 * (far - near);
  }
  throw BracketingError("could not bracket the bound-state root");
}

BoundStateResult assemble(const GreenBackend& gb, double e, const std::vector<std::size_t>& sites,
                          const std::vector<double>& couplings, const std::vector<double>& spins,
                          double residual, Parity parity) {
  const Eigen::MatrixXd cols = gb.columns(e, sites);
  Eigen::VectorXd phi = Eigen::VectorXd::Zero(cols.rows());
  for (std::size_t w = 0; w < sites.size(); ++w) {
    phi += couplings[w] * spins[w] * cols.col(static_cast<Eigen::Index>(w));
  }
  double norm2 = phi.squaredNorm();
  for (double c : spins) norm2 += c * c;
  const double s = 1.0 / std::sqrt(norm2);
  BoundStateResult r;
  r.energy = e;
  r.photon_amplitudes = s * phi;
  for (double c : spins) r.spin_amplitudes.push_back(s * c);
  r.residual = residual;
  r.parity = parity;
  r.backend = gb.kind();
  return r;
}

}  // namespace

std::string_view to_string(Backend b) noexcept {
  return b == Backend::lattice ? "lattice" : "continuum";
}

std::string_view to_string(Parity p) noexcept {
  switch (p) {
    case Parity::single: return "single";
    case Parity::symmetric: return "symmetric";
    case Parity::antisymmetric: return "antisymmetric";
  }
  return "unknown";
}

LatticeBackend::LatticeBackend(const HyperbolicLattice& lat, double t)
    : lat_(lat), op_(build_photon_operator(lat, t)), edges_(band_edges(op_.matrix())) {}

Eigen::MatrixXd LatticeBackend::columns(double omega, const std::vector<std::size_t>& sites) const {
  const Resolvent r(op_.matrix(), omega);
  Eigen::MatrixXd out(static_cast<Eigen::Index>(lat_.size()), static_cast<Eigen::Index>(sites.size()));
  for (std::size_t k = 0; k < sites.size(); ++k) out.col(static_cast<Eigen::Index>(k)) = r.column(sites[k]);
  return out;
}

Eigen::MatrixXd LatticeBackend::block(double omega, const std::vector<std::size_t>& sites) const {
  const Eigen::MatrixXd cols = columns(omega, sites);
  const auto n = static_cast<Eigen::Index>(sites.size());
  Eigen::MatrixXd b(n, n);
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index c = 0; c < n; ++c) b(a, c) = cols(static_cast<Eigen::Index>(sites[a]), c);
  }
  return 0.5 * (b + b.transpose());
}

ContinuumBackend::ContinuumBackend(const HyperbolicLattice& lat, ContinuumParams params)
    : lat_(lat), p_(params) {
  if (!(p_.M > 0.0) || !(p_.Lambda > 0.0)) throw DomainError("continuum backend needs M, Lambda > 0");
}

double ContinuumBackend::upper_edge() const noexcept {
  return std::numeric_limits<double>::infinity();
}

Eigen::MatrixXd ContinuumBackend::block(double omega, const std::vector<std::size_t>& sites) const {
  const auto n = static_cast<Eigen::Index>(sites.size());
  Eigen::MatrixXd b(n, n);
  const double onsite = continuum_green_onsite(omega, p_).value.real();
  for (Eigen::Index a = 0; a < n; ++a) {
    b(a, a) = onsite;
    for (Eigen::Index c = a + 1; c < n; ++c) {
      b(a, c) = b(c, a) =
          continuum_green_offsite(lat_.site(sites[a]), lat_.site(sites[c]), omega, p_).value.real();
    }
  }
  return b;
}

Eigen::MatrixXd ContinuumBackend::columns(double omega, const std::vector<std::size_t>& sites) const {
  const double onsite = continuum_green_onsite(omega, p_).value.real();
  Eigen::MatrixXd out(static_cast<Eigen::Index>(lat_.size()), static_cast<Eigen::Index>(sites.size()));
  for (std::size_t k = 0; k < sites.size(); ++k) {
    for (std::size_t i = 0; i < lat_.size(); ++i) {
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
          i == sites[k] ? onsite
                        : continuum_green_offsite(lat_.site(i), lat_.site(sites[k]), omega, p_)
                              .value.real();
    }
  }
  return out;
}

BoundStateResult solve_single_bound_state(const GreenBackend& gb, const QubitSpec& q,
                                          Branch which) {
  if (!(q.g > 0.0)) throw DomainError("bound-state solver needs g > 0");
  if (q.site >= gb.lattice().size()) throw InvalidSpecError("qubit site out of range");
  if (which == Branch::upper && gb.kind() == Backend::continuum) {
    throw ContractError("the upper bound state is supported on the lattice backend only");
  }
  const std::vector<std::size_t> sites{q.site};
  const auto f = [&](double e) { return e - q.delta - q.g * q.g * gb.block(e, sites)(0, 0); };
  double a, b;
  if (which == Branch::lower) {
    const double e0 = gb.lower_edge();
    b = e0 - kEdgeGap;
    if (f(b) <= 0.0) {
      throw BracketingError("no lower bound state: f(E0 - 1e-9) <= 0 for Delta = " +
                            std::to_string(q.delta) + ", g = " + std::to_string(q.g));
    }
    a = extend_bracket(f, e0, e0 - 5.0 * q.g * q.g - 5.0 * std::abs(q.delta - e0) - 1e-3, true);
  } else {
    const double em = gb.upper_edge();
    a = em + kEdgeGap;
    if (f(a) >= 0.0) {
      throw BracketingError("no upper bound state: f(Emax + 1e-9) >= 0");
    }
    b = extend_bracket(f, em, em + 5.0 * q.g * q.g + 5.0 * std::abs(q.delta - em) + 1e-3, false);
  }
  const RootResult root = find_root(f, a, b);
  return assemble(gb, root.x, sites, {q.g}, {1.0}, std::abs(f(root.x)), Parity::single);
}

double weak_coupling_energy(const GreenBackend& gb, const QubitSpec& q) {
  return q.delta + q.g * q.g * gb.block(q.delta, {q.site})(0, 0);
}

TwoQubitBoundStates solve_two_qubit_bound_states(const GreenBackend& gb, const QubitSpec& q1,
                                                 const QubitSpec& q2) {
  if (q1.site == q2.site) throw InvalidSpecError("two-qubit solver needs distinct sites");
  if (!(q1.g > 0.0) || !(q2.g > 0.0)) throw DomainError("bound-state solver needs g > 0");
  const std::vector<std::size_t> sites{q1.site, q2.site};
  const Eigen::Vector2d gv(q1.g, q2.g);
  const auto effective = [&](double e) {
    Eigen::Matrix2d m = gb.block(e, sites).cwiseProduct(gv * gv.transpose());
    m(0, 0) += q1.delta;
    m(1, 1) += q2.delta;
    return m;
  };
  const double e0 = gb.lower_edge();
  const double gmax = std::max(q1.g, q2.g);
  const double dmax = std::max(std::abs(q1.delta - e0), std::abs(q2.delta - e0));
  TwoQubitBoundStates out;
  for (int k = 0; k < 2; ++k) {
    const auto f = [&](double e) { return e - eig2(effective(e), k).first; };
    auto& slot = k == 0 ? out.plus : out.minus;
    auto& note = k == 0 ? out.plus_note : out.minus_note;
    const double b = e0 - kEdgeGap;
    if (f(b) <= 0.0) {
      note = "no root below the band edge (f(E0 - 1e-9) <= 0)";
      continue;
    }
    try {
      const double a = extend_bracket(f, e0, e0 - 5.0 * gmax * gmax - 5.0 * dmax - 1e-3, true);
      const RootResult root = find_root(f, a, b);
      const auto [lam, c] = eig2(effective(root.x), k);
      const Parity parity = c(0) * c(1) >= 0.0 ? Parity::symmetric : Parity::antisymmetric;
      slot = assemble(gb, root.x, sites, {q1.g, q2.g}, {c(0), c(1)}, std::abs(root.x - lam), parity);
    } catch (const BracketingError& e) {
      note = e.what();
    }
  }
  out.merged = out.plus && out.minus && std::abs(out.plus->energy - out.minus->energy) < 1e-12;
  return out;
}

Eigen::VectorXd photon_density(const BoundStateResult& r) {
  return r.photon_amplitudes.array().square();
}

std::vector<double> exact_bound_levels(const HyperbolicLattice& lat, double t,
                                       const std::vector<QubitSpec>& qubits, double e0) {
  const Spectrum s = eigendecompose(build_qubit_photon_operator(lat, t, qubits), false);
  std::vector<double> out;
  for (Eigen::Index k = 0; k < s.values.size() && s.values(k) < e0; ++k) out.push_back(s.values(k));
  return out;
}

void write_scan_csv(std::ostream& os, const std::vector<TwoQubitScanRow>& rows) {
  os << "param,E_plus,E_minus,residual\n";
  char buf[160];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", r.param, r.e_plus, r.e_minus,
                  r.residual);
    os << buf;
  }
}

void write_density_csv(std::ostream& os, const HyperbolicLattice& lat,
                       const Eigen::VectorXd& density) {
  os << "site,re,im,n_ph\n";
  char buf[128];
  for (std::size_t i = 0; i < lat.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g\n", i, lat.site(i).re(), lat.site(i).im(),
                  density(static_cast<Eigen::Index>(i)));
    os << buf;
  }
}

}  // namespace hypercqed
