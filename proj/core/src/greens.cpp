#include "hypercqed/greens.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

#include "hypercqed/error.hpp"
#include "hypercqed/quadrature.hpp"
#include "hypercqed/special_functions.hpp"

namespace hypercqed {

namespace {

constexpr double kPi = std::numbers::pi;
using SpMat = Eigen::SparseMatrix<double>;
using SpMatC = Eigen::SparseMatrix<std::complex<double>>;

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

// Graded breakpoints resolving the scale sqrt(a) near k = 0 and the unit
// scale of tanh(pi k / 2), with panels no wider than one.
std::vector<double> cutoff_breakpoints(double Lambda, double a) {
  std::vector<double> br{0.0};
  double x = std::min(1.0, a > 0.0 ? std::sqrt(a) : 1.0) / 64.0;
  while (x < Lambda) {
    br.push_back(x);
    x = std::min(1.5 * x, x + 1.0);
  }
  br.push_back(Lambda);
  return br;
}

}  // namespace

std::string_view to_string(GreenProvenance p) noexcept {
  switch (p) {
    case GreenProvenance::lattice_resolvent: return "lattice_resolvent";
    case GreenProvenance::continuum_momentum: return "continuum_momentum";
    case GreenProvenance::continuum_legendre: return "continuum_legendre";
  }
  return "unknown";
}

struct Resolvent::Impl {
  Eigen::SimplicialLDLT<SpMat> ldlt;
  Eigen::SparseLU<SpMatC> lu;
};

Resolvent::Resolvent(const SpMat& h, double omega, double eta)
    : impl_(std::make_unique<Impl>()), omega_(omega), eta_(eta), n_(h.rows()) {
  if (!(eta >= 0.0)) throw DomainError("broadening eta must be >= 0");
  if (eta == 0.0) {
    SpMat id(n_, n_);
    id.setIdentity();
    SpMat a = omega * id - h;
    impl_->ldlt.compute(a);
    if (impl_->ldlt.info() != Eigen::Success) {
      throw DomainError("omega = " + fmt(omega) +
                        " is (numerically) an eigenvalue; use a nonzero eta");
    }
    // Sylvester inertia: all pivots share a sign iff omega is outside the spectrum
    const Eigen::VectorXd d = impl_->ldlt.vectorD();
    const bool neg = (d.array() < 0.0).all();
    const bool pos = (d.array() > 0.0).all();
    if (!neg && !pos) {
      throw DomainError("omega = " + fmt(omega) +
                        " lies inside the photon band; in-band Green functions need "
                        "an explicit broadening eta > 0");
    }
  } else {
    SpMatC a(n_, n_);
    std::vector<Eigen::Triplet<std::complex<double>>> trip;
    trip.reserve(static_cast<std::size_t>(h.nonZeros() + n_));
    for (Eigen::Index c = 0; c < h.outerSize(); ++c) {
      for (SpMat::InnerIterator it(h, c); it; ++it) {
        trip.emplace_back(it.row(), it.col(), -it.value());
      }
    }
    for (Eigen::Index i = 0; i < n_; ++i) trip.emplace_back(i, i, std::complex<double>(omega, eta));
    a.setFromTriplets(trip.begin(), trip.end());
    a.makeCompressed();
    impl_->lu.compute(a);
    if (impl_->lu.info() != Eigen::Success) throw NumericError("complex resolvent LU failed");
  }
}

Resolvent::~Resolvent() = default;
Resolvent::Resolvent(Resolvent&&) noexcept = default;
Resolvent& Resolvent::operator=(Resolvent&&) noexcept = default;

Eigen::VectorXd Resolvent::apply(const Eigen::VectorXd& b) const {
  if (!is_real()) throw ContractError("broadened resolvent is complex");
  return impl_->ldlt.solve(b);
}

Eigen::VectorXd Resolvent::column(std::size_t j) const {
  if (!is_real()) throw ContractError("broadened resolvent is complex; use complex_column");
  if (static_cast<Eigen::Index>(j) >= n_) throw DomainError("site index out of range");
  Eigen::VectorXd e = Eigen::VectorXd::Zero(n_);
  e(static_cast<Eigen::Index>(j)) = 1.0;
  return impl_->ldlt.solve(e);
}

Eigen::VectorXcd Resolvent::complex_column(std::size_t j) const {
  if (static_cast<Eigen::Index>(j) >= n_) throw DomainError("site index out of range");
  if (is_real()) return column(j).cast<std::complex<double>>();
  Eigen::VectorXcd e = Eigen::VectorXcd::Zero(n_);
  e(static_cast<Eigen::Index>(j)) = 1.0;
  return impl_->lu.solve(e);
}

GreenEvaluation lattice_green(const SingleExcitationOperator& op, std::size_t i,
                              std::size_t j, double omega, double eta) {
  if (i >= op.photon_count() || j >= op.photon_count()) {
    throw DomainError("site index out of range");
  }
  const Resolvent r(op.photon_block(), omega, eta);
  GreenEvaluation ev;
  ev.omega = omega;
  ev.eta = eta;
  ev.provenance = GreenProvenance::lattice_resolvent;
  ev.value = r.complex_column(j)(static_cast<Eigen::Index>(i));
  return ev;
}

double cutoff_integral(double Lambda, double M) {
  if (!(Lambda > 0.0)) {
    if (Lambda == 0.0) return 0.0;
    throw DomainError("cutoff Lambda must be positive");
  }
  const auto f = [](double k) { return k * std::tanh(0.5 * kPi * k) / (k * k + 1.0); };
  return M / 56.0 * integrate_panels(f, cutoff_breakpoints(Lambda, 1.0));
}

double lambda1_from(double C, double M) { return std::sqrt(std::exp(112.0 * C / M) - 1.0); }

double solve_cutoff(double C, double M) {
  if (!(C > 0.0) || !(M > 0.0)) throw NumericError("cutoff calibration needs C > 0, M > 0");
  double hi = 1.0;
  while (cutoff_integral(hi, M) < C) {
    hi *= 2.0;
    if (hi > 1e6) throw NumericError("cutoff calibration: no bracket below Lambda = 1e6");
  }
  return find_root([&](double L) { return cutoff_integral(L, M) - C; }, 1e-12, hi, 1e-14).x;
}

CutoffCalibration calibrate_cutoff(const HyperbolicLattice& lat, double t) {
  const auto op = build_photon_operator(lat, t);
  const std::size_t c = lat.center_site();
  CutoffCalibration cal;
  cal.rings = lat.spec().rings;
  cal.C = -lattice_green(op, c, c, -3.0 * t).value.real();
  const int z = lat.spec().kind == LatticeKind::vertex_graph ? lat.spec().q : 2 * (lat.spec().q - 1);
  cal.M = effective_mass(lat.lattice_constant(), z);
  cal.Lambda = solve_cutoff(cal.C, cal.M);
  cal.Lambda1 = lambda1_from(cal.C, cal.M);
  return cal;
}

ContinuumParams ContinuumParams::defaults() {
  ContinuumParams p;
  p.M = effective_mass(lattice_constant(7, 3), 3);
  p.E0 = -3.0 + 1.0 / p.M;
  p.Lambda = 10.0;
  return p;
}

GreenEvaluation continuum_green_onsite(double omega, const ContinuumParams& p) {
  if (!(p.Lambda >= 0.0)) throw DomainError("cutoff Lambda must be >= 0");
  if (p.Lambda == 0.0) throw DomainError("cutoff Lambda must be positive");
  if (omega > p.E0) throw DomainError("on-site continuum Green function needs omega <= E0");
  const double a = p.M * (p.E0 - omega);
  const auto f = [a](double k) { return k * std::tanh(0.5 * kPi * k) / (k * k + a); };
  GreenEvaluation ev;
  ev.omega = omega;
  ev.provenance = GreenProvenance::continuum_momentum;
  ev.value = -p.M / 56.0 * integrate_panels(f, cutoff_breakpoints(p.Lambda, a));
  return ev;
}

double continuum_green_onsite_log(double omega, const ContinuumParams& p) {
  if (!(p.Lambda > 0.0)) throw DomainError("cutoff Lambda must be positive");
  return p.M / 112.0 * std::log(std::abs(omega - p.E0) * p.M / (p.Lambda * p.Lambda));
}

double continuum_green_at_distance(double d, double omega, const ContinuumParams& p) {
  if (!(d > 0.0)) throw DomainError("off-site Green function needs distinct points");
  const double x = std::cosh(d / p.kappa);
  // -nu - 1 = (-1 - i sqrt(M (omega - E0))) / 2, real and >= -1/2 below the band
  const cplx root = std::sqrt(cplx(p.M * (omega - p.E0), 0.0));
  const cplx mu = 0.5 * (-1.0 - cplx(0.0, 1.0) * root);
  return -p.M / 56.0 * legendre_q(mu, x).real();
}

GreenEvaluation continuum_green_offsite(DiskPoint z, DiskPoint z2, double omega,
                                        const ContinuumParams& p) {
  GreenEvaluation ev;
  ev.omega = omega;
  ev.distance = hyperbolic_distance(z, z2, p.kappa);
  ev.provenance = GreenProvenance::continuum_legendre;
  ev.value = continuum_green_at_distance(ev.distance, omega, p);
  return ev;
}

double continuum_green_legendre(double d, double omega, std::complex<double> C,
                                const ContinuumParams& p) {
  const double x = std::cosh(d / p.kappa);
  const cplx root = std::sqrt(cplx(p.M * (omega - p.E0), 0.0));
  const cplx nu = 0.5 * (-1.0 + cplx(0.0, 1.0) * root);
  const cplx q = legendre_q(nu, x);
  const cplx pv = C == 0.0 ? cplx(0.0) : legendre_p(nu, x);
  return -p.M / 56.0 * (q - C * pv).real();
}

double correlation_length(double omega, double M, double e0, double kappa) {
  if (omega > e0) throw DomainError("correlation length is defined for omega <= E0");
  return kappa / (1.0 + std::sqrt(M * (e0 - omega)));
}

CorrelationFit fit_decay(const std::vector<std::pair<double, double>>& samples) {
  if (samples.size() < 4) throw NumericError("decay fit needs at least 4 samples");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(samples.size());
  double dmin = samples.front().first, dmax = dmin;
  for (const auto& [d, g] : samples) {
    if (!(g > 0.0)) throw DomainError("decay fit needs strictly positive magnitudes");
    const double y = std::log(g);
    sx += d;
    sy += y;
    sxx += d * d;
    sxy += d * y;
    dmin = std::min(dmin, d);
    dmax = std::max(dmax, d);
  }
  const double den = n * sxx - sx * sx;
  if (!(dmax - dmin > 0.0) || std::abs(den) <= 1e-14 * n * sxx) {
    throw NumericError("decay fit: degenerate distance spread");
  }
  const double slope = (n * sxy - sx * sy) / den;
  const double icept = (sy - slope * sx) / n;
  if (!(slope < 0.0)) throw NumericError("decay fit: magnitudes do not decay");
  CorrelationFit fit;
  fit.xi = -1.0 / (2.0 * slope);
  fit.prefactor = std::exp(icept);
  double r2 = 0.0;
  for (const auto& [d, g] : samples) {
    const double r = std::log(g) - (icept + slope * d);
    r2 += r * r;
  }
  fit.residual = std::sqrt(r2 / n);
  return fit;
}

void write_green_csv(std::ostream& os, const std::vector<GreenEvaluation>& rows) {
  os << "d,omega,value,provenance\n";
  char buf[128];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,", r.distance, r.omega, r.value.real());
    os << buf << to_string(r.provenance) << '\n';
  }
}

}  // namespace hypercqed
