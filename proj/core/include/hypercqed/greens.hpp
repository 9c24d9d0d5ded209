#pragma once

// Photon Green functions G(omega) = (omega - H)^{-1}: lattice resolvent,
// continuum cutoff integral (on-site), continuum Legendre form (off-site),
// cutoff calibration and correlation-length fits.

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <memory>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "hypercqed/geometry.hpp"
#include "hypercqed/hamiltonian.hpp"
#include "hypercqed/tessellation.hpp"

namespace hypercqed {

enum class GreenProvenance { lattice_resolvent, continuum_momentum, continuum_legendre };

std::string_view to_string(GreenProvenance p) noexcept;

struct GreenEvaluation {
  double omega = 0.0;
  double eta = 0.0;
  double distance = 0.0;  // hyperbolic distance between source and target
  std::complex<double> value;
  GreenProvenance provenance = GreenProvenance::lattice_resolvent;
};

/// Factorised (omega + i eta - H) for repeated column solves. With eta = 0
/// the shift must lie outside the spectrum; this is checked from the inertia
/// of the LDL^T factors.
class Resolvent {
 public:
  Resolvent(const Eigen::SparseMatrix<double>& h, double omega, double eta = 0.0);
  ~Resolvent();
  Resolvent(Resolvent&&) noexcept;
  Resolvent& operator=(Resolvent&&) noexcept;

  double omega() const noexcept { return omega_; }
  double eta() const noexcept { return eta_; }
  bool is_real() const noexcept { return eta_ == 0.0; }

  /// Column G(:, j).
  Eigen::VectorXd column(std::size_t j) const;
  Eigen::VectorXcd complex_column(std::size_t j) const;
  /// G applied to an arbitrary vector.
  Eigen::VectorXd apply(const Eigen::VectorXd& b) const;

  double operator()(std::size_t i, std::size_t j) const { return column(j)(static_cast<Eigen::Index>(i)); }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  double omega_;
  double eta_;
  Eigen::Index n_;
};

/// Single element G_ij(omega + i eta) of the photon block of `op`.
GreenEvaluation lattice_green(const SingleExcitationOperator& op, std::size_t i,
                              std::size_t j, double omega, double eta = 0.0);

struct CutoffCalibration {
  int rings = 0;
  double C = 0.0;        // -G_11(-3 t) at the centre site (positive)
  double M = 0.0;        // effective mass used for the cutoff integral
  double Lambda = 0.0;   // solves C = (M/56) int_0^Lambda k tanh(pi k/2)/(k^2+1)
  double Lambda1 = 0.0;  // sqrt(exp(112 C / M) - 1)
};

/// (M/56) int_0^Lambda k tanh(pi k / 2) / (k^2 + 1) dk.
double cutoff_integral(double Lambda, double M);
/// Closed form sqrt(exp(112 C / M) - 1) (tanh neglected).
double lambda1_from(double C, double M);
/// Inverts cutoff_integral for Lambda. Throws NumericError if C <= 0 or the
/// root cannot be bracketed below Lambda = 1e6.
double solve_cutoff(double C, double M);

CutoffCalibration calibrate_cutoff(const HyperbolicLattice& lat, double t = 1.0);

struct ContinuumParams {
  double M = 0.0;
  double E0 = 0.0;
  double Lambda = 10.0;
  double kappa = kKappa;

  /// {7,3} defaults: M = 4/(3 h^2) with h = 0.2758, E0 = -3 + 1/M, Lambda = 10.
  static ContinuumParams defaults();
};

/// On-site cutoff integral -(M/56) int_0^Lambda k tanh(pi k/2) / (k^2 + M(E0 - omega)).
/// Requires omega <= E0 and Lambda > 0.
GreenEvaluation continuum_green_onsite(double omega, const ContinuumParams& p);

/// Log approximation (M/112) ln(|omega - E0| M / Lambda^2), tanh neglected.
double continuum_green_onsite_log(double omega, const ContinuumParams& p);

/// Off-site Legendre form -(M/56) Re[Q_nu(x) - C(omega) P_nu(x)],
/// x = cosh(d/kappa), nu = (-1 + i sqrt(M(omega - E0)))/2, with
/// C(omega) = pi cot(pi nu) so that the combination decays (equal to
/// Q_{-nu-1}). Requires z != z2.
GreenEvaluation continuum_green_offsite(DiskPoint z, DiskPoint z2, double omega,
                                        const ContinuumParams& p);
/// Same as a function of the distance.
double continuum_green_at_distance(double d, double omega, const ContinuumParams& p);

/// Literal evaluation with an explicit coefficient C: -(M/56) Re[Q_nu - C P_nu].
double continuum_green_legendre(double d, double omega, std::complex<double> C,
                                const ContinuumParams& p);

/// Curvature-limited correlation length kappa / (1 + sqrt(M (E0 - omega))).
double correlation_length(double omega, double M, double e0, double kappa = kKappa);

struct CorrelationFit {
  double xi = 0.0;
  double prefactor = 0.0;
  double residual = 0.0;  // rms of the log-space fit
};

/// Least squares of ln|G| against d; xi = -1 / (2 slope).
CorrelationFit fit_decay(const std::vector<std::pair<double, double>>& samples);

/// CSV with header `d,omega,value,provenance`.
void write_green_csv(std::ostream& os, const std::vector<GreenEvaluation>& rows);

}  // namespace hypercqed
