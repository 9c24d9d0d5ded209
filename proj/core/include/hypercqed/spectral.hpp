#pragma once

// Eigendecomposition and spectral observables: DOS, cumulative DOS, local
// spectral function j(omega), its cumulative J(omega), the Weyl law and the
// L = 1 continuum curves.

#include <cstddef>
#include <iosfwd>
#include <string_view>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "hypercqed/hamiltonian.hpp"

namespace hypercqed {

struct Spectrum {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // columns aligned with `values`; empty if not requested

  bool has_vectors() const noexcept { return vectors.size() > 0; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(values.size()); }
  double lowest() const { return values(0); }
  double highest() const { return values(values.size() - 1); }
};

/// Dense symmetric eigendecomposition (LAPACK dsyevd). Eigenvectors are
/// sign-fixed so that the entry of largest magnitude (first on ties) is
/// positive. Throws NumericError on solver failure.
Spectrum eigendecompose(const Eigen::MatrixXd& h, bool want_vectors);
Spectrum eigendecompose(const SingleExcitationOperator& op, bool want_vectors);

struct BandEdges {
  double lower = 0.0;
  double upper = 0.0;
};

/// Extremal eigenvalues of a sparse symmetric matrix by shift-invert Lanczos
/// below and above the Gershgorin interval. Accurate to ~1e-12.
BandEdges band_edges(const Eigen::SparseMatrix<double>& h);

enum class CurveKind { dos, cumulative_dos, j_local, cumulative_j, weyl, continuum_L1 };

std::string_view to_string(CurveKind kind) noexcept;

/// Either a histogram (bin_edges.size() == values.size() + 1, omega holds the
/// bin centres) or a pointwise curve (bin_edges empty).
struct SpectralCurve {
  std::vector<double> bin_edges;
  std::vector<double> omega;
  std::vector<double> values;
  CurveKind kind = CurveKind::dos;
};

/// Bin edges E0 + k * bin covering [E0, Emax].
std::vector<double> anchored_bins(double e0, double emax, double bin);

/// Histogram of eigenvalues per unit energy; integrates to N.
SpectralCurve dos_histogram(const Spectrum& s, double bin);

/// P(omega) = #(E_j <= omega) / n evaluated at every eigenvalue.
SpectralCurve cumulative_dos(const Spectrum& s, std::size_t n);

/// P(omega) at arbitrary energies.
std::vector<double> cumulative_dos_at(const Spectrum& s, std::size_t n,
                                      const std::vector<double>& omega);

/// j(omega) = 2 pi g^2 sum_j |psi_j(site)|^2 delta(omega - E_j), binned.
SpectralCurve local_spectral_function(const Spectrum& s, std::size_t site, double g,
                                      double bin);

/// J(omega) = int^omega j / g^2. With bin == 0 the curve is sampled at the
/// eigenvalues (right-continuous step values); otherwise at the bin edges.
SpectralCurve cumulative_spectral(const Spectrum& s, std::size_t site, double bin = 0.0);

/// (pi M / 56) g^2 tanh(pi sqrt((omega - E0) M) / 2).
double continuum_j_L1(double omega, double g, double M, double e0);

/// int_{E0}^{omega} j_L1 / g^2.
double continuum_J_L1(double omega, double M, double e0);

/// N (M / 112) tanh(pi sqrt((omega - E0) M) / 2).
double continuum_dos_L1(double omega, std::size_t n, double M, double e0);

/// Two-term Weyl law L^2/(3h^2(1-L^2)) - (L/h)/(2 sqrt3 (1-L^2) sqrt(omega - E0)).
double weyl_dos(double omega, double L, double h, double e0);

/// Integral of weyl_dos from E0 to omega.
double weyl_cumulative(double omega, double L, double h, double e0);

/// Area (bulk) term of weyl_cumulative alone.
double weyl_cumulative_bulk(double omega, double L, double h, double e0);

/// Energy above E0 where the two Weyl terms cancel.
double weyl_zero_crossing(double L, double h);

/// RMSE between the lattice J (sampled at eigenvalues below omega_max) and
/// J_L1 evaluated at the same energies.
double cumulative_j_rmse(const Spectrum& s, std::size_t site, double M, double e0,
                         double omega_max);

/// CSV with header `omega,value,kind`.
void write_curve_csv(std::ostream& os, const SpectralCurve& curve);

}  // namespace hypercqed
