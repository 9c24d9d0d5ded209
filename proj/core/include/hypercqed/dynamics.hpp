#pragma once

// Single-excitation real-time evolution and Markovian decay rates.

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "hypercqed/hamiltonian.hpp"
#include "hypercqed/spectral.hpp"

namespace hypercqed {

struct EvolutionResult {
  std::vector<double> times;
  Eigen::MatrixXd excited_population;  // times x qubits
  Eigen::MatrixXd photon_populations;  // times x sites; empty unless requested
  std::vector<double> norm;            // total norm per time
};

/// exp(-i H t) from a full spectral decomposition.
class Propagator {
 public:
  explicit Propagator(Spectrum spectrum);
  /// c(t) = V exp(-i Lambda t) V^T c0.
  Eigen::VectorXcd apply(const Eigen::VectorXcd& c0, double t) const;
  const Spectrum& spectrum() const noexcept { return s_; }

 private:
  Spectrum s_;
};

/// Evolves the basis state `initial` (index into the operator basis).
/// Times must be sorted; negative times are allowed (time reversal).
EvolutionResult evolve(const SingleExcitationOperator& op, std::size_t initial,
                       const std::vector<double>& times, bool photon_populations = false);

/// Same, reusing an existing propagator and an arbitrary initial vector.
EvolutionResult evolve(const Propagator& prop, const SingleExcitationOperator& op,
                       const Eigen::VectorXcd& c0, const std::vector<double>& times,
                       bool photon_populations = false);

/// Exact qubit amplitude for one qubit bordering a photon spectrum: the
/// eigenvalues of the arrowhead operator [[H_ph, g e_s], [g e_s^T, Delta]]
/// from its secular equation, and their qubit weights.
class QubitPropagator {
 public:
  QubitPropagator(const Spectrum& photons, std::size_t site, double delta, double g);

  std::complex<double> amplitude(double t) const;
  double excited_population(double t) const { return std::norm(amplitude(t)); }

  const std::vector<double>& energies() const noexcept { return energies_; }
  const std::vector<double>& weights() const noexcept { return weights_; }

 private:
  std::vector<double> energies_;
  std::vector<double> weights_;
};

struct DecayFit {
  double gamma = 0.0;
  double stderr_ = 0.0;
  double t_min = 0.0;
  double t_max = 15.0;
  bool quality_warning = false;  // stderr / gamma > 0.25 (or gamma <= 0)
};

/// Least squares of ln P(t) against t inside [t_min, t_max].
/// Throws DomainError if P <= 0 inside the window. stderr accounts for the
/// autocorrelation of the residuals, so revivals and Rabi-like beating
/// inflate it.
DecayFit fit_decay_rate(const std::vector<double>& times, const std::vector<double>& population,
                        double t_min = 0.0, double t_max = 15.0);

enum class MarkovConvention { full, half };

std::string_view to_string(MarkovConvention c) noexcept;
MarkovConvention markov_convention_from_string(std::string_view s);

/// Gamma = j (full) or j / 2 (half). Throws DomainError if j < 0.
double markov_gamma(double j_at_delta, MarkovConvention convention);

struct DecayScanRow {
  double delta = 0.0;
  double gamma = 0.0;
  double stderr_ = 0.0;
  double j_binned = 0.0;
  double rho_binned = 0.0;  // states per unit energy per site
  bool quality_warning = false;
};

/// For each Delta, evolves an excited qubit at `site`, fits Gamma on
/// [0, t_max] and records j and rho in the bin (of width `bin`, anchored at
/// E0) containing Delta. `threads` > 1 evaluates Delta values concurrently.
std::vector<DecayScanRow> decay_scan(const Spectrum& photons, std::size_t site, double g,
                                     const std::vector<double>& deltas, double bin,
                                     double t_max = 15.0, std::size_t samples = 151,
                                     unsigned threads = 1);

/// CSV `delta,gamma,stderr,j_binned,rho_binned`.
void write_decay_scan_csv(std::ostream& os, const std::vector<DecayScanRow>& rows);
/// CSV `t,P_up,site_populations...` (photon columns only when recorded).
void write_evolution_csv(std::ostream& os, const EvolutionResult& r);

}  // namespace hypercqed
