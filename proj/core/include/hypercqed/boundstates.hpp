#pragma once

// Qubit-photon bound states outside the photon band: single qubit
// E = Delta + g^2 G_ii(E), and two qubits E = Delta + Sigma_11 +- Sigma_1j.

#include <cstddef>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "hypercqed/greens.hpp"
#include "hypercqed/hamiltonian.hpp"
#include "hypercqed/spectral.hpp"
#include "hypercqed/tessellation.hpp"

namespace hypercqed {

enum class Backend { lattice, continuum };
enum class Branch { lower, upper };
enum class Parity { single, symmetric, antisymmetric };

std::string_view to_string(Backend b) noexcept;
std::string_view to_string(Parity p) noexcept;

/// Source of photon Green functions on the sites of a lattice.
class GreenBackend {
 public:
  virtual ~GreenBackend() = default;
  virtual Backend kind() const noexcept = 0;
  virtual const HyperbolicLattice& lattice() const noexcept = 0;
  virtual double lower_edge() const noexcept = 0;
  virtual double upper_edge() const noexcept = 0;
  /// G_{ab}(omega) for a, b in `sites`.
  virtual Eigen::MatrixXd block(double omega, const std::vector<std::size_t>& sites) const = 0;
  /// Columns G(:, s)(omega) over all lattice sites, one per source site.
  virtual Eigen::MatrixXd columns(double omega, const std::vector<std::size_t>& sites) const = 0;
};

class LatticeBackend final : public GreenBackend {
 public:
  LatticeBackend(const HyperbolicLattice& lat, double t = 1.0);

  Backend kind() const noexcept override { return Backend::lattice; }
  const HyperbolicLattice& lattice() const noexcept override { return lat_; }
  double lower_edge() const noexcept override { return edges_.lower; }
  double upper_edge() const noexcept override { return edges_.upper; }
  Eigen::MatrixXd block(double omega, const std::vector<std::size_t>& sites) const override;
  Eigen::MatrixXd columns(double omega, const std::vector<std::size_t>& sites) const override;

  const SingleExcitationOperator& photon_operator() const noexcept { return op_; }

 private:
  const HyperbolicLattice& lat_;
  SingleExcitationOperator op_;
  BandEdges edges_;
};

class ContinuumBackend final : public GreenBackend {
 public:
  /// Uses the lattice only for site positions; the band edge is params.E0.
  ContinuumBackend(const HyperbolicLattice& lat, ContinuumParams params);

  Backend kind() const noexcept override { return Backend::continuum; }
  const HyperbolicLattice& lattice() const noexcept override { return lat_; }
  double lower_edge() const noexcept override { return p_.E0; }
  double upper_edge() const noexcept override;
  Eigen::MatrixXd block(double omega, const std::vector<std::size_t>& sites) const override;
  Eigen::MatrixXd columns(double omega, const std::vector<std::size_t>& sites) const override;

  const ContinuumParams& params() const noexcept { return p_; }

 private:
  const HyperbolicLattice& lat_;
  ContinuumParams p_;
};

struct BoundStateResult {
  double energy = 0.0;
  std::vector<double> spin_amplitudes;
  Eigen::VectorXd photon_amplitudes;  // per lattice site
  double residual = 0.0;              // |f(E_B)| of the bound-state equation
  Parity parity = Parity::single;
  Backend backend = Backend::lattice;
};

/// E = Delta + g^2 G_ii(E) on the lower (below E0) or upper (above Emax)
/// branch. Throws BracketingError if no root exists in the window;
/// ContractError for the upper branch on the continuum backend.
BoundStateResult solve_single_bound_state(const GreenBackend& g, const QubitSpec& q,
                                          Branch which = Branch::lower);

/// Delta + g^2 G_ii(Delta): the weak-coupling estimate.
double weak_coupling_energy(const GreenBackend& g, const QubitSpec& q);

struct TwoQubitBoundStates {
  std::optional<BoundStateResult> plus;   // E_B^+: symmetric for equal qubits
  std::optional<BoundStateResult> minus;  // E_B^-: antisymmetric
  bool merged = false;                    // |E+ - E-| < 1e-12
  std::string plus_note;                  // reason when a branch is absent
  std::string minus_note;
};

/// Lower-branch solutions of det(E - diag(Delta) - Sigma(E)) = 0 with
/// Sigma_ab = g_a g_b G_ab(E). For equal Delta, g these are
/// E - Delta - Sigma_11 -+ Sigma_12 = 0.
TwoQubitBoundStates solve_two_qubit_bound_states(const GreenBackend& g, const QubitSpec& q1,
                                                 const QubitSpec& q2);

/// |photon amplitude|^2 per site of a normalised bound state.
Eigen::VectorXd photon_density(const BoundStateResult& r);

/// Bound levels of the exact single-excitation operator below `e0`.
std::vector<double> exact_bound_levels(const HyperbolicLattice& lat, double t,
                                       const std::vector<QubitSpec>& qubits, double e0);

struct TwoQubitScanRow {
  double param = 0.0;
  double e_plus = 0.0;   // NaN when absent
  double e_minus = 0.0;  // NaN when absent
  double residual = 0.0;
};

/// CSV `param,E_plus,E_minus,residual`.
void write_scan_csv(std::ostream& os, const std::vector<TwoQubitScanRow>& rows);
/// CSV `site,re,im,n_ph`.
void write_density_csv(std::ostream& os, const HyperbolicLattice& lat,
                       const Eigen::VectorXd& density);

}  // namespace hypercqed
