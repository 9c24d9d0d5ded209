#pragma once

// Photon hopping operator and the qubit-photon operator in the
// single-excitation sector. Basis: photon sites in lattice order, then qubits
// in input order.

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "hypercqed/tessellation.hpp"

namespace hypercqed {

struct QubitSpec {
  std::size_t site = 0;
  double delta = 0.0;  // detuning, units of t
  double g = 0.0;      // coupling, units of t
};

class SingleExcitationOperator {
 public:
  using Sparse = Eigen::SparseMatrix<double>;

  SingleExcitationOperator(Sparse matrix, std::size_t photons,
                           std::vector<QubitSpec> qubits, double t);

  std::size_t dim() const noexcept { return static_cast<std::size_t>(matrix_.rows()); }
  std::size_t photon_count() const noexcept { return photons_; }
  std::size_t qubit_count() const noexcept { return qubits_.size(); }
  const std::vector<QubitSpec>& qubits() const noexcept { return qubits_; }
  double hopping() const noexcept { return t_; }

  /// Basis index of qubit k.
  std::size_t qubit_index(std::size_t k) const { return photons_ + k; }

  const Sparse& matrix() const noexcept { return matrix_; }
  Eigen::MatrixXd dense() const { return Eigen::MatrixXd(matrix_); }
  /// The photon-only block (a view copy).
  Sparse photon_block() const;

 private:
  Sparse matrix_;
  std::size_t photons_;
  std::vector<QubitSpec> qubits_;
  double t_;
};

/// -t on every edge, zero diagonal.
SingleExcitationOperator build_photon_operator(const HyperbolicLattice& lat, double t);

/// Photon block plus one slot per qubit with diagonal delta and coupling g to
/// its site. Throws InvalidSpecError on out-of-range or duplicate sites or
/// negative g.
SingleExcitationOperator build_qubit_photon_operator(const HyperbolicLattice& lat,
                                                     double t,
                                                     const std::vector<QubitSpec>& qubits);

/// Same as above from a bare edge list (used for toy graphs).
SingleExcitationOperator build_operator(std::size_t sites, const std::vector<Edge>& edges,
                                        double t, const std::vector<QubitSpec>& qubits = {});

/// "row col value" per stored upper-and-lower entry, 17 significant digits.
std::string to_coo(const SingleExcitationOperator& op);

}  // namespace hypercqed
