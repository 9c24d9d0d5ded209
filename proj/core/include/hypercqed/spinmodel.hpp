#pragma once

// Photon-mediated spin models: flip-flop couplings g^2 G_ij(Delta) and
// strictly finite-range couplings from a flat band of a line graph.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "hypercqed/geometry.hpp"
#include "hypercqed/tessellation.hpp"

namespace hypercqed {

enum class CouplingGenerator { green_function, flat_band };
std::string_view to_string(CouplingGenerator g) noexcept;

struct SpinCouplingMatrix {
  std::vector<std::size_t> qubit_sites;
  std::vector<DiskPoint> positions;
  Eigen::MatrixXd J;  // symmetric, zero diagonal
  std::vector<double> onsite_shift;
  CouplingGenerator generator = CouplingGenerator::green_function;
  double delta = 0.0;
  double g = 0.0;
  double omega_flat = 0.0;  // flat_band only
  std::vector<std::string> warnings;
};

struct GuardOptions {
  double factor = 5.0;  // required detuning in units of g
  bool strict = false;  // promote guard warnings to DomainError
};

/// J_ij = g^2 G_ij(Delta) (i != j), onsite shift g^2 G_ii(Delta). Delta must
/// lie outside the photon band; distance from the nearest band edge below
/// factor * g triggers a warning (error when strict).
SpinCouplingMatrix effective_flip_flop(const HyperbolicLattice& lat, double t,
                                       const std::vector<std::size_t>& sites, double delta,
                                       double g, GuardOptions guard = {});

struct FlatBandProjector {
  double omega_flat = 0.0;
  std::size_t degeneracy = 0;
  double next_level = 0.0;  // closest eigenvalue outside the cluster
  double gap = 0.0;         // |next_level - omega_flat|
  Eigen::MatrixXd basis;    // N x degeneracy, orthonormal eigenvectors
  // Compact localized eigenvectors (unit norm, minimal support found by the
  // ball search); an overcomplete spanning set when rank == degeneracy.
  Eigen::MatrixXd localized;
  std::vector<std::vector<std::size_t>> support;  // sites with |amp| > 1e-10
  std::vector<bool> boundary;                     // touches the outermost ring
  std::size_t localized_rank = 0;
  int search_radius = 0;
  std::vector<double> spectrum;  // full photon spectrum, ascending
};

/// Detects the macroscopically degenerate level of a line-graph photon
/// operator (cluster tolerance `tol`, default 1e-8 ||H||) and its compact
/// localized states. Throws ContractError for vertex graphs and NumericError
/// when no cluster larger than 3 exists.
FlatBandProjector find_flat_band(const HyperbolicLattice& lat, double t, double tol = 0.0);

enum class FlatBandKernel {
  localized,  // sum_k phi_k phi_k^T over compact localized states
  projector,  // orthogonal projector onto the flat band
};

std::string_view to_string(FlatBandKernel k) noexcept;
FlatBandKernel flat_band_kernel_from_string(std::string_view s);

Eigen::MatrixXd flat_band_kernel(const FlatBandProjector& fb, FlatBandKernel kind);

/// J_ij = g^2 / (Delta - omega_flat) K_ij with K from `kind`.
SpinCouplingMatrix flat_band_spin_model(const FlatBandProjector& fb, const HyperbolicLattice& lat,
                                        const std::vector<std::size_t>& sites, double delta,
                                        double g, FlatBandKernel kind = FlatBandKernel::localized,
                                        GuardOptions guard = {});

/// {generator, params, qubit_sites, positions, J, onsite_shift}.
std::string spin_model_to_json(const SpinCouplingMatrix& m);

}  // namespace hypercqed
