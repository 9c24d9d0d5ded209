#pragma once

// Finite {p,q} hyperbolic lattices grown ring by ring from a central polygon,
// and their line graphs.

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hypercqed/geometry.hpp"

namespace hypercqed {

enum class LatticeKind { vertex_graph, line_graph };

std::string_view to_string(LatticeKind kind) noexcept;
LatticeKind lattice_kind_from_string(std::string_view s);

struct LatticeSpec {
  int p = 7;
  int q = 3;
  int rings = 1;
  LatticeKind kind = LatticeKind::vertex_graph;

  /// Throws InvalidSpecError unless p, q >= 3, (p-2)(q-2) > 4 and rings >= 1.
  void validate() const;

  friend bool operator==(const LatticeSpec&, const LatticeSpec&) = default;
};

struct Edge {
  std::size_t a = 0;  // a < b
  std::size_t b = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Upper bound on generated site counts.
inline constexpr std::size_t kMaxSites = 100000;

class HyperbolicLattice {
 public:
  HyperbolicLattice(LatticeSpec spec, std::vector<DiskPoint> sites,
                    std::vector<Edge> edges, std::vector<int> ring_of_site,
                    double n0);

  const LatticeSpec& spec() const noexcept { return spec_; }
  std::size_t size() const noexcept { return sites_.size(); }
  const std::vector<DiskPoint>& sites() const noexcept { return sites_; }
  const DiskPoint& site(std::size_t i) const { return sites_.at(i); }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  const std::vector<int>& ring_of_site() const noexcept { return ring_of_site_; }
  const std::vector<std::vector<std::size_t>>& neighbors() const noexcept {
    return neighbors_;
  }
  std::size_t degree(std::size_t i) const { return neighbors_.at(i).size(); }
  std::size_t max_degree() const noexcept;

  double n0() const noexcept { return n0_; }
  /// L = sqrt(N / (N + N0)).
  double effective_radius() const noexcept;
  /// Mean geodesic length of the edges (kappa = 1/2 normalization).
  double edge_length() const noexcept { return edge_length_; }
  /// tanh(edge_length / (2 kappa)): the neighbour separation as seen from a
  /// site moved to the origin. This is the lattice constant entering M.
  double lattice_constant() const noexcept;
  /// Site closest to the origin (lowest index on ties).
  std::size_t center_site() const noexcept;

 private:
  LatticeSpec spec_;
  std::vector<DiskPoint> sites_;
  std::vector<Edge> edges_;
  std::vector<int> ring_of_site_;
  std::vector<std::vector<std::size_t>> neighbors_;
  double n0_ = 0.0;
  double edge_length_ = 0.0;
};

/// Grows the lattice described by `spec`. For `line_graph` the parent
/// vertex graph is generated first.
HyperbolicLattice generate_lattice(const LatticeSpec& spec);

HyperbolicLattice line_graph(const HyperbolicLattice& lat);

/// Geodesic edge length of the {p,q} tessellation.
double side_length(int p, int q, double kappa = kKappa);

/// tanh(side_length / (2 kappa)); 0.2758 for {7,3}.
double lattice_constant(int p, int q);

/// Continuum mapping constant N0 = (sites per polygon) / (polygon area).
/// Exactly 28 for the {7,3} vertex graph; other cases are experimental.
double continuum_n0(int p, int q, LatticeKind kind);

/// Effective photon mass M = 4 / (z h^2) with z the coordination number.
double effective_mass(double lattice_constant, int coordination);

// JSON document {spec, sites, edges, ring_of_site, N0}; floats use 17
// significant digits.
std::string lattice_to_json(const HyperbolicLattice& lat);
HyperbolicLattice lattice_from_json(std::string_view text);

}  // namespace hypercqed
