#include "hypercqed/hamiltonian.hpp"

#include <cstdio>
#include <set>

#include "hypercqed/error.hpp"

namespace hypercqed {

SingleExcitationOperator::SingleExcitationOperator(Sparse matrix, std::size_t photons,
                                                   std::vector<QubitSpec> qubits,
                                                   double t)
    : matrix_(std::move(matrix)), photons_(photons), qubits_(std::move(qubits)), t_(t) {
  if (static_cast<std::size_t>(matrix_.rows()) != photons_ + qubits_.size() ||
      matrix_.rows() != matrix_.cols()) {
    throw ContractError("operator dimension does not match photons + qubits");
  }
}

SingleExcitationOperator::Sparse SingleExcitationOperator::photon_block() const {
  const auto n = static_cast<Eigen::Index>(photons_);
  return matrix_.topLeftCorner(n, n);
}

SingleExcitationOperator build_operator(std::size_t sites, const std::vector<Edge>& edges,
                                        double t, const std::vector<QubitSpec>& qubits) {
  if (sites == 0) throw InvalidSpecError("operator needs at least one photon site");
  std::set<std::size_t> seen;
  for (const auto& qb : qubits) {
    if (qb.site >= sites) {
      throw InvalidSpecError("qubit site " + std::to_string(qb.site) + " out of range");
    }
    if (!seen.insert(qb.site).second) {
      throw InvalidSpecError("duplicate qubit site " + std::to_string(qb.site));
    }
    if (!(qb.g >= 0.0)) throw InvalidSpecError("qubit coupling g must be >= 0");
  }
  const std::size_t dim = sites + qubits.size();
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(2 * edges.size() + 3 * qubits.size());
  for (const Edge& e : edges) {
    if (e.b >= sites) throw ContractError("edge outside the site range");
    trip.emplace_back(e.a, e.b, -t);
    trip.emplace_back(e.b, e.a, -t);
  }
  for (std::size_t k = 0; k < qubits.size(); ++k) {
    const std::size_t s = sites + k;
    trip.emplace_back(s, s, qubits[k].delta);
    trip.emplace_back(s, qubits[k].site, qubits[k].g);
    trip.emplace_back(qubits[k].site, s, qubits[k].g);
  }
  SingleExcitationOperator::Sparse m(static_cast<Eigen::Index>(dim),
                                     static_cast<Eigen::Index>(dim));
  m.setFromTriplets(trip.begin(), trip.end());
  m.makeCompressed();
  return SingleExcitationOperator(std::move(m), sites, qubits, t);
}

SingleExcitationOperator build_photon_operator(const HyperbolicLattice& lat, double t) {
  return build_operator(lat.size(), lat.edges(), t);
}

SingleExcitationOperator build_qubit_photon_operator(const HyperbolicLattice& lat,
                                                     double t,
                                                     const std::vector<QubitSpec>& qubits) {
  return build_operator(lat.size(), lat.edges(), t, qubits);
}

std::string to_coo(const SingleExcitationOperator& op) {
  std::string out;
  char buf[96];
  const auto& m = op.matrix();
  for (Eigen::Index c = 0; c < m.outerSize(); ++c) {
    for (SingleExcitationOperator::Sparse::InnerIterator it(m, c); it; ++it) {
      std::snprintf(buf, sizeof buf, "%lld %lld %.17g\n",
                    static_cast<long long>(it.row()), static_cast<long long>(it.col()),
                    it.value());
      out += buf;
    }
  }
  return out;
}

}  // namespace hypercqed
