#include "hypercqed/tessellation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <unordered_map>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "hypercqed/error.hpp"

namespace hypercqed {

namespace {

using cplx = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;

constexpr double kPi = std::numbers::pi;

// Coordinate-keyed point set. Cells are coarse; membership is decided by
// hyperbolic distance so that round-off never splits a site in two.
class PointIndex {
 public:
  explicit PointIndex(double tol) : tol_(tol) {}

  std::ptrdiff_t find(cplx z) const {
    const auto [cx, cy] = cell(z);
    for (long dx = -1; dx <= 1; ++dx) {
      for (long dy = -1; dy <= 1; ++dy) {
        auto it = cells_.find(key(cx + dx, cy + dy));
        if (it == cells_.end()) continue;
        for (std::size_t id : it->second) {
          if (hyperbolic_distance(DiskPoint(z), DiskPoint(points_[id])) < tol_) {
            return static_cast<std::ptrdiff_t>(id);
          }
        }
      }
    }
    return -1;
  }

  std::size_t insert(cplx z) {
    const auto [cx, cy] = cell(z);
    points_.push_back(z);
    cells_[key(cx, cy)].push_back(points_.size() - 1);
    return points_.size() - 1;
  }

  const std::vector<cplx>& points() const { return points_; }

 private:
  static constexpr double kCell = 1e-4;

  static std::pair<long, long> cell(cplx z) {
    return {std::lround(z.real() / kCell), std::lround(z.imag() / kCell)};
  }
  static long long key(long x, long y) {
    return (static_cast<long long>(x) << 32) ^ static_cast<long long>(y & 0xffffffff);
  }

  double tol_;
  std::vector<cplx> points_;
  std::unordered_map<long long, std::vector<std::size_t>> cells_;
};

cplx act(const Mat2& T, cplx z) {
  return (T(0, 0) * z + T(0, 1)) / (T(1, 0) * z + T(1, 1));
}

// Lift of the disk translation sending 0 to m.
Mat2 boost(cplx m) {
  Mat2 B;
  B << 1.0, m, std::conj(m), 1.0;
  return B;
}

double standard_side(int p, int q) {
  // cosh(s/2) = cos(pi/p) / sin(pi/q) for curvature -1
  return 2.0 * std::acosh(std::cos(kPi / p) / std::sin(kPi / q));
}

void check_hyperbolic(int p, int q) {
  if (p < 3 || q < 3 || (p - 2) * (q - 2) <= 4) {
    throw InvalidSpecError("{" + std::to_string(p) + "," + std::to_string(q) +
                           "} is not a hyperbolic tessellation");
  }
}

struct VertexGraph {
  std::vector<cplx> sites;
  std::vector<Edge> edges;
  std::vector<int> ring;
};

VertexGraph grow(const LatticeSpec& spec) {
  const int p = spec.p;
  const int q = spec.q;
  // circumradius R and edge-midpoint (apothem) radius a of the central p-gon
  const double R = std::acosh(1.0 / (std::tan(kPi / p) * std::tan(kPi / q)));
  const double a = std::acosh(std::cos(kPi / q) / std::sin(kPi / p));
  const double r0 = std::tanh(R / 2.0);
  const double rm = std::tanh(a / 2.0);

  std::vector<cplx> corner(p);
  std::vector<Mat2> half_turns(p);
  Mat2 flip = Mat2::Identity();
  flip(0, 0) = -1.0;
  for (int k = 0; k < p; ++k) {
    corner[k] = std::polar(r0, 2.0 * kPi * k / p);
    const cplx m = std::polar(rm, 2.0 * kPi * k / p + kPi / p);
    half_turns[k] = boost(m) * flip * boost(m).inverse();
  }

  const double h = standard_side(p, q) * kKappa;
  std::vector<Mat2> faces{Mat2::Identity()};
  std::vector<int> face_ring{1};
  PointIndex centers(h / 10.0);
  centers.insert(0.0);
  std::vector<std::size_t> layer{0};
  for (int ring = 2; ring <= spec.rings; ++ring) {
    std::vector<std::size_t> next;
    for (std::size_t f : layer) {
      for (const Mat2& H : half_turns) {
        Mat2 T = faces[f] * H;
        T /= std::sqrt(T.determinant());
        const cplx c = act(T, 0.0);
        if (!DiskPoint::admissible(c)) {
          throw ResourceError("lattice growth reached the numerical disk boundary");
        }
        if (centers.find(c) >= 0) continue;
        centers.insert(c);
        faces.push_back(T);
        face_ring.push_back(ring);
        next.push_back(faces.size() - 1);
      }
    }
    if (faces.size() * static_cast<std::size_t>(p) / q > kMaxSites) {
      throw ResourceError("lattice with " + std::to_string(spec.rings) +
                          " rings exceeds the site budget of " +
                          std::to_string(kMaxSites));
    }
    layer = std::move(next);
  }

  VertexGraph g;
  PointIndex verts(h / 10.0);
  std::vector<Edge> edges;
  std::vector<std::size_t> ids(p);
  for (std::size_t f = 0; f < faces.size(); ++f) {
    for (int k = 0; k < p; ++k) {
      const cplx z = act(faces[f], corner[k]);
      if (!DiskPoint::admissible(z)) {
        throw ResourceError("lattice growth reached the numerical disk boundary");
      }
      std::ptrdiff_t id = verts.find(z);
      if (id < 0) {
        id = static_cast<std::ptrdiff_t>(verts.insert(z));
        g.ring.push_back(face_ring[f]);
      }
      ids[k] = static_cast<std::size_t>(id);
    }
    if (verts.points().size() > kMaxSites) {
      throw ResourceError("site budget exceeded");
    }
    for (int k = 0; k < p; ++k) {
      const std::size_t u = ids[k];
      const std::size_t v = ids[(k + 1) % p];
      edges.push_back({std::min(u, v), std::max(u, v)});
    }
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  g.sites = verts.points();
  g.edges = std::move(edges);
  return g;
}

std::vector<DiskPoint> to_points(const std::vector<cplx>& zs) {
  std::vector<DiskPoint> out;
  out.reserve(zs.size());
  for (cplx z : zs) out.emplace_back(z);
  return out;
}

}  // namespace

std::string_view to_string(LatticeKind kind) noexcept {
  return kind == LatticeKind::vertex_graph ? "vertex_graph" : "line_graph";
}

LatticeKind lattice_kind_from_string(std::string_view s) {
  if (s == "vertex_graph") return LatticeKind::vertex_graph;
  if (s == "line_graph") return LatticeKind::line_graph;
  throw InvalidSpecError("unknown lattice kind '" + std::string(s) + "'");
}

void LatticeSpec::validate() const {
  check_hyperbolic(p, q);
  if (rings < 1) throw InvalidSpecError("rings must be >= 1");
}

HyperbolicLattice::HyperbolicLattice(LatticeSpec spec, std::vector<DiskPoint> sites,
                                     std::vector<Edge> edges,
                                     std::vector<int> ring_of_site, double n0)
    : spec_(spec),
      sites_(std::move(sites)),
      edges_(std::move(edges)),
      ring_of_site_(std::move(ring_of_site)),
      neighbors_(sites_.size()),
      n0_(n0) {
  if (ring_of_site_.size() != sites_.size()) {
    throw ContractError("ring_of_site length differs from site count");
  }
  double total = 0.0;
  for (const Edge& e : edges_) {
    if (e.a >= e.b || e.b >= sites_.size()) {
      throw ContractError("malformed edge (" + std::to_string(e.a) + "," +
                          std::to_string(e.b) + ")");
    }
    neighbors_[e.a].push_back(e.b);
    neighbors_[e.b].push_back(e.a);
    total += hyperbolic_distance(sites_[e.a], sites_[e.b]);
  }
  for (auto& nb : neighbors_) std::sort(nb.begin(), nb.end());
  edge_length_ = edges_.empty() ? 0.0 : total / static_cast<double>(edges_.size());
}

std::size_t HyperbolicLattice::max_degree() const noexcept {
  std::size_t d = 0;
  for (const auto& nb : neighbors_) d = std::max(d, nb.size());
  return d;
}

double HyperbolicLattice::effective_radius() const noexcept {
  const double n = static_cast<double>(size());
  return std::sqrt(n / (n + n0_));
}

double HyperbolicLattice::lattice_constant() const noexcept {
  return std::tanh(edge_length_ / (2.0 * kKappa));
}

std::size_t HyperbolicLattice::center_site() const noexcept {
  std::size_t best = 0;
  for (std::size_t i = 1; i < sites_.size(); ++i) {
    if (sites_[i].norm2() < sites_[best].norm2() - 1e-14) best = i;
  }
  return best;
}

HyperbolicLattice generate_lattice(const LatticeSpec& spec) {
  spec.validate();
  LatticeSpec parent = spec;
  parent.kind = LatticeKind::vertex_graph;
  VertexGraph g = grow(parent);
  HyperbolicLattice lat(parent, to_points(g.sites), std::move(g.edges),
                        std::move(g.ring),
                        continuum_n0(spec.p, spec.q, LatticeKind::vertex_graph));
  if (spec.kind == LatticeKind::line_graph) return line_graph(lat);
  return lat;
}

HyperbolicLattice line_graph(const HyperbolicLattice& lat) {
  if (lat.spec().kind != LatticeKind::vertex_graph) {
    throw ContractError("line_graph expects a vertex_graph lattice");
  }
  const auto& parent_edges = lat.edges();
  std::vector<DiskPoint> sites;
  std::vector<int> ring;
  sites.reserve(parent_edges.size());
  for (const Edge& e : parent_edges) {
    sites.push_back(hyperbolic_midpoint(lat.site(e.a), lat.site(e.b)));
    ring.push_back(std::max(lat.ring_of_site()[e.a], lat.ring_of_site()[e.b]));
  }
  // edges incident on each parent vertex, pairwise adjacent
  std::vector<std::vector<std::size_t>> incident(lat.size());
  for (std::size_t k = 0; k < parent_edges.size(); ++k) {
    incident[parent_edges[k].a].push_back(k);
    incident[parent_edges[k].b].push_back(k);
  }
  std::vector<Edge> edges;
  for (const auto& inc : incident) {
    for (std::size_t x = 0; x < inc.size(); ++x) {
      for (std::size_t y = x + 1; y < inc.size(); ++y) {
        edges.push_back({std::min(inc[x], inc[y]), std::max(inc[x], inc[y])});
      }
    }
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  LatticeSpec spec = lat.spec();
  spec.kind = LatticeKind::line_graph;
  return HyperbolicLattice(spec, std::move(sites), std::move(edges), std::move(ring),
                           continuum_n0(spec.p, spec.q, LatticeKind::line_graph));
}

double side_length(int p, int q, double kappa) {
  check_hyperbolic(p, q);
  if (!(kappa > 0.0)) throw DomainError("curvature radius must be positive");
  return kappa * standard_side(p, q);
}

double lattice_constant(int p, int q) {
  check_hyperbolic(p, q);
  return std::tanh(standard_side(p, q) / 2.0);
}

double continuum_n0(int p, int q, LatticeKind kind) {
  check_hyperbolic(p, q);
  // sites per polygon over polygon area (Gauss-Bonnet, curvature -1/kappa^2)
  const double per_polygon = kind == LatticeKind::vertex_graph
                                 ? static_cast<double>(p) / q
                                 : static_cast<double>(p) / 2.0;
  const double defect = (p - 2.0) - 2.0 * p / q;
  return per_polygon / (kKappa * kKappa * defect);
}

double effective_mass(double h, int coordination) {
  if (!(h > 0.0) || coordination < 1) {
    throw DomainError("effective mass needs h > 0 and coordination >= 1");
  }
  return 4.0 / (coordination * h * h);
}

std::string lattice_to_json(const HyperbolicLattice& lat) {
  char buf[64];
  auto num = [&buf](double x) {
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return std::string(buf);
  };
  const auto& s = lat.spec();
  std::string out;
  out += "{\n  \"spec\": {\"p\": " + std::to_string(s.p) + ", \"q\": " +
         std::to_string(s.q) + ", \"rings\": " + std::to_string(s.rings) +
         ", \"kind\": \"" + std::string(to_string(s.kind)) + "\"},\n";
  out += "  \"sites\": [";
  for (std::size_t i = 0; i < lat.size(); ++i) {
    if (i) out += ", ";
    out += "[" + num(lat.site(i).re()) + ", " + num(lat.site(i).im()) + "]";
  }
  out += "],\n  \"edges\": [";
  for (std::size_t k = 0; k < lat.edges().size(); ++k) {
    if (k) out += ", ";
    out += "[" + std::to_string(lat.edges()[k].a) + ", " +
           std::to_string(lat.edges()[k].b) + "]";
  }
  out += "],\n  \"ring_of_site\": [";
  for (std::size_t i = 0; i < lat.size(); ++i) {
    if (i) out += ", ";
    out += std::to_string(lat.ring_of_site()[i]);
  }
  out += "],\n  \"N0\": " + num(lat.n0()) + "\n}\n";
  return out;
}

HyperbolicLattice lattice_from_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("lattice JSON: ") + e.what());
  }
  try {
    LatticeSpec spec;
    const auto& js = j.at("spec");
    spec.p = js.at("p").get<int>();
    spec.q = js.at("q").get<int>();
    spec.rings = js.at("rings").get<int>();
    spec.kind = lattice_kind_from_string(js.at("kind").get<std::string>());
    spec.validate();
    std::vector<DiskPoint> sites;
    for (const auto& xy : j.at("sites")) {
      sites.emplace_back(xy.at(0).get<double>(), xy.at(1).get<double>());
    }
    std::vector<Edge> edges;
    for (const auto& e : j.at("edges")) {
      edges.push_back({e.at(0).get<std::size_t>(), e.at(1).get<std::size_t>()});
    }
    auto ring = j.at("ring_of_site").get<std::vector<int>>();
    return HyperbolicLattice(spec, std::move(sites), std::move(edges), std::move(ring),
                             j.at("N0").get<double>());
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("lattice JSON: ") + e.what());
  }
}

}  // namespace hypercqed
