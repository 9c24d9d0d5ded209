#include "hypercqed/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>

#include <Eigen/SparseCholesky>
#include <lapacke.h>

#include "hypercqed/error.hpp"
#include "hypercqed/quadrature.hpp"

namespace hypercqed {

namespace {

constexpr double kPi = std::numbers::pi;

void fix_signs(Eigen::MatrixXd& v) {
  for (Eigen::Index c = 0; c < v.cols(); ++c) {
    Eigen::Index best = 0;
    double amax = -1.0;
    for (Eigen::Index r = 0; r < v.rows(); ++r) {
      // strict comparison with a small slack keeps the first index on ties
      if (std::abs(v(r, c)) > amax + 1e-12) {
        amax = std::abs(v(r, c));
        best = r;
      }
    }
    if (v(best, c) < 0.0) v.col(c) *= -1.0;
  }
}

// Largest eigenvalue of (s * (H - sigma))^{-1} where s * (H - sigma) is
// positive definite; returns the corresponding eigenvalue of H.
double shift_invert_extreme(const Eigen::SparseMatrix<double>& h, double sigma, double s) {
  const Eigen::Index n = h.rows();
  Eigen::SparseMatrix<double> id(n, n);
  id.setIdentity();
  Eigen::SparseMatrix<double> a = s * (h - sigma * id);
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(a);
  if (ldlt.info() != Eigen::Success) throw NumericError("shift-invert factorization failed");
  if (n == 1) return h.coeff(0, 0);

  const int max_m = static_cast<int>(std::min<Eigen::Index>(n, 400));
  Eigen::MatrixXd q(n, max_m + 1);
  Eigen::VectorXd alpha(max_m), beta(max_m);
  // deterministic start vector with weight everywhere
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = 1.0 + 0.01 * std::sin(1.0 + i);
  q.col(0) = v.normalized();
  double theta_prev = 0.0;
  for (int m = 0; m < max_m; ++m) {
    Eigen::VectorXd w = ldlt.solve(q.col(m));
    alpha(m) = q.col(m).dot(w);
    // full reorthogonalisation, twice
    for (int pass = 0; pass < 2; ++pass) {
      w -= q.leftCols(m + 1) * (q.leftCols(m + 1).transpose() * w);
    }
    beta(m) = w.norm();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m + 1, m + 1);
    for (int k = 0; k <= m; ++k) {
      t(k, k) = alpha(k);
      if (k < m) t(k, k + 1) = t(k + 1, k) = beta(k);
    }
    tri.compute(t);
    const double theta = tri.eigenvalues()(m);
    const double resid = std::abs(beta(m) * tri.eigenvectors()(m, m));
    if (resid <= 1e-13 * theta || beta(m) < 1e-14 || m + 1 == n ||
        (m > 5 && std::abs(theta - theta_prev) <= 1e-15 * theta)) {
      return sigma + 1.0 / (s * theta);
    }
    theta_prev = theta;
    q.col(m + 1) = w / beta(m);
  }
  throw NumericError("Lanczos band-edge iteration did not converge");
}

std::size_t bin_index(double e, const std::vector<double>& edges) {
  auto it = std::upper_bound(edges.begin(), edges.end(), e);
  std::size_t k = static_cast<std::size_t>(it - edges.begin());
  k = k == 0 ? 0 : k - 1;
  return std::min(k, edges.size() - 2);
}

SpectralCurve histogram(const std::vector<double>& edges, CurveKind kind) {
  SpectralCurve c;
  c.kind = kind;
  c.bin_edges = edges;
  c.values.assign(edges.size() - 1, 0.0);
  for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
    c.omega.push_back(0.5 * (edges[k] + edges[k + 1]));
  }
  return c;
}

double tanh_factor(double omega, double M, double e0) {
  return std::tanh(0.5 * kPi * std::sqrt((omega - e0) * M));
}

}  // namespace

std::string_view to_string(CurveKind kind) noexcept {
  switch (kind) {
    case CurveKind::dos: return "dos";
    case CurveKind::cumulative_dos: return "cumulative_dos";
    case CurveKind::j_local: return "j_local";
    case CurveKind::cumulative_j: return "cumulative_j";
    case CurveKind::weyl: return "weyl";
    case CurveKind::continuum_L1: return "continuum_L1";
  }
  return "unknown";
}

Spectrum eigendecompose(const Eigen::MatrixXd& h, bool want_vectors) {
  const lapack_int n = static_cast<lapack_int>(h.rows());
  if (n < 1 || h.rows() != h.cols()) throw ContractError("eigendecompose needs a square matrix");
  Eigen::MatrixXd a = h;
  Spectrum s;
  s.values.resize(n);
  const lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, want_vectors ? 'V' : 'N', 'L', n,
                                         a.data(), n, s.values.data());
  if (info != 0) {
    throw NumericError("dsyevd failed with info = " + std::to_string(info) +
                       " (n = " + std::to_string(n) + ")");
  }
  if (want_vectors) {
    fix_signs(a);
    s.vectors = std::move(a);
  }
  return s;
}

Spectrum eigendecompose(const SingleExcitationOperator& op, bool want_vectors) {
  return eigendecompose(op.dense(), want_vectors);
}

BandEdges band_edges(const Eigen::SparseMatrix<double>& h) {
  double bound = 0.0;
  Eigen::SparseMatrix<double, Eigen::RowMajor> rows = h;
  for (Eigen::Index r = 0; r < rows.outerSize(); ++r) {
    double s = 0.0;
    for (decltype(rows)::InnerIterator it(rows, r); it; ++it) s += std::abs(it.value());
    bound = std::max(bound, s);
  }
  const double pad = 0.01 * std::max(bound, 1.0);
  return {shift_invert_extreme(h, -bound - pad, 1.0), shift_invert_extreme(h, bound + pad, -1.0)};
}

std::vector<double> anchored_bins(double e0, double emax, double bin) {
  if (!(bin > 0.0)) throw DomainError("bin width must be positive");
  std::vector<double> edges{e0};
  do {
    edges.push_back(e0 + static_cast<double>(edges.size()) * bin);
  } while (edges.back() <= emax);
  return edges;
}

SpectralCurve dos_histogram(const Spectrum& s, double bin) {
  SpectralCurve c = histogram(anchored_bins(s.lowest(), s.highest(), bin), CurveKind::dos);
  for (Eigen::Index k = 0; k < s.values.size(); ++k) {
    c.values[bin_index(s.values(k), c.bin_edges)] += 1.0 / bin;
  }
  return c;
}

SpectralCurve cumulative_dos(const Spectrum& s, std::size_t n) {
  SpectralCurve c;
  c.kind = CurveKind::cumulative_dos;
  for (Eigen::Index k = 0; k < s.values.size(); ++k) {
    // collapse degenerate eigenvalues onto the last count
    if (!c.omega.empty() && s.values(k) == c.omega.back()) {
      c.values.back() = static_cast<double>(k + 1) / static_cast<double>(n);
      continue;
    }
    c.omega.push_back(s.values(k));
    c.values.push_back(static_cast<double>(k + 1) / static_cast<double>(n));
  }
  return c;
}

std::vector<double> cumulative_dos_at(const Spectrum& s, std::size_t n,
                                      const std::vector<double>& omega) {
  std::vector<double> out;
  out.reserve(omega.size());
  const double* b = s.values.data();
  const double* e = b + s.values.size();
  for (double w : omega) {
    out.push_back(static_cast<double>(std::upper_bound(b, e, w) - b) / static_cast<double>(n));
  }
  return out;
}

SpectralCurve local_spectral_function(const Spectrum& s, std::size_t site, double g,
                                      double bin) {
  if (!s.has_vectors()) throw ContractError("local spectral function needs eigenvectors");
  if (site >= static_cast<std::size_t>(s.vectors.rows())) {
    throw DomainError("site index out of range");
  }
  SpectralCurve c = histogram(anchored_bins(s.lowest(), s.highest(), bin), CurveKind::j_local);
  const double pre = 2.0 * kPi * g * g / bin;
  for (Eigen::Index k = 0; k < s.values.size(); ++k) {
    const double a = s.vectors(static_cast<Eigen::Index>(site), k);
    c.values[bin_index(s.values(k), c.bin_edges)] += pre * a * a;
  }
  return c;
}

SpectralCurve cumulative_spectral(const Spectrum& s, std::size_t site, double bin) {
  if (!s.has_vectors()) throw ContractError("cumulative spectral function needs eigenvectors");
  if (site >= static_cast<std::size_t>(s.vectors.rows())) {
    throw DomainError("site index out of range");
  }
  SpectralCurve c;
  c.kind = CurveKind::cumulative_j;
  const auto row = static_cast<Eigen::Index>(site);
  if (bin > 0.0) {
    c.omega = anchored_bins(s.lowest(), s.highest(), bin);
    double acc = 0.0;
    Eigen::Index k = 0;
    for (double edge : c.omega) {
      while (k < s.values.size() && s.values(k) <= edge) {
        acc += 2.0 * kPi * s.vectors(row, k) * s.vectors(row, k);
        ++k;
      }
      c.values.push_back(acc);
    }
    return c;
  }
  double acc = 0.0;
  for (Eigen::Index k = 0; k < s.values.size(); ++k) {
    acc += 2.0 * kPi * s.vectors(row, k) * s.vectors(row, k);
    if (!c.omega.empty() && s.values(k) == c.omega.back()) {
      c.values.back() = acc;
      continue;
    }
    c.omega.push_back(s.values(k));
    c.values.push_back(acc);
  }
  return c;
}

double continuum_j_L1(double omega, double g, double M, double e0) {
  if (omega < e0) throw DomainError("j_L1 is defined for omega >= E0");
  return kPi * M / 56.0 * g * g * tanh_factor(omega, M, e0);
}

double continuum_J_L1(double omega, double M, double e0) {
  if (omega < e0) throw DomainError("J_L1 is defined for omega >= E0");
  // u = sqrt((nu - E0) M): J = (pi/28) int_0^U u tanh(pi u / 2) du
  const double U = std::sqrt((omega - e0) * M);
  if (U == 0.0) return 0.0;
  const int panels = 4 + static_cast<int>(2.0 * U);
  return kPi / 28.0 *
         integrate([](double u) { return u * std::tanh(0.5 * kPi * u); }, 0.0, U, panels, 16);
}

double continuum_dos_L1(double omega, std::size_t n, double M, double e0) {
  if (omega < e0) throw DomainError("rho_L1 is defined for omega >= E0");
  return static_cast<double>(n) * M / 112.0 * tanh_factor(omega, M, e0);
}

double weyl_dos(double omega, double L, double h, double e0) {
  if (!(omega > e0)) throw DomainError("Weyl law diverges at and below E0");
  const double w = 1.0 - L * L;
  return L * L / (3.0 * h * h * w) - (L / h) / (2.0 * std::sqrt(3.0) * w * std::sqrt(omega - e0));
}

double weyl_cumulative(double omega, double L, double h, double e0) {
  if (omega < e0) throw DomainError("Weyl cumulative is defined for omega >= E0");
  const double w = 1.0 - L * L;
  const double x = omega - e0;
  return L * L / (3.0 * h * h * w) * x - (L / h) / (std::sqrt(3.0) * w) * std::sqrt(x);
}

double weyl_cumulative_bulk(double omega, double L, double h, double e0) {
  if (omega < e0) throw DomainError("Weyl cumulative is defined for omega >= E0");
  return L * L / (3.0 * h * h * (1.0 - L * L)) * (omega - e0);
}

double weyl_zero_crossing(double L, double h) { return 3.0 * h * h / (4.0 * L * L); }

double cumulative_j_rmse(const Spectrum& s, std::size_t site, double M, double e0,
                         double omega_max) {
  const SpectralCurve J = cumulative_spectral(s, site);
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t k = 0; k < J.omega.size(); ++k) {
    if (J.omega[k] >= omega_max) break;
    const double ref = J.omega[k] < e0 ? 0.0 : continuum_J_L1(J.omega[k], M, e0);
    sum += (J.values[k] - ref) * (J.values[k] - ref);
    ++count;
  }
  if (count == 0) throw DomainError("no eigenvalues below the RMSE cutoff");
  return std::sqrt(sum / static_cast<double>(count));
}

void write_curve_csv(std::ostream& os, const SpectralCurve& curve) {
  os << "omega,value,kind\n";
  char buf[96];
  for (std::size_t k = 0; k < curve.values.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,", curve.omega[k], curve.values[k]);
    os << buf << to_string(curve.kind) << '\n';
  }
}

}  // namespace hypercqed
