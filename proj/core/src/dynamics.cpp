#include "hypercqed/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "hypercqed/error.hpp"
#include "hypercqed/parallel.hpp"
#include "hypercqed/quadrature.hpp"

namespace hypercqed {

namespace {

constexpr double kDegenerate = 1e-9;
constexpr double kMinWeight = 1e-12;

}  // namespace

Propagator::Propagator(Spectrum spectrum) : s_(std::move(spectrum)) {
  if (!s_.has_vectors()) throw ContractError("propagator needs eigenvectors");
}

Eigen::VectorXcd Propagator::apply(const Eigen::VectorXcd& c0, double t) const {
  Eigen::VectorXcd coeff = s_.vectors.transpose().cast<std::complex<double>>() * c0;
  for (Eigen::Index k = 0; k < coeff.size(); ++k) {
    coeff(k) *= std::polar(1.0, -s_.values(k) * t);
  }
  return s_.vectors.cast<std::complex<double>>() * coeff;
}

EvolutionResult evolve(const Propagator& prop, const SingleExcitationOperator& op,
                       const Eigen::VectorXcd& c0, const std::vector<double>& times,
                       bool photon_populations) {
  if (static_cast<std::size_t>(c0.size()) != op.dim()) {
    throw ContractError("initial state dimension differs from the operator");
  }
  for (std::size_t k = 1; k < times.size(); ++k) {
    if (times[k] < times[k - 1]) throw DomainError("evolution times must be sorted");
  }
  const auto nt = static_cast<Eigen::Index>(times.size());
  const auto nq = static_cast<Eigen::Index>(op.qubit_count());
  const auto np = static_cast<Eigen::Index>(op.photon_count());
  EvolutionResult r;
  r.times = times;
  r.excited_population.resize(nt, nq);
  if (photon_populations) r.photon_populations.resize(nt, np);
  // project once onto the eigenbasis
  const Eigen::VectorXcd coeff0 = prop.spectrum().vectors.transpose().cast<std::complex<double>>() * c0;
  const Eigen::MatrixXcd vc = prop.spectrum().vectors.cast<std::complex<double>>();
  for (Eigen::Index k = 0; k < nt; ++k) {
    Eigen::VectorXcd coeff = coeff0;
    for (Eigen::Index m = 0; m < coeff.size(); ++m) {
      coeff(m) *= std::polar(1.0, -prop.spectrum().values(m) * times[static_cast<std::size_t>(k)]);
    }
    const Eigen::VectorXcd c = vc * coeff;
    for (Eigen::Index q = 0; q < nq; ++q) r.excited_population(k, q) = std::norm(c(np + q));
    if (photon_populations) {
      for (Eigen::Index i = 0; i < np; ++i) r.photon_populations(k, i) = std::norm(c(i));
    }
    r.norm.push_back(c.squaredNorm());
  }
  return r;
}

EvolutionResult evolve(const SingleExcitationOperator& op, std::size_t initial,
                       const std::vector<double>& times, bool photon_populations) {
  if (initial >= op.dim()) throw DomainError("initial basis index out of range");
  const Propagator prop(eigendecompose(op, true));
  Eigen::VectorXcd c0 = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(op.dim()));
  c0(static_cast<Eigen::Index>(initial)) = 1.0;
  return evolve(prop, op, c0, times, photon_populations);
}

QubitPropagator::QubitPropagator(const Spectrum& photons, std::size_t site, double delta,
                                 double g) {
  if (!photons.has_vectors()) throw ContractError("qubit propagator needs photon eigenvectors");
  if (site >= static_cast<std::size_t>(photons.vectors.rows())) {
    throw DomainError("qubit site out of range");
  }
  if (g == 0.0) {
    energies_ = {delta};
    weights_ = {1.0};
    return;
  }
  // coupled photon levels: degenerate eigenvalues merged, weights g^2 |psi(site)|^2
  std::vector<double> lev, wt;
  const auto row = static_cast<Eigen::Index>(site);
  for (Eigen::Index k = 0; k < photons.values.size(); ++k) {
    const double w = photons.vectors(row, k) * photons.vectors(row, k);
    if (!lev.empty() && photons.values(k) - lev.back() < kDegenerate) {
      wt.back() += w;
    } else {
      lev.push_back(photons.values(k));
      wt.push_back(w);
    }
  }
  std::vector<double> e, w;
  double total = 0.0;
  for (std::size_t k = 0; k < lev.size(); ++k) {
    if (wt[k] > kMinWeight) {
      e.push_back(lev[k]);
      w.push_back(g * g * wt[k]);
      total += g * g * wt[k];
    }
  }
  const auto f = [&](double x) {
    double s = 0.0;
    for (std::size_t k = 0; k < e.size(); ++k) s += w[k] / (x - e[k]);
    return x - delta - s;
  };
  const auto dsum = [&](double x) {
    double s = 0.0;
    for (std::size_t k = 0; k < e.size(); ++k) s += w[k] / ((x - e[k]) * (x - e[k]));
    return s;
  };
  std::vector<double> roots;
  const double pad = std::abs(delta - e.front()) + std::abs(delta - e.back()) + total + 1.0;
  double d0 = 1e-3;
  while (f(e.front() - d0) < 0.0 && d0 > 1e-300) d0 /= 10.0;
  roots.push_back(find_root(f, e.front() - pad, e.front() - d0).x);
  for (std::size_t k = 0; k + 1 < e.size(); ++k) {
    // f runs from -inf to +inf between consecutive poles
    double da = (e[k + 1] - e[k]) * 1e-3, db = da;
    while (f(e[k] + da) > 0.0 && da > 1e-300) da /= 10.0;
    while (f(e[k + 1] - db) < 0.0 && db > 1e-300) db /= 10.0;
    roots.push_back(find_root(f, e[k] + da, e[k + 1] - db).x);
  }
  double d1 = 1e-3;
  while (f(e.back() + d1) > 0.0 && d1 > 1e-300) d1 /= 10.0;
  roots.push_back(find_root(f, e.back() + d1, e.back() + pad).x);
  for (double x : roots) {
    energies_.push_back(x);
    weights_.push_back(1.0 / (1.0 + dsum(x)));
  }
}

std::complex<double> QubitPropagator::amplitude(double t) const {
  std::complex<double> a = 0.0;
  for (std::size_t k = 0; k < energies_.size(); ++k) a += weights_[k] * std::polar(1.0, -energies_[k] * t);
  return a;
}

DecayFit fit_decay_rate(const std::vector<double>& times, const std::vector<double>& population,
                        double t_min, double t_max) {
  if (times.size() != population.size()) throw ContractError("times and populations differ in length");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::vector<std::pair<double, double>> pts;
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (times[k] < t_min || times[k] > t_max) continue;
    if (!(population[k] > 0.0)) {
      throw DomainError("population vanishes at t = " + std::to_string(times[k]) +
                        "; shorten the fit window");
    }
    pts.emplace_back(times[k], std::log(population[k]));
  }
  if (pts.size() < 3) throw DomainError("decay fit needs at least 3 samples in the window");
  const double n = static_cast<double>(pts.size());
  for (const auto& [x, y] : pts) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double sxx_c = sxx - sx * sx / n;
  const double slope = (sxy - sx * sy / n) / sxx_c;
  const double icept = (sy - slope * sx) / n;
  std::vector<double> res;
  res.reserve(pts.size());
  double ssr = 0.0;
  for (const auto& [x, y] : pts) {
    res.push_back(y - icept - slope * x);
    ssr += res.back() * res.back();
  }
  // Residuals of a deterministic P(t) on a dense grid are strongly
  // correlated; plain OLS would understate the error. Inflate by the
  // integrated autocorrelation time (summed up to the first negative lag).
  double tau = 1.0;
  if (ssr > 0.0) {
    for (std::size_t lag = 1; lag < res.size(); ++lag) {
      double c = 0.0;
      for (std::size_t k = lag; k < res.size(); ++k) c += res[k] * res[k - lag];
      c /= ssr;
      if (c <= 0.0) break;
      tau += 2.0 * c;
    }
  }
  const double n_eff = std::max(3.0, n / tau);
  DecayFit fit;
  fit.gamma = -slope;
  fit.stderr_ = std::sqrt(ssr / (n - 2.0) / sxx_c * (n - 2.0) / (n_eff - 2.0));
  fit.t_min = t_min;
  fit.t_max = t_max;
  fit.quality_warning = !(fit.gamma > 0.0) || fit.stderr_ / fit.gamma > 0.25;
  return fit;
}

std::string_view to_string(MarkovConvention c) noexcept {
  return c == MarkovConvention::full ? "full" : "half";
}

MarkovConvention markov_convention_from_string(std::string_view s) {
  if (s == "full") return MarkovConvention::full;
  if (s == "half") return MarkovConvention::half;
  throw InvalidSpecError("unknown Markov convention '" + std::string(s) + "'");
}

double markov_gamma(double j, MarkovConvention convention) {
  if (!(j >= 0.0)) throw DomainError("spectral function must be >= 0");
  return convention == MarkovConvention::full ? j : 0.5 * j;
}

std::vector<DecayScanRow> decay_scan(const Spectrum& photons, std::size_t site, double g,
                                     const std::vector<double>& deltas, double bin, double t_max,
                                     std::size_t samples, unsigned threads) {
  const SpectralCurve j = local_spectral_function(photons, site, g, bin);
  const SpectralCurve rho = dos_histogram(photons, bin);
  const double n = static_cast<double>(photons.size());
  std::vector<double> times(samples);
  for (std::size_t k = 0; k < samples; ++k) {
    times[k] = t_max * static_cast<double>(k) / static_cast<double>(samples - 1);
  }
  std::vector<DecayScanRow> rows(deltas.size());
  parallel_for(deltas.size(), threads, [&](std::size_t i) {
    const double d = deltas[i];
    const QubitPropagator qp(photons, site, d, g);
    std::vector<double> p(samples);
    for (std::size_t k = 0; k < samples; ++k) p[k] = qp.excited_population(times[k]);
    const DecayFit fit = fit_decay_rate(times, p, 0.0, t_max);
    DecayScanRow& r = rows[i];
    r.delta = d;
    r.gamma = fit.gamma;
    r.stderr_ = fit.stderr_;
    r.quality_warning = fit.quality_warning;
    for (std::size_t b = 0; b + 1 < j.bin_edges.size(); ++b) {
      if (d >= j.bin_edges[b] && d < j.bin_edges[b + 1]) {
        r.j_binned = j.values[b];
        r.rho_binned = rho.values[b] / n;
      }
    }
  });
  return rows;
}

void write_decay_scan_csv(std::ostream& os, const std::vector<DecayScanRow>& rows) {
  os << "delta,gamma,stderr,j_binned,rho_binned\n";
  char buf[160];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n", r.delta, r.gamma, r.stderr_,
                  r.j_binned, r.rho_binned);
    os << buf;
  }
}

void write_evolution_csv(std::ostream& os, const EvolutionResult& r) {
  os << "t,P_up";
  for (Eigen::Index i = 0; i < r.photon_populations.cols(); ++i) os << ",site_" << i;
  os << '\n';
  char buf[40];
  for (std::size_t k = 0; k < r.times.size(); ++k) {
    const auto kk = static_cast<Eigen::Index>(k);
    std::snprintf(buf, sizeof buf, "%.17g", r.times[k]);
    os << buf;
    std::snprintf(buf, sizeof buf, ",%.17g",
                  r.excited_population.cols() ? r.excited_population(kk, 0) : 0.0);
    os << buf;
    for (Eigen::Index i = 0; i < r.photon_populations.cols(); ++i) {
      std::snprintf(buf, sizeof buf, ",%.17g", r.photon_populations(kk, i));
      os << buf;
    }
    os << '\n';
  }
}

}  // namespace hypercqed
