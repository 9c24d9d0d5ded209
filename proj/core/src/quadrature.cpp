#include "hypercqed/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "hypercqed/error.hpp"

namespace hypercqed {

QuadratureRule gauss_legendre(int n) {
  if (n < 1) throw DomainError("Gauss-Legendre order must be >= 1");
  static std::mutex mu;
  static std::map<int, QuadratureRule> cache;
  {
    std::lock_guard lock(mu);
    if (auto it = cache.find(n); it != cache.end()) return it->second;
  }
  QuadratureRule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // recompute derivative at the converged node
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n == 1 ? 1.0 : n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.nodes[i] = -x;
    r.nodes[n - 1 - i] = x;
    r.weights[i] = r.weights[n - 1 - i] = w;
  }
  if (n == 1) {
    r.nodes[0] = 0.0;
    r.weights[0] = 2.0;
  }
  std::lock_guard lock(mu);
  cache.emplace(n, r);
  return r;
}

double integrate_panels(const std::function<double(double)>& f,
                        const std::vector<double>& breakpoints, int order) {
  const QuadratureRule rule = gauss_legendre(order);
  double sum = 0.0;
  for (std::size_t k = 0; k + 1 < breakpoints.size(); ++k) {
    const double a = breakpoints[k];
    const double b = breakpoints[k + 1];
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    double s = 0.0;
    for (int i = 0; i < order; ++i) s += rule.weights[i] * f(mid + half * rule.nodes[i]);
    sum += half * s;
  }
  return sum;
}

double integrate(const std::function<double(double)>& f, double a, double b, int panels,
                 int order) {
  if (panels < 1) throw DomainError("need at least one panel");
  std::vector<double> br(panels + 1);
  for (int k = 0; k <= panels; ++k) br[k] = a + (b - a) * k / panels;
  br[panels] = b;
  return integrate_panels(f, br, order);
}

RootResult find_root(const std::function<double(double)>& f, double a, double b,
                     double xtol, double ftol, int max_iter) {
  double fa = f(a);
  double fb = f(b);
  if (fa == 0.0) return {a, fa, 0};
  if (fb == 0.0) return {b, fb, 0};
  if (!std::isfinite(fa) || !std::isfinite(fb) || (fa > 0) == (fb > 0)) {
    throw BracketingError("no sign change on [" + std::to_string(a) + ", " +
                          std::to_string(b) + "]: f = " + std::to_string(fa) + ", " +
                          std::to_string(fb));
  }
  // x1, x0: last two iterates for the secant step
  double x0 = a, f0 = fa, x1 = b, f1 = fb;
  double width = std::abs(b - a);
  for (int it = 1; it <= max_iter; ++it) {
    double x = x1 - f1 * (x1 - x0) / (f1 - f0);
    const double lo = std::min(a, b), hi = std::max(a, b);
    if (!std::isfinite(x) || x <= lo || x >= hi) x = 0.5 * (a + b);
    double fx = f(x);
    if (fx == 0.0 || std::abs(fx) <= ftol) return {x, fx, it};
    if ((fx > 0) == (fa > 0)) {
      a = x;
      fa = fx;
    } else {
      b = x;
      fb = fx;
    }
    x0 = x1;
    f0 = f1;
    x1 = x;
    f1 = fx;
    const double w = std::abs(b - a);
    if (w > 0.5 * width) {
      // secant stalled at one end: take a bisection step
      const double m = 0.5 * (a + b);
      const double fm = f(m);
      if (fm == 0.0) return {m, fm, it};
      if ((fm > 0) == (fa > 0)) {
        a = m;
        fa = fm;
      } else {
        b = m;
        fb = fm;
      }
      x0 = x1;
      f0 = f1;
      x1 = m;
      f1 = fm;
    }
    width = std::abs(b - a);
    if (width <= xtol * std::max(1.0, std::abs(x1))) {
      return std::abs(fa) < std::abs(fb) ? RootResult{a, fa, it} : RootResult{b, fb, it};
    }
  }
  throw NumericError("root finder did not converge in " + std::to_string(max_iter) +
                     " iterations");
}

}  // namespace hypercqed
