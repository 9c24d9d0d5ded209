#pragma once

// Fixed-order Gauss-Legendre quadrature and a safeguarded scalar root finder.

#include <functional>
#include <vector>

namespace hypercqed {

struct QuadratureRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule (Newton iteration on P_n), n >= 1.
QuadratureRule gauss_legendre(int n);

/// Composite Gauss-Legendre over the given breakpoints (ascending).
double integrate_panels(const std::function<double(double)>& f,
                        const std::vector<double>& breakpoints, int order = 20);

/// Composite Gauss-Legendre with `panels` equal panels on [a, b].
double integrate(const std::function<double(double)>& f, double a, double b,
                 int panels = 64, int order = 20);

struct RootResult {
  double x = 0.0;
  double fx = 0.0;
  int iterations = 0;
};

/// Secant iteration kept inside a sign-changing bracket; falls back to
/// bisection whenever the secant step leaves the bracket or stalls.
/// Throws BracketingError if f(a), f(b) have the same sign.
RootResult find_root(const std::function<double(double)>& f, double a, double b,
                     double xtol = 1e-15, double ftol = 0.0, int max_iter = 300);

}  // namespace hypercqed
