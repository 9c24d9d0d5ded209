#pragma once

// Complex gamma, Gauss hypergeometric series and Legendre functions
// P_nu(x), Q_nu(x) of complex degree for real x > 1.

#include <complex>

namespace hypercqed {

using cplx = std::complex<double>;

/// log Gamma(z), principal branch (Lanczos, g = 7).
cplx log_gamma(cplx z);
cplx gamma(cplx z);

/// 2F1(a, b; c; z) by direct summation; requires |z| < 1.
cplx hyp2f1(cplx a, cplx b, cplx c, cplx z);

/// Legendre function of the first kind for x > 1.
/// Series in (1 - x)/2 for x < 2, Laplace integral otherwise.
cplx legendre_p(cplx nu, double x);

/// Legendre function of the second kind for x > 1 (Re nu > -1, nu + 1 not a
/// non-positive integer). Series in exp(-2 eta), x = cosh(eta), when that
/// argument is <= 0.9; integral representation otherwise.
cplx legendre_q(cplx nu, double x);

// The two representations, exposed for overlap tests.
cplx legendre_p_series(cplx nu, double x);
cplx legendre_p_integral(cplx nu, double x);
cplx legendre_q_series(cplx nu, double x);
cplx legendre_q_integral(cplx nu, double x);

}  // namespace hypercqed
