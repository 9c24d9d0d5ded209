#include "hypercqed/special_functions.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "hypercqed/error.hpp"
#include "hypercqed/quadrature.hpp"

namespace hypercqed {

namespace {

constexpr double kPi = std::numbers::pi;

std::string args(cplx nu, double x) {
  std::ostringstream os;
  os.precision(17);
  os << "nu = " << nu << ", x = " << x;
  return os.str();
}

void check_x(cplx nu, double x) {
  if (!(x > 1.0) || !std::isfinite(x)) {
    throw DomainError("Legendre functions need real x > 1: " + args(nu, x));
  }
}

}  // namespace

cplx log_gamma(cplx z) {
  static constexpr std::array<double, 9> c{
      0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
      771.32342877765313,   -176.61502916214059,   12.507343278686905,
      -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
  if (z.real() < 0.5) {
    // reflection: Gamma(z) Gamma(1-z) = pi / sin(pi z)
    return std::log(kPi) - std::log(std::sin(kPi * z)) - log_gamma(1.0 - z);
  }
  z -= 1.0;
  cplx x = c[0];
  for (int i = 1; i < 9; ++i) x += c[i] / (z + static_cast<double>(i));
  const cplx t = z + 7.5;
  return 0.5 * std::log(2.0 * kPi) + (z + 0.5) * std::log(t) - t + std::log(x);
}

cplx gamma(cplx z) { return std::exp(log_gamma(z)); }

cplx hyp2f1(cplx a, cplx b, cplx c, cplx z) {
  if (std::abs(z) >= 1.0) throw DomainError("hyp2f1 series needs |z| < 1");
  cplx term = 1.0;
  cplx sum = 1.0;
  for (int n = 0; n < 100000; ++n) {
    const double dn = n;
    term *= (a + dn) * (b + dn) / ((c + dn) * (dn + 1.0)) * z;
    sum += term;
    if (std::abs(term) <= 1e-17 * std::abs(sum) && n > 2) return sum;
    if (term == 0.0) return sum;
  }
  throw NumericError("hyp2f1 series did not converge");
}

cplx legendre_p_series(cplx nu, double x) {
  check_x(nu, x);
  return hyp2f1(-nu, nu + 1.0, 1.0, (1.0 - x) / 2.0);
}

cplx legendre_p_integral(cplx nu, double x) {
  check_x(nu, x);
  const double s = std::sqrt(x * x - 1.0);
  auto re = [&](double th) { return std::pow(cplx(x + s * std::cos(th)), nu).real(); };
  auto im = [&](double th) { return std::pow(cplx(x + s * std::cos(th)), nu).imag(); };
  const int panels = 32 + static_cast<int>(4.0 * std::abs(nu) * std::log(x + s));
  return cplx(integrate(re, 0.0, kPi, panels, 24), integrate(im, 0.0, kPi, panels, 24)) /
         kPi;
}

cplx legendre_p(cplx nu, double x) {
  check_x(nu, x);
  return x < 2.0 ? legendre_p_series(nu, x) : legendre_p_integral(nu, x);
}

cplx legendre_q_series(cplx nu, double x) {
  check_x(nu, x);
  const double eta = std::acosh(x);
  const double z = std::exp(-2.0 * eta);
  const cplx pre = std::sqrt(kPi) *
                   std::exp(log_gamma(nu + 1.0) - log_gamma(nu + 1.5) - (nu + 1.0) * eta);
  return pre * hyp2f1(0.5, nu + 1.0, nu + 1.5, z);
}

cplx legendre_q_integral(cplx nu, double x) {
  check_x(nu, x);
  const double decay = nu.real() + 1.0;
  if (!(decay > 0.0)) {
    throw NumericError("Legendre Q integral needs Re nu > -1: " + args(nu, x));
  }
  const double s = std::sqrt(x * x - 1.0);
  const double T = 37.0 / decay;
  auto f = [&](double t) { return std::pow(cplx(x + s * std::cosh(t)), -nu - 1.0); };
  // panel count follows the oscillation rate |Im nu| and the truncation length
  const int panels = 64 + static_cast<int>(T * (1.0 + std::abs(nu.imag())) * 2.0);
  const double re = integrate([&](double t) { return f(t).real(); }, 0.0, T, panels, 20);
  const double im = integrate([&](double t) { return f(t).imag(); }, 0.0, T, panels, 20);
  return {re, im};
}

cplx legendre_q(cplx nu, double x) {
  check_x(nu, x);
  const cplx n1 = nu + 1.0;
  if (n1.imag() == 0.0 && n1.real() <= 0.0 && n1.real() == std::round(n1.real())) {
    throw DomainError("Legendre Q undefined for nu + 1 a non-positive integer: " +
                      args(nu, x));
  }
  const double z = std::exp(-2.0 * std::acosh(x));
  const cplx v = z <= 0.9 ? legendre_q_series(nu, x) : legendre_q_integral(nu, x);
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
    throw NumericError("Legendre Q evaluation not finite: " + args(nu, x));
  }
  return v;
}

}  // namespace hypercqed
