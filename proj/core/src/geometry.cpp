#include "hypercqed/geometry.hpp"

#include <cmath>
#include <sstream>

#include "hypercqed/error.hpp"

namespace hypercqed {

namespace {

std::string describe(std::complex<double> z) {
  std::ostringstream os;
  os.precision(17);
  os << "(" << z.real() << ", " << z.imag() << "), |z| = " << std::abs(z);
  return os.str();
}

}  // namespace

DiskPoint::DiskPoint(double re, double im) : DiskPoint(std::complex<double>(re, im)) {}

DiskPoint::DiskPoint(std::complex<double> z) : z_(z) {
  if (!admissible(z)) {
    throw DomainError("point outside the open unit disk (margin 1e-12): " + describe(z));
  }
}

bool DiskPoint::admissible(std::complex<double> z) noexcept {
  return std::isfinite(z.real()) && std::isfinite(z.imag()) &&
         std::abs(z) <= 1.0 - kBoundaryMargin;
}

double hyperbolic_distance(DiskPoint z, DiskPoint z2, double kappa) {
  if (!(kappa > 0.0)) throw DomainError("curvature radius must be positive");
  const double num = 2.0 * std::norm(z.z() - z2.z());
  const double den = (1.0 - z.norm2()) * (1.0 - z2.norm2());
  const double x = num / den;
  // arcosh(1 + x) = log1p(x + sqrt(x (x + 2))), accurate for small x
  return kappa * std::log1p(x + std::sqrt(x * (x + 2.0)));
}

double pseudo_distance(DiskPoint z, DiskPoint z2) {
  return std::abs(z.z() - z2.z()) / std::abs(1.0 - std::conj(z2.z()) * z.z());
}

DiskPoint mobius_map(DiskPoint z, DiskPoint a, double phi) {
  const std::complex<double> w =
      std::polar(1.0, phi) * (z.z() - a.z()) / (1.0 - std::conj(a.z()) * z.z());
  return DiskPoint(w);
}

DiskPoint mobius_inverse(DiskPoint w, DiskPoint a, double phi) {
  const std::complex<double> u = std::polar(1.0, -phi) * w.z();
  return DiskPoint((u + a.z()) / (1.0 + std::conj(a.z()) * u));
}

std::vector<DiskPoint> geodesic_samples(DiskPoint z1, DiskPoint z2, std::size_t n) {
  if (n < 2) throw DomainError("geodesic_samples needs n >= 2");
  if (z1 == z2) throw DomainError("geodesic_samples needs distinct endpoints");

  // Move z1 to the origin; the geodesic becomes a diameter segment.
  const DiskPoint w2 = mobius_map(z2, z1, 0.0);
  const double r2 = std::abs(w2.z());
  const std::complex<double> dir = w2.z() / r2;
  const double s_total = std::atanh(r2);

  std::vector<DiskPoint> out;
  out.reserve(n);
  out.push_back(z1);
  for (std::size_t k = 1; k + 1 < n; ++k) {
    const double s = s_total * static_cast<double>(k) / static_cast<double>(n - 1);
    out.push_back(mobius_inverse(DiskPoint(std::tanh(s) * dir), z1, 0.0));
  }
  out.push_back(z2);
  return out;
}

DiskPoint hyperbolic_midpoint(DiskPoint z1, DiskPoint z2) {
  if (z1 == z2) return z1;
  return geodesic_samples(z1, z2, 3)[1];
}

double area_density(DiskPoint z) {
  const double s = 1.0 - z.norm2();
  return 1.0 / (s * s);
}

double distance_to_geodesic(DiskPoint z, DiskPoint a, DiskPoint b, double kappa) {
  if (a == b) return hyperbolic_distance(z, a, kappa);
  const DiskPoint wb = mobius_map(b, a, 0.0);
  const double phi = -std::arg(wb.z());
  const std::complex<double> u = mobius_map(z, a, phi).z();
  // geodesic is now the real diameter; sinh(d / kappa) = 2|Im u| / (1 - |u|^2)
  return kappa * std::asinh(2.0 * std::abs(u.imag()) / (1.0 - std::norm(u)));
}

}  // namespace hypercqed
