#pragma once

// Poincare-disk geometry in the kappa = 1/2 normalization, where the metric is
// ds^2 = (2 kappa)^2 |dz|^2 / (1 - |z|^2)^2.

#include <complex>
#include <cstddef>
#include <vector>

namespace hypercqed {

/// Curvature radius used throughout the library.
inline constexpr double kKappa = 0.5;

/// Points closer than this to the unit circle are rejected.
inline constexpr double kBoundaryMargin = 1e-12;

class DiskPoint {
 public:
  DiskPoint() = default;
  DiskPoint(double re, double im);
  explicit DiskPoint(std::complex<double> z);

  static bool admissible(std::complex<double> z) noexcept;

  double re() const noexcept { return z_.real(); }
  double im() const noexcept { return z_.imag(); }
  std::complex<double> z() const noexcept { return z_; }
  double norm2() const noexcept { return std::norm(z_); }

  friend bool operator==(const DiskPoint&, const DiskPoint&) = default;

 private:
  std::complex<double> z_{};
};

/// kappa * arcosh(1 + 2|z - z2|^2 / ((1 - |z|^2)(1 - |z2|^2))).
double hyperbolic_distance(DiskPoint z, DiskPoint z2, double kappa = kKappa);

/// |z - z2| / |1 - conj(z2) z|: the Euclidean distance from the origin after
/// moving z2 there. Equals tanh(d / (2 kappa)).
double pseudo_distance(DiskPoint z, DiskPoint z2);

/// Disk automorphism w = e^{i phi} (z - a) / (1 - conj(a) z).
DiskPoint mobius_map(DiskPoint z, DiskPoint a, double phi);

/// Inverse of mobius_map(., a, phi).
DiskPoint mobius_inverse(DiskPoint w, DiskPoint a, double phi);

/// n points on the geodesic from z1 to z2, equally spaced in arclength,
/// endpoints included.
std::vector<DiskPoint> geodesic_samples(DiskPoint z1, DiskPoint z2, std::size_t n);

DiskPoint hyperbolic_midpoint(DiskPoint z1, DiskPoint z2);

/// Density of the invariant area element d^2z / (1 - |z|^2)^2.
double area_density(DiskPoint z);

/// Hyperbolic distance from z to the geodesic through a and b.
double distance_to_geodesic(DiskPoint z, DiskPoint a, DiskPoint b,
                            double kappa = kKappa);

}  // namespace hypercqed
