#pragma once

#include <span>
#include <vector>

#include "hqr/core.hpp"

namespace hqr {

/// A point of the open unit disk. Construction rejects |z| >= 1.
///
/// Points with |z| in [1 - 1e-15, 1) are accepted but flagged, since weights
/// such as (1 - |z|^2)^alpha degenerate there.
class DiskPoint {
 public:
  static constexpr double kBoundaryBand = 1e-15;

  DiskPoint() = default;
  explicit DiskPoint(Complex z);
  DiskPoint(double re, double im) : DiskPoint(Complex(re, im)) {}

  Complex value() const noexcept { return z_; }
  operator Complex() const noexcept { return z_; }  // NOLINT(google-explicit-constructor)

  double re() const noexcept { return z_.real(); }
  double im() const noexcept { return z_.imag(); }
  double modulus() const noexcept { return std::abs(z_); }
  bool near_boundary() const noexcept { return near_boundary_; }

 private:
  Complex z_{0.0, 0.0};
  bool near_boundary_ = false;
};

/// The disk automorphism sigma_a(z) = (a - z) / (1 - conj(a) z).
///
/// sigma_a is an involution exchanging 0 and a. The Complex overloads skip
/// the disk check and are meant for quadrature inner loops where the caller
/// guarantees |z| < 1.
class MobiusMap {
 public:
  MobiusMap() = default;
  explicit MobiusMap(DiskPoint a);

  DiskPoint parameter() const noexcept { return a_; }

  DiskPoint sigma(DiskPoint z) const;
  Complex operator()(Complex z) const noexcept {
    return (a_.value() - z) / (1.0 - abar_ * z);
  }

  /// sigma_a^{(j)}(z) for j = 1..order.
  std::vector<Complex> derivatives(Complex z, int order) const;
  void derivatives_into(Complex z, std::span<Complex> out) const noexcept;

  Complex first_derivative(Complex z) const noexcept {
    const Complex d = 1.0 - abar_ * z;
    return -one_minus_a2_ / (d * d);
  }

  /// Green's function -log|sigma_a(z)|; throws a singularity error at z = a.
  double green(DiskPoint z) const;
  double green(Complex z) const;

  /// (1 - |a|^2)(1 - |z|^2) / |1 - conj(a) z|^2, which equals 1 - |sigma_a(z)|^2.
  double one_minus_sigma_sq(Complex z) const noexcept {
    return one_minus_a2_ * (1.0 - std::norm(z)) / std::norm(1.0 - abar_ * z);
  }

 private:
  DiskPoint a_{};
  Complex abar_{0.0, 0.0};
  double one_minus_a2_ = 1.0;
};

}  // namespace hqr
