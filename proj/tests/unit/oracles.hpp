#pragma once

#include <cmath>
#include <complex>
#include <random>

#include "hqr/core.hpp"

namespace oracle {

inline double beta(double a, double b) {
  return std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
}

// int_D |z|^{2m} (1 - |z|^2)^alpha dA
inline double radial_moment(int m, double alpha) { return hqr::kPi * beta(m + 1.0, alpha + 1.0); }

// int_D (1-|z|^2)^q (1-|sigma_a(z)|^2)^s dA from the binomial expansion of
// (1 - conj(a) z)^{-s} and orthogonality of e^{im theta}.
inline double mobius_constant_series(double rho_abs, double q, double s) {
  const double r2 = rho_abs * rho_abs;
  double coef = 1.0;  // (s)_m / m!
  double sum = 0.0;
  for (int m = 0; m < 20000; ++m) {
    const double term = coef * coef * std::pow(r2, m) * beta(m + 1.0, q + s + 1.0);
    sum += term;
    if (m > 50 && term < 1e-18 * sum) break;
    coef *= (s + m) / (m + 1.0);
  }
  return std::pow(1.0 - r2, s) * hqr::kPi * sum;
}

// The s = 1, q = 0 case in the closed series form (1-rho)^2 pi sum (m+1) rho^m / (m+2).
inline double c1_series(double rho) {
  double sum = 0.0;
  for (int m = 0; m < 200000; ++m) {
    const double term = (m + 1.0) * std::pow(rho, m) / (m + 2.0);
    sum += term;
    if (m > 10 && term < 1e-18 * sum) break;
  }
  return (1.0 - rho) * (1.0 - rho) * hqr::kPi * sum;
}

inline std::complex<double> random_disk_point(std::mt19937_64& rng, double rmax = 0.95) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double r = rmax * std::sqrt(u(rng));
  return std::polar(r, 2.0 * hqr::kPi * u(rng));
}

}  // namespace oracle
