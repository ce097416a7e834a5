#pragma once

#include <cmath>
#include <cstddef>

namespace hqr::kernels {

// 2s as a small positive integer, or 0 when the exponent needs pow.
inline int half_steps(double s) {
  const double t = 2.0 * s;
  if (!(t > 0.0) || t > 64.0) return 0;
  const double r = std::round(t);
  return r == t ? static_cast<int>(r) : 0;
}

namespace scalar {
double mobius_weighted_sum(const double* x, const double* y, const double* c, std::size_t n,
                           double ax, double ay, double s);
void modulus(const double* re, const double* im, double* out, std::size_t n);
void modulus_sum(const double* a_re, const double* a_im, const double* b_re, const double* b_im,
                 double* out, std::size_t n);
}  // namespace scalar

namespace avx2 {
double mobius_weighted_sum(const double* x, const double* y, const double* c, std::size_t n,
                           double ax, double ay, double s);
void modulus(const double* re, const double* im, double* out, std::size_t n);
void modulus_sum(const double* a_re, const double* a_im, const double* b_re, const double* b_im,
                 double* out, std::size_t n);
}  // namespace avx2

namespace neon {
double mobius_weighted_sum(const double* x, const double* y, const double* c, std::size_t n,
                           double ax, double ay, double s);
void modulus(const double* re, const double* im, double* out, std::size_t n);
void modulus_sum(const double* a_re, const double* a_im, const double* b_re, const double* b_im,
                 double* out, std::size_t n);
}  // namespace neon

}  // namespace hqr::kernels
