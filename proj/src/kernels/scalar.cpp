#include "impl.hpp"

namespace hqr::kernels::scalar {

double mobius_weighted_sum(const double* x, const double* y, const double* c, std::size_t n,
                           double ax, double ay, double s) {
  const int k = half_steps(s);
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double re = 1.0 - (ax * x[i] + ay * y[i]);
    const double im = ax * y[i] - ay * x[i];
    const double d = re * re + im * im;
    double w;
    if (k == 0) {
      w = std::pow(d, -s);
    } else {
      const double inv = 1.0 / d;
      w = 1.0;
      for (int j = 0; j < k / 2; ++j) w *= inv;
      if (k & 1) w /= std::sqrt(d);
    }
    acc += c[i] * w;
  }
  return acc;
}

void modulus(const double* re, const double* im, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = std::sqrt(re[i] * re[i] + im[i] * im[i]);
}

void modulus_sum(const double* a_re, const double* a_im, const double* b_re, const double* b_im,
                 double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = std::sqrt(a_re[i] * a_re[i] + a_im[i] * a_im[i]) +
             std::sqrt(b_re[i] * b_re[i] + b_im[i] * b_im[i]);
  }
}

}  // namespace hqr::kernels::scalar
