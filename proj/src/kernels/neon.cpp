#include <arm_neon.h>

#include "impl.hpp"

namespace hqr::kernels::neon {
namespace {

inline float64x2_t inv_power(float64x2_t d, int k) {
  const float64x2_t inv = vdivq_f64(vdupq_n_f64(1.0), d);
  float64x2_t w = vdupq_n_f64(1.0);
  for (int j = 0; j < k / 2; ++j) w = vmulq_f64(w, inv);
  if (k & 1) w = vdivq_f64(w, vsqrtq_f64(d));
  return w;
}

}  // namespace

double mobius_weighted_sum(const double* x, const double* y, const double* c, std::size_t n,
                           double ax, double ay, double s) {
  const int k = half_steps(s);
  const float64x2_t vax = vdupq_n_f64(ax);
  const float64x2_t vay = vdupq_n_f64(ay);
  const float64x2_t one = vdupq_n_f64(1.0);
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);

  auto weight = [&](const double* xp, const double* yp) {
    const float64x2_t vx = vld1q_f64(xp);
    const float64x2_t vy = vld1q_f64(yp);
    const float64x2_t re = vsubq_f64(one, vfmaq_f64(vmulq_f64(vay, vy), vax, vx));
    const float64x2_t im = vfmsq_f64(vmulq_f64(vax, vy), vay, vx);
    const float64x2_t d = vfmaq_f64(vmulq_f64(im, im), re, re);
    if (k != 0) return inv_power(d, k);
    double tmp[2];
    vst1q_f64(tmp, d);
    for (double& t : tmp) t = std::pow(t, -s);
    return vld1q_f64(tmp);
  };

  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vfmaq_f64(acc0, vld1q_f64(c + i), weight(x + i, y + i));
    acc1 = vfmaq_f64(acc1, vld1q_f64(c + i + 2), weight(x + i + 2, y + i + 2));
  }
  for (; i + 2 <= n; i += 2) acc0 = vfmaq_f64(acc0, vld1q_f64(c + i), weight(x + i, y + i));
  double total = vaddvq_f64(vaddq_f64(acc0, acc1));
  if (i < n) total += scalar::mobius_weighted_sum(x + i, y + i, c + i, n - i, ax, ay, s);
  return total;
}

void modulus(const double* re, const double* im, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t r = vld1q_f64(re + i);
    const float64x2_t m = vld1q_f64(im + i);
    vst1q_f64(out + i, vsqrtq_f64(vfmaq_f64(vmulq_f64(m, m), r, r)));
  }
  if (i < n) scalar::modulus(re + i, im + i, out + i, n - i);
}

void modulus_sum(const double* a_re, const double* a_im, const double* b_re, const double* b_im,
                 double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t ar = vld1q_f64(a_re + i);
    const float64x2_t ai = vld1q_f64(a_im + i);
    const float64x2_t br = vld1q_f64(b_re + i);
    const float64x2_t bi = vld1q_f64(b_im + i);
    const float64x2_t ma = vsqrtq_f64(vfmaq_f64(vmulq_f64(ai, ai), ar, ar));
    const float64x2_t mb = vsqrtq_f64(vfmaq_f64(vmulq_f64(bi, bi), br, br));
    vst1q_f64(out + i, vaddq_f64(ma, mb));
  }
  if (i < n) scalar::modulus_sum(a_re + i, a_im + i, b_re + i, b_im + i, out + i, n - i);
}

}  // namespace hqr::kernels::neon
