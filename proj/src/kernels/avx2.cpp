#include <immintrin.h>

#include "impl.hpp"

namespace hqr::kernels::avx2 {
namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

inline __m256d inv_power(__m256d d, int k) {
  const __m256d inv = _mm256_div_pd(_mm256_set1_pd(1.0), d);
  __m256d w = _mm256_set1_pd(1.0);
  for (int j = 0; j < k / 2; ++j) w = _mm256_mul_pd(w, inv);
  if (k & 1) w = _mm256_div_pd(w, _mm256_sqrt_pd(d));
  return w;
}

}  // namespace

double mobius_weighted_sum(const double* x, const double* y, const double* c, std::size_t n,
                           double ax, double ay, double s) {
  const int k = half_steps(s);
  const __m256d vax = _mm256_set1_pd(ax);
  const __m256d vay = _mm256_set1_pd(ay);
  const __m256d one = _mm256_set1_pd(1.0);
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  alignas(32) double tmp[4];

  auto weight = [&](const double* xp, const double* yp) {
    const __m256d vx = _mm256_loadu_pd(xp);
    const __m256d vy = _mm256_loadu_pd(yp);
    const __m256d re = _mm256_sub_pd(one, _mm256_fmadd_pd(vax, vx, _mm256_mul_pd(vay, vy)));
    const __m256d im = _mm256_fmsub_pd(vax, vy, _mm256_mul_pd(vay, vx));
    const __m256d d = _mm256_fmadd_pd(re, re, _mm256_mul_pd(im, im));
    if (k != 0) return inv_power(d, k);
    _mm256_store_pd(tmp, d);
    for (double& t : tmp) t = std::pow(t, -s);
    return _mm256_load_pd(tmp);
  };

  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(c + i), weight(x + i, y + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(c + i + 4), weight(x + i + 4, y + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(c + i), weight(x + i, y + i), acc0);
  }
  double total = hsum(_mm256_add_pd(acc0, acc1));
  if (i < n) total += scalar::mobius_weighted_sum(x + i, y + i, c + i, n - i, ax, ay, s);
  return total;
}

void modulus(const double* re, const double* im, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d r = _mm256_loadu_pd(re + i);
    const __m256d m = _mm256_loadu_pd(im + i);
    _mm256_storeu_pd(out + i, _mm256_sqrt_pd(_mm256_fmadd_pd(r, r, _mm256_mul_pd(m, m))));
  }
  if (i < n) scalar::modulus(re + i, im + i, out + i, n - i);
}

void modulus_sum(const double* a_re, const double* a_im, const double* b_re, const double* b_im,
                 double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d ar = _mm256_loadu_pd(a_re + i);
    const __m256d ai = _mm256_loadu_pd(a_im + i);
    const __m256d br = _mm256_loadu_pd(b_re + i);
    const __m256d bi = _mm256_loadu_pd(b_im + i);
    const __m256d ma = _mm256_sqrt_pd(_mm256_fmadd_pd(ar, ar, _mm256_mul_pd(ai, ai)));
    const __m256d mb = _mm256_sqrt_pd(_mm256_fmadd_pd(br, br, _mm256_mul_pd(bi, bi)));
    _mm256_storeu_pd(out + i, _mm256_add_pd(ma, mb));
  }
  if (i < n) scalar::modulus_sum(a_re + i, a_im + i, b_re + i, b_im + i, out + i, n - i);
}

}  // namespace hqr::kernels::avx2
