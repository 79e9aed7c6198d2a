// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.

#include <immintrin.h>

#include "theta_atlas/simd/kernels.hpp"

namespace theta_atlas::simd::detail {

namespace {

inline void cmul(__m256d ar, __m256d ai, __m256d br, __m256d bi, __m256d& out_r, __m256d& out_i) {
  out_r = _mm256_fmsub_pd(ar, br, _mm256_mul_pd(ai, bi));
  out_i = _mm256_fmadd_pd(ar, bi, _mm256_mul_pd(ai, br));
}

}  // namespace

void product_avx2(const ProductTable& t, const double* re, const double* im, double* out_re, double* out_im,
                  std::size_t n) {
  const __m256d one = _mm256_set1_pd(1.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d zr = _mm256_loadu_pd(re + i);
    const __m256d zi = _mm256_loadu_pd(im + i);
    const __m256d d = _mm256_fmadd_pd(zr, zr, _mm256_mul_pd(zi, zi));
    const __m256d ir = _mm256_div_pd(zr, d);
    const __m256d ii = _mm256_div_pd(_mm256_sub_pd(_mm256_setzero_pd(), zi), d);
    const __m256d wr = _mm256_add_pd(zr, ir);
    const __m256d wi = _mm256_add_pd(zi, ii);
    __m256d pr = _mm256_add_pd(one, ir);
    __m256d pi = ii;
    for (int m = 0; m < t.m_count; ++m) {
      const __m256d slope = _mm256_set1_pd(t.slope[m]);
      const __m256d fr = _mm256_fmadd_pd(slope, wr, _mm256_set1_pd(t.base[m]));
      const __m256d fi = _mm256_mul_pd(slope, wi);
      __m256d nr, ni;
      cmul(pr, pi, fr, fi, nr, ni);
      pr = nr;
      pi = ni;
    }
    _mm256_storeu_pd(out_re + i, pr);
    _mm256_storeu_pd(out_im + i, pi);
  }
  if (i < n) product_scalar(t, re + i, im + i, out_re + i, out_im + i, n - i);
}

void horner_avx2(const double* coef, int n_last, const double* re, const double* im, double* out_re,
                 double* out_im, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d zr = _mm256_loadu_pd(re + i);
    const __m256d zi = _mm256_loadu_pd(im + i);
    __m256d ar = _mm256_set1_pd(coef[n_last]);
    __m256d ai = _mm256_setzero_pd();
    for (int j = n_last - 1; j >= 0; --j) {
      __m256d nr, ni;
      cmul(ar, ai, zr, zi, nr, ni);
      ar = _mm256_add_pd(nr, _mm256_set1_pd(coef[j]));
      ai = ni;
    }
    _mm256_storeu_pd(out_re + i, ar);
    _mm256_storeu_pd(out_im + i, ai);
  }
  if (i < n) horner_scalar(coef, n_last, re + i, im + i, out_re + i, out_im + i, n - i);
}

void aberth_avx2(const double* re, const double* im, double* out_re, double* out_im, std::size_t n) {
  const __m256d zero = _mm256_setzero_pd();
  for (std::size_t i = 0; i < n; ++i) {
    const __m256d zr = _mm256_set1_pd(re[i]);
    const __m256d zi = _mm256_set1_pd(im[i]);
    __m256d sr = zero;
    __m256d si = zero;
    std::size_t j = 0;
    for (; j + 4 <= n; j += 4) {
      const __m256d dr = _mm256_sub_pd(zr, _mm256_loadu_pd(re + j));
      const __m256d di = _mm256_sub_pd(zi, _mm256_loadu_pd(im + j));
      const __m256d d2 = _mm256_fmadd_pd(dr, dr, _mm256_mul_pd(di, di));
      const __m256d live = _mm256_cmp_pd(d2, zero, _CMP_NEQ_OQ);
      const __m256d safe = _mm256_blendv_pd(_mm256_set1_pd(1.0), d2, live);
      sr = _mm256_add_pd(sr, _mm256_and_pd(live, _mm256_div_pd(dr, safe)));
      si = _mm256_sub_pd(si, _mm256_and_pd(live, _mm256_div_pd(di, safe)));
    }
    alignas(32) double lr[4];
    alignas(32) double li[4];
    _mm256_store_pd(lr, sr);
    _mm256_store_pd(li, si);
    double tr = (lr[0] + lr[1]) + (lr[2] + lr[3]);
    double ti = (li[0] + li[1]) + (li[2] + li[3]);
    for (; j < n; ++j) {
      const double dr = re[i] - re[j];
      const double di = im[i] - im[j];
      const double d2 = dr * dr + di * di;
      if (d2 == 0.0) continue;
      tr += dr / d2;
      ti -= di / d2;
    }
    out_re[i] = tr;
    out_im[i] = ti;
  }
}

}  // namespace theta_atlas::simd::detail
