#include "theta_atlas/simd/kernels.hpp"

namespace theta_atlas::simd::detail {

void product_scalar(const ProductTable& t, const double* re, const double* im, double* out_re, double* out_im,
                    std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double zr = re[i];
    const double zi = im[i];
    const double d = zr * zr + zi * zi;
    const double ir = zr / d;
    const double ii = -zi / d;
    const double wr = zr + ir;
    const double wi = zi + ii;
    double pr = 1.0 + ir;
    double pi = ii;
    for (int m = 0; m < t.m_count; ++m) {
      const double fr = t.base[m] + t.slope[m] * wr;
      const double fi = t.slope[m] * wi;
      const double nr = pr * fr - pi * fi;
      const double ni = pr * fi + pi * fr;
      pr = nr;
      pi = ni;
    }
    out_re[i] = pr;
    out_im[i] = pi;
  }
}

void horner_scalar(const double* coef, int n_last, const double* re, const double* im, double* out_re,
                   double* out_im, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double zr = re[i];
    const double zi = im[i];
    double ar = coef[n_last];
    double ai = 0.0;
    for (int j = n_last - 1; j >= 0; --j) {
      const double nr = ar * zr - ai * zi + coef[j];
      const double ni = ar * zi + ai * zr;
      ar = nr;
      ai = ni;
    }
    out_re[i] = ar;
    out_im[i] = ai;
  }
}

void aberth_scalar(const double* re, const double* im, double* out_re, double* out_im, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    double sr = 0.0;
    double si = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double dr = re[i] - re[j];
      const double di = im[i] - im[j];
      const double d2 = dr * dr + di * di;
      if (d2 == 0.0) continue;
      sr += dr / d2;
      si -= di / d2;
    }
    out_re[i] = sr;
    out_im[i] = si;
  }
}

}  // namespace theta_atlas::simd::detail
