#pragma once

// Double-precision batch kernels used for dense screening scans (circle and
// arc minima, contour plots) and for the O(n^2) part of the Aberth iteration.
//
// Each kernel has a scalar reference implementation and an AVX2/FMA variant
// that processes four points per iteration. The variant is picked at runtime
// from the CPU features; THETA_ATLAS_SIMD=scalar forces the reference path.
// Results of the two paths agree to a few ulps (FMA contraction differs).

#include <span>

namespace theta_atlas::simd {

enum class Level { Scalar, Avx2 };

const char* to_string(Level level);

/// Best level supported by this CPU and build.
Level detected_level();
/// Level used by default: detected_level() unless overridden.
Level active_level();
/// Overrides the default level for the whole process. Throws if unsupported.
void set_active_level(Level level);
bool supported(Level level);

/// Theta*(q, z_i) by the truncated Jacobi triple product (z_i != 0).
void theta_star_batch(double q, std::span<const double> re, std::span<const double> im,
                      std::span<double> out_re, std::span<double> out_im, Level level = active_level());

/// theta(q, z_i) by direct summation. Accurate only where the largest term is
/// O(1), i.e. for |z| of a few units at most.
void theta_series_batch(double q, std::span<const double> re, std::span<const double> im,
                        std::span<double> out_re, std::span<double> out_im, Level level = active_level());

/// theta(q, z_i) = Theta*(q, z_i) - G(q, z_i), free of cancellation for |z_i| >= 1.
void theta_decomposed_batch(double q, std::span<const double> re, std::span<const double> im,
                            std::span<double> out_re, std::span<double> out_im, Level level = active_level());

/// out_i = sum_{j != i} 1 / (z_i - z_j). Coincident points contribute nothing.
void aberth_sums(std::span<const double> re, std::span<const double> im, std::span<double> out_re,
                 std::span<double> out_im, Level level = active_level());

namespace detail {

// Per-level inner loops. Factor m of the triple product, merged over the
// three families with w = z + 1/z, is base[m-1] + slope[m-1] * w where
// base = (1 - q^m)(1 + q^{2m}) and slope = (1 - q^m) q^m.
// `coef[j] = q^{j(j+1)/2}` for j = 0..n_last.
struct ProductTable {
  const double* base;
  const double* slope;
  int m_count;
};

void product_scalar(const ProductTable& t, const double* re, const double* im, double* out_re, double* out_im,
                    std::size_t n);
void horner_scalar(const double* coef, int n_last, const double* re, const double* im, double* out_re,
                   double* out_im, std::size_t n);
void aberth_scalar(const double* re, const double* im, double* out_re, double* out_im, std::size_t n);

void product_avx2(const ProductTable& t, const double* re, const double* im, double* out_re, double* out_im,
                  std::size_t n);
void horner_avx2(const double* coef, int n_last, const double* re, const double* im, double* out_re,
                 double* out_im, std::size_t n);
void aberth_avx2(const double* re, const double* im, double* out_re, double* out_im, std::size_t n);

}  // namespace detail

}  // namespace theta_atlas::simd
