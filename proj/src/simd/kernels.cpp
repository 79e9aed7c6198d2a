#include "theta_atlas/simd/kernels.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string_view>
#include <vector>

namespace theta_atlas::simd {

namespace {

constexpr double kBatchTolerance = 1e-17;

std::atomic<int> g_override{-1};

Level level_from_env() {
  const char* env = std::getenv("THETA_ATLAS_SIMD");
  if (env != nullptr && std::string_view(env) == "scalar") return Level::Scalar;
  return detected_level();
}

void check_sizes(std::span<const double> re, std::span<const double> im, std::span<double> out_re,
                 std::span<double> out_im) {
  if (re.size() != im.size() || out_re.size() < re.size() || out_im.size() < re.size()) {
    throw std::invalid_argument("batch kernel: mismatched span sizes");
  }
}

double max_abs(std::span<const double> re, std::span<const double> im) {
  double m = 0.0;
  for (std::size_t i = 0; i < re.size(); ++i) m = std::max(m, std::hypot(re[i], im[i]));
  return m;
}

double min_abs(std::span<const double> re, std::span<const double> im) {
  double m = INFINITY;
  for (std::size_t i = 0; i < re.size(); ++i) m = std::min(m, std::hypot(re[i], im[i]));
  return m;
}

void series_impl(double q, std::span<const double> re, std::span<const double> im, std::span<double> out_re,
                 std::span<double> out_im, Level level) {
  const double r = max_abs(re, im);
  std::vector<double> coef{1.0};
  // Stop once q^{n+1} r <= 1/2 and the geometric tail is below tolerance.
  const double lq = std::log(q);
  const double lr = std::log(std::max(r, 1e-300));
  for (int n = 1;; ++n) {
    coef.push_back(coef.back() * std::pow(q, n));
    const double log_next = 0.5 * (n + 1) * (n + 2) * lq + (n + 1) * lr;
    if ((n + 1) * lq + lr <= std::log(0.5) && log_next + std::log(2.0) <= std::log(kBatchTolerance)) break;
    if (n > 100000) throw std::domain_error("theta_series_batch: q too close to 1 for this radius");
  }
  const int n_last = static_cast<int>(coef.size()) - 1;
  if (level == Level::Avx2) {
    detail::horner_avx2(coef.data(), n_last, re.data(), im.data(), out_re.data(), out_im.data(), re.size());
  } else {
    detail::horner_scalar(coef.data(), n_last, re.data(), im.data(), out_re.data(), out_im.data(), re.size());
  }
}

}  // namespace

const char* to_string(Level level) { return level == Level::Avx2 ? "avx2" : "scalar"; }

Level detected_level() {
#if defined(THETA_ATLAS_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  static const bool has = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  if (has) return Level::Avx2;
#endif
  return Level::Scalar;
}

bool supported(Level level) { return level == Level::Scalar || detected_level() == Level::Avx2; }

Level active_level() {
  const int o = g_override.load(std::memory_order_relaxed);
  if (o >= 0) return static_cast<Level>(o);
  static const Level from_env = level_from_env();
  return from_env;
}

void set_active_level(Level level) {
  if (!supported(level)) throw std::runtime_error("SIMD level not supported on this CPU");
  g_override.store(static_cast<int>(level), std::memory_order_relaxed);
}

void theta_star_batch(double q, std::span<const double> re, std::span<const double> im, std::span<double> out_re,
                      std::span<double> out_im, Level level) {
  check_sizes(re, im, out_re, out_im);
  if (!(q > 0.0 && q < 1.0)) throw std::domain_error("theta_star_batch: q outside (0,1)");
  if (re.empty()) return;
  if (!supported(level)) level = Level::Scalar;
  const double lo = min_abs(re, im);
  if (lo == 0.0) throw std::domain_error("theta_star_batch: z = 0");
  const double spread = 1.0 + max_abs(re, im) + 1.0 / lo;

  std::vector<double> base, slope;
  double qm = 1.0;
  for (int m = 1;; ++m) {
    qm *= q;
    base.push_back((1.0 - qm) * (1.0 + qm * qm));
    slope.push_back((1.0 - qm) * qm);
    if (qm * q * spread / (1.0 - q) <= kBatchTolerance) break;
    if (m > 1000000) throw std::domain_error("theta_star_batch: q too close to 1");
  }
  const detail::ProductTable table{base.data(), slope.data(), static_cast<int>(base.size())};
  if (level == Level::Avx2) {
    detail::product_avx2(table, re.data(), im.data(), out_re.data(), out_im.data(), re.size());
  } else {
    detail::product_scalar(table, re.data(), im.data(), out_re.data(), out_im.data(), re.size());
  }
}

void theta_series_batch(double q, std::span<const double> re, std::span<const double> im, std::span<double> out_re,
                        std::span<double> out_im, Level level) {
  check_sizes(re, im, out_re, out_im);
  if (!(q > 0.0 && q < 1.0)) throw std::domain_error("theta_series_batch: q outside (0,1)");
  if (re.empty()) return;
  if (!supported(level)) level = Level::Scalar;
  series_impl(q, re, im, out_re, out_im, level);
}

void theta_decomposed_batch(double q, std::span<const double> re, std::span<const double> im,
                            std::span<double> out_re, std::span<double> out_im, Level level) {
  check_sizes(re, im, out_re, out_im);
  if (re.empty()) return;
  if (!supported(level)) level = Level::Scalar;
  const std::size_t n = re.size();
  std::vector<double> inv_re(n), inv_im(n), g_re(n), g_im(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double d = re[i] * re[i] + im[i] * im[i];
    inv_re[i] = re[i] / d;
    inv_im[i] = -im[i] / d;
  }
  theta_star_batch(q, re, im, out_re, out_im, level);
  // G(q, z) = theta(q, 1/z) / z.
  series_impl(q, inv_re, inv_im, g_re, g_im, level);
  for (std::size_t i = 0; i < n; ++i) {
    const double gr = g_re[i] * inv_re[i] - g_im[i] * inv_im[i];
    const double gi = g_re[i] * inv_im[i] + g_im[i] * inv_re[i];
    out_re[i] -= gr;
    out_im[i] -= gi;
  }
}

void aberth_sums(std::span<const double> re, std::span<const double> im, std::span<double> out_re,
                 std::span<double> out_im, Level level) {
  check_sizes(re, im, out_re, out_im);
  if (!supported(level)) level = Level::Scalar;
  if (level == Level::Avx2) {
    detail::aberth_avx2(re.data(), im.data(), out_re.data(), out_im.data(), re.size());
  } else {
    detail::aberth_scalar(re.data(), im.data(), out_re.data(), out_im.data(), re.size());
  }
}

}  // namespace theta_atlas::simd
