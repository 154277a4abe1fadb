#include <immintrin.h>

#include <cmath>

#include "noncoh/kernels.hpp"

namespace noncoh::kernels::avx2 {
namespace {

inline constexpr std::size_t kAnchor = 64;

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

}  // namespace

double dot(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = a.size();
  const double* pa = a.data();
  const double* pb = b.data();
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(pa + i), _mm256_loadu_pd(pb + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(pa + i + 4), _mm256_loadu_pd(pb + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(pa + i), _mm256_loadu_pd(pb + i), acc0);
  }
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += pa[i] * pb[i];
  return s;
}

double sum_abs2(std::span<const std::complex<double>> r) {
  // std::complex<double> is layout-compatible with double[2].
  const auto* p = reinterpret_cast<const double*>(r.data());
  const std::span<const double> flat(p, 2 * r.size());
  return dot(flat, flat);
}

double cesaro_abs2(std::span<const std::complex<double>> r, std::size_t n) {
  const std::size_t top = std::min(n, r.size());
  if (top <= 1) return 0.0;
  const double inv_n = 1.0 / static_cast<double>(n);
  const auto* p = reinterpret_cast<const double*>(r.data());
  const __m256d vinv = _mm256_set1_pd(inv_n);
  const __m256d one = _mm256_set1_pd(1.0);
  // Two complex lags per 256-bit register: lanes (re v, im v, re v+1, im v+1).
  __m256d lag = _mm256_set_pd(2.0, 2.0, 1.0, 1.0);
  const __m256d two = _mm256_set1_pd(2.0);
  __m256d acc = _mm256_setzero_pd();
  std::size_t v = 1;
  for (; v + 2 <= top; v += 2) {
    const __m256d x = _mm256_loadu_pd(p + 2 * v);
    const __m256d w = _mm256_fnmadd_pd(lag, vinv, one);
    acc = _mm256_fmadd_pd(w, _mm256_mul_pd(x, x), acc);
    lag = _mm256_add_pd(lag, two);
  }
  double s = hsum(acc);
  for (; v < top; ++v) s += (1.0 - static_cast<double>(v) * inv_n) * std::norm(r[v]);
  return s;
}

void trig_series(std::span<const std::complex<double>> r, std::span<const double> omega,
                 std::span<double> out) {
  const std::size_t lags = r.size();
  const std::size_t m = omega.size();
  if (lags == 0) {
    for (std::size_t j = 0; j < m; ++j) out[j] = 0.0;
    return;
  }
  const double r0 = r[0].real();
  std::size_t j = 0;
  for (; j + 4 <= m; j += 4) {
    alignas(32) double tmp_c[4], tmp_s[4];
    for (int k = 0; k < 4; ++k) {
      tmp_c[k] = std::cos(omega[j + k]);
      tmp_s[k] = std::sin(omega[j + k]);
    }
    const __m256d c1 = _mm256_load_pd(tmp_c);
    const __m256d s1 = _mm256_load_pd(tmp_s);
    __m256d c = _mm256_set1_pd(1.0);
    __m256d s = _mm256_setzero_pd();
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t v = 1; v < lags; ++v) {
      if (v % kAnchor == 1) {
        const double dv = static_cast<double>(v);
        for (int k = 0; k < 4; ++k) {
          tmp_c[k] = std::cos(dv * omega[j + k]);
          tmp_s[k] = std::sin(dv * omega[j + k]);
        }
        c = _mm256_load_pd(tmp_c);
        s = _mm256_load_pd(tmp_s);
      } else {
        const __m256d cn = _mm256_fmsub_pd(c, c1, _mm256_mul_pd(s, s1));
        s = _mm256_fmadd_pd(s, c1, _mm256_mul_pd(c, s1));
        c = cn;
      }
      const __m256d re = _mm256_set1_pd(r[v].real());
      const __m256d im = _mm256_set1_pd(r[v].imag());
      acc = _mm256_fmadd_pd(re, c, _mm256_fmadd_pd(im, s, acc));
    }
    const __m256d res = _mm256_fmadd_pd(_mm256_set1_pd(2.0), acc, _mm256_set1_pd(r0));
    _mm256_storeu_pd(out.data() + j, res);
  }
  if (j < m) {
    scalar::trig_series(r, omega.subspan(j), out.subspan(j));
  }
}

}  // namespace noncoh::kernels::avx2
