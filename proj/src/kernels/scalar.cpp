#include <cmath>

#include "noncoh/kernels.hpp"

namespace noncoh::kernels::scalar {

// Anchor interval for the rotation recurrence in trig_series. The phasor is
// recomputed from cos/sin every kAnchor lags so rounding drift stays bounded.
inline constexpr std::size_t kAnchor = 64;

double dot(std::span<const double> a, std::span<const double> b) {
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
  const std::size_t n = a.size();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    s0 += a[i] * b[i];
    s1 += a[i + 1] * b[i + 1];
    s2 += a[i + 2] * b[i + 2];
    s3 += a[i + 3] * b[i + 3];
  }
  for (; i < n; ++i) s0 += a[i] * b[i];
  return (s0 + s1) + (s2 + s3);
}

double sum_abs2(std::span<const std::complex<double>> r) {
  double s = 0.0;
  for (const auto& z : r) s += std::norm(z);
  return s;
}

double cesaro_abs2(std::span<const std::complex<double>> r, std::size_t n) {
  const std::size_t top = std::min(n, r.size());
  const double inv_n = 1.0 / static_cast<double>(n);
  double s = 0.0;
  for (std::size_t v = 1; v < top; ++v) {
    s += (1.0 - static_cast<double>(v) * inv_n) * std::norm(r[v]);
  }
  return s;
}

void trig_series(std::span<const std::complex<double>> r, std::span<const double> omega,
                 std::span<double> out) {
  const std::size_t lags = r.size();
  for (std::size_t j = 0; j < omega.size(); ++j) {
    const double w = omega[j];
    if (lags == 0) {
      out[j] = 0.0;
      continue;
    }
    const double c1 = std::cos(w), s1 = std::sin(w);
    double acc = 0.0;
    double c = 1.0, s = 0.0;  // cos(v w), sin(v w)
    for (std::size_t v = 1; v < lags; ++v) {
      if (v % kAnchor == 1) {
        c = std::cos(static_cast<double>(v) * w);
        s = std::sin(static_cast<double>(v) * w);
      } else {
        const double cn = c * c1 - s * s1;
        s = s * c1 + c * s1;
        c = cn;
      }
      // Re(r e^{-ivw}) = Re(r) cos(vw) + Im(r) sin(vw)
      acc += r[v].real() * c + r[v].imag() * s;
    }
    out[j] = r[0].real() + 2.0 * acc;
  }
}

}  // namespace noncoh::kernels::scalar
