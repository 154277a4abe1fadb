#pragma once

#include <cmath>

namespace noncoh::detail {

/// x - log(1 + x) without cancellation for small |x|.
inline double x_minus_log1p(double x) {
  if (std::abs(x) < 1e-2) {
    double term = x * x, acc = 0.0;
    for (int k = 2; k <= 12; ++k) {
      acc += (k % 2 == 0 ? term : -term) / k;
      term *= x;
    }
    return acc;
  }
  return x - std::log1p(x);
}

}  // namespace noncoh::detail

namespace noncoh::detail {

/// e^x - 1 - x without cancellation for small |x|.
inline double expm1_minus_x(double x) {
  if (std::abs(x) < 1e-2) {
    double term = x * x / 2.0, acc = 0.0;
    for (int k = 3; k <= 14; ++k) {
      acc += term;
      term *= x / k;
    }
    return acc;
  }
  return std::expm1(x) - x;
}

}  // namespace noncoh::detail
