#pragma once

// Noisy one-step prediction of a fading process from unit-amplitude past
// observations, and the spectral functional I(rho) tied to it by
// I(rho) = log(1 + rho sigma^2(rho)).

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "noncoh/channel_model.hpp"

namespace noncoh {

struct PredictionResult {
  double rho = 0.0;
  double sigma2 = 0.0;
  double i_rho = 0.0;
};

/// (1/2pi) int log(1 + rho S(w)) dw. Zero at rho = 0.
double i_of_rho(const ScalarFadingSpec& spec, double rho);

/// rho R(0) - I(rho) = (1/2pi) int (rho S - log(1 + rho S)) dw, computed without
/// cancellation. Of order lambda rho^2 / 2 for small rho.
double spectral_deficit(const ScalarFadingSpec& spec, double rho);

/// sigma^2(rho) = (e^{I(rho)} - 1)/rho, with sigma^2(0) = R(0).
PredictionResult sigma2_of_rho(const ScalarFadingSpec& spec, double rho);

/// R(0) - sigma^2(rho), the variance the noisy past explains. Accurate at small
/// rho, where it behaves like (lambda - R(0)^2) rho / 2. Equals R(0) at rho = inf.
double prediction_gain(const ScalarFadingSpec& spec, double rho);

/// MMSE of H_0 given Y_m = sqrt(rho) z_m H_{-1-m} + W_m, m = 0..M-1.
///
/// z is stored most-recent-first: z[0] multiplies time -1, z[M-1] time -M.
/// Solves the M x M Hermitian system I + rho D K D^H with K[m][n] = R(n - m)
/// (the covariance of H_{-1-m} and H_{-1-n}) and D = diag(z).
double finite_history_error(const ScalarFadingSpec& spec, double rho,
                            std::span<const std::complex<double>> z);

struct FirstOrderCheck {
  double exact = 0.0;
  double linearized = 0.0;
};

/// Exact error next to R(0) - rho sum_m |R(1+m)|^2 |z_m|^2. Requires an
/// absolutely summable autocorrelation (parametric or sequence laws).
FirstOrderCheck first_order_error_check(const ScalarFadingSpec& spec, double rho,
                                        std::span<const std::complex<double>> z);

/// rho^2 Q^2 / (1 - rho Q) with Q = sum |R(v)|; +inf when rho Q >= 1.
double first_order_remainder_bound(const ScalarFadingSpec& spec, double rho);

struct HistoryConvergence {
  double value = 0.0;
  std::size_t history = 0;
  std::vector<double> trace;  // error at each M visited
};

/// finite_history_error with z = 1, doubling M from `start` until successive
/// values differ by less than `tol`. Throws NumericError past `max_history`.
HistoryConvergence converge_history(const ScalarFadingSpec& spec, double rho,
                                    double tol = 1e-9, std::size_t start = 16,
                                    std::size_t max_history = 2048);

}  // namespace noncoh
