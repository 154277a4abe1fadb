#pragma once

// Achievability-side evaluations: the exact low-SNR (rho^2) coefficient of the
// mutual information of on/off block inputs, and a QPSK lower bound on capacity.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "noncoh/channel_model.hpp"

namespace noncoh {

/// Block input Z_k = U Phi_k, k = 1..n, with U in {0, 1}, P(U = 1) = a.
///
/// onoff_fsk: Phi_k = e^{i k Theta}, Theta uniform on the m-th roots of unity
/// (requires m >= n so that the phases are uncorrelated). onoff_psk: IID m-ary
/// PSK. onoff_uniform_phase: IID uniform phase. storm_common_signal: the FSK law,
/// sent identically on every transmit antenna. On MIMO channels every law sends
/// the same signal on all antennas.
struct InputLaw {
  enum class Kind { onoff_fsk, onoff_psk, onoff_uniform_phase, storm_common_signal };
  Kind kind = Kind::onoff_uniform_phase;
  int m = 0;
  int n = 1;
  double a = 1.0;

  static InputLaw fsk(int m, int n, double a) { return {Kind::onoff_fsk, m, n, a}; }
  static InputLaw psk(int m, int n, double a) { return {Kind::onoff_psk, m, n, a}; }
  static InputLaw uniform_phase(int n, double a) { return {Kind::onoff_uniform_phase, 0, n, a}; }
  static InputLaw storm(int m, int n, double a) { return {Kind::storm_common_signal, m, n, a}; }
};

std::string to_string(InputLaw::Kind kind);

struct SecondOrderResult {
  /// lim_{rho -> 0} I(Z_1^n; Y_1^n) / (n rho^2).
  double coeff = 0.0;
  /// Finite-n Cesaro lambda of the effective law seen by the common signal,
  /// summed over receive antennas.
  double lambda_n = 0.0;
};

constexpr int kMaxBlockLength = 64;

/// (1/2n) [E tr Sigma_Z^2 - tr (E Sigma_Z)^2], Sigma_Z the covariance of the
/// noiseless output given the input block, from exact moments of the phase law.
SecondOrderResult second_order_mi(const ScalarFadingSpec& spec, const InputLaw& law);
SecondOrderResult second_order_mi(const MimoFadingSpec& spec, const InputLaw& law);
/// Outputs Y_1..Y_n of Y_k = sum_t H_k^{(t)} Z_{k-t} + W_k with Z_k = 0 outside 1..n.
SecondOrderResult second_order_mi(const DelaySpreadSpec& spec, const InputLaw& law);

/// sum_{|v| < n} (1 - |v|/n) |R(v)|^2.
double lambda_n(const ScalarFadingSpec& spec, int n);

/// Extrapolates coeff(n) to n = inf from the given increasing block lengths,
/// removing successive powers of 1/n.
double richardson_limit(std::span<const int> ns, std::span<const double> values);

/// Mutual information of equiprobable unit-energy QPSK over y = sqrt(s) x + N,
/// N ~ CN(0, 1), by a `order` x `order` Gauss-Hermite product rule.
double mi_qpsk(double s, int order);

/// The same quantity as twice the mutual information of real BPSK at SNR s, by
/// adaptive Gauss–Kronrod to 1e-13 relative.
double mi_qpsk(double s);

/// E[mi_qpsk(rho g / (1 + rho sigma^2(rho)))] with g exponential of mean
/// 1 - sigma^2(rho): the rate of IID QPSK given the predictor of the fading from
/// the noisy past. Unit-variance laws only.
double qpsk_conditional_mi_L(const ScalarFadingSpec& spec, double rho);

/// max_{1 <= gamma <= beta} L(gamma rho / beta) / gamma.
double capacity_lower_bound(const ScalarFadingSpec& spec, const PowerBudget& budget);

struct RatePoint {
  enum class Kind { upper, lower, asymptote_scaled };
  double rho = 0.0;
  double value = 0.0;
  Kind kind = Kind::upper;
};

const char* to_string(RatePoint::Kind kind) noexcept;

}  // namespace noncoh
