#pragma once

// Low-SNR capacity asymptotes lim C/rho^2, in nats per channel use.

#include <optional>
#include <vector>

#include "noncoh/channel_model.hpp"
#include "noncoh/concave_solver.hpp"

namespace noncoh {

enum class Regime { ephemeral_branch, nonephemeral_branch };

const char* to_string(Regime r) noexcept;

struct AsymptoteResult {
  double value = 0.0;
  Regime regime = Regime::ephemeral_branch;
  /// Maximizing allocation: a single a for scalar problems, a vector over
  /// antennas or patterns otherwise.
  std::vector<double> argmax;
};

/// (1/2) max_{0 <= a <= 1/beta} (a lambda - a^2) for a unit-variance law.
AsymptoteResult c_siso(double lambda, double beta);
AsymptoteResult c_siso(const ScalarFadingSpec& spec, double beta);

/// Rate of IID on/off inputs: 1/(8(2 - lambda)) if lambda < 2 - beta/2, else
/// 1/(2 beta) + (lambda - 2)/(2 beta^2).
AsymptoteResult c_iid(double lambda, double beta);
AsymptoteResult c_iid(const ScalarFadingSpec& spec, double beta);

/// (lambda - 1)/2, the rate of PSK at beta = 1.
double c_psk(double lambda);
double c_psk(const ScalarFadingSpec& spec);

/// (1/2) max over a in A(beta) of sum_r sum_t a_t lambda_rt - (sum_t a_t R_rt(0))^2.
AsymptoteResult c_mimo_sum(const MimoFadingSpec& spec, double beta,
                           const opt::SolverOptions& opts = {1e-12, 50000});

/// (alpha_max^2 / 2) max_{0 <= a <= 1/beta} sum_r (a lambda_r - a^2 R_r(0)^2).
AsymptoteResult c_mimo_sum_separable(const MimoFadingSpec& spec, double beta);

/// ((sum alpha)^2 / 2) max_{0 <= a <= 1/beta} sum_r (a lambda_r - a^2 R_r(0)^2).
AsymptoteResult c_mimo_individual_separable(const MimoFadingSpec& spec, double beta);

struct IndividualBox {
  /// max over p in P(beta) of (1/2) sum_r [sum_b p_b g_rb - (sum_b p_b s_rb)^2],
  /// g_rb = sum_t b_t (lambda_rt - R_rt(0)^2)/d_t + s_rb^2.
  double upper = 0.0;
  std::vector<double> p;
  /// nt sum_r sum_t (lambda_rt - R_rt(0)^2)/2 (beta = 1, nonephemeral entries).
  std::optional<double> loose_upper;
  /// sum_r sum_{v >= 1} |sum_t R_rt(v)|^2 (beta = 1, nonephemeral entries).
  std::optional<double> loose_lower;
};

/// Upper bound on the individual-constraint asymptote for any MIMO law, with
/// the loose closed-form bracket when `loose` is set. d defaults to 1/nt.
IndividualBox c_mimo_individual_box(const MimoFadingSpec& spec, double beta,
                                    const std::optional<std::vector<double>>& d = std::nullopt,
                                    bool loose = false,
                                    const opt::SolverOptions& opts = {1e-12, 50000});

/// ((sum alpha)^2 / 2) max_{0 <= a <= 1/beta} (a lambda - a^2 R(0)^2).
AsymptoteResult c_delay_spread_separable(const DelaySpreadSpec& spec, double beta);

/// Limit of (beta/rho) C(rho, beta) as beta grows: R(0) - I(rho)/rho.
double large_beta_limit(const ScalarFadingSpec& spec, double rho);

}  // namespace noncoh
