#pragma once

// Upper bounds on noncoherent capacity valid at every SNR, in nats per channel use.

#include <optional>
#include <vector>

#include "noncoh/channel_model.hpp"
#include "noncoh/concave_solver.hpp"

namespace noncoh {

struct SisoBound {
  double value = 0.0;
  double zeta = 0.0;   // maximizing second moment a
  double i_rho = 0.0;  // I(rho)
};

/// max_{0 <= a <= 1/beta} log(1 + rho a R(0)) - a I(rho), attained at
/// zeta = min{1/beta, 1/I(rho) - 1/(rho R(0))}.
SisoBound u_siso_detail(const ScalarFadingSpec& spec, const PowerBudget& budget);
double u_siso(const ScalarFadingSpec& spec, const PowerBudget& budget);

/// The same maximum found numerically by grid search and golden section.
SisoBound u_siso_numeric(const ScalarFadingSpec& spec, const PowerBudget& budget);

struct SumBound {
  double value = 0.0;
  std::vector<double> a;  // per-antenna second moments in A(beta)
};

/// max over a in A(beta) of sum_r log(1 + rho sum_t a_t R_rt(0)) - sum_t a_t I_rt(rho).
SumBound u_mimo_sum(const MimoFadingSpec& spec, const PowerBudget& budget,
                    const opt::SolverOptions& opts = {});

struct IndividualBound {
  double value = 0.0;
  std::vector<double> p;  // law over on/off patterns, bit t = antenna t
  std::vector<double> d;  // noise split used
};

/// d_t = 1/nt.
std::vector<double> default_noise_split(int nt);

/// max over p in P(beta) of
///   sum_r log(1 + rho sum_b p_b s_rb) - sum_b p_b log(1 + rho sum_t b_t sigma2_rt(rho/d_t)),
/// with s_rb = sum_t b_t R_rt(0) and sigma2(inf) = 0 for d_t = 0.
IndividualBound u_mimo_individual(const MimoFadingSpec& spec, const PowerBudget& budget,
                                  const std::optional<std::vector<double>>& d = std::nullopt,
                                  const opt::SolverOptions& opts = {});

/// Throws SpecError unless d has nt entries, each >= 0, summing to at most 1.
void check_noise_split(const std::vector<double>& d, int nt);

}  // namespace noncoh
