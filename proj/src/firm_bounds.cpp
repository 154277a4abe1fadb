#include "noncoh/firm_bounds.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "noncoh/errors.hpp"
#include "noncoh/prediction.hpp"
#include "numeric_util.hpp"

namespace noncoh {

using detail::x_minus_log1p;

namespace {

// log(1 + rho a R0) - a I rewritten as a D - (x - log(1 + x)), x = rho a R0.
double siso_objective(double a, double rho, double r0, double deficit) {
  return a * deficit - x_minus_log1p(rho * a * r0);
}

}  // namespace

SisoBound u_siso_detail(const ScalarFadingSpec& spec, const PowerBudget& budget) {
  const auto b = PowerBudget::make(budget.rho, budget.beta);
  const double r0 = spec.r0();
  if (r0 == 0.0) return {};
  const double deficit = spectral_deficit(spec, b.rho);
  const double i = b.rho * r0 - deficit;
  // 1/I - 1/(rho R0) = D / (I rho R0)
  const double interior = deficit / (i * b.rho * r0);
  SisoBound out;
  out.zeta = std::min(1.0 / b.beta, interior);
  out.i_rho = i;
  out.value = siso_objective(out.zeta, b.rho, r0, deficit);
  return out;
}

double u_siso(const ScalarFadingSpec& spec, const PowerBudget& budget) {
  return u_siso_detail(spec, budget).value;
}

SisoBound u_siso_numeric(const ScalarFadingSpec& spec, const PowerBudget& budget) {
  const auto b = PowerBudget::make(budget.rho, budget.beta);
  const double r0 = spec.r0();
  const double deficit = spectral_deficit(spec, b.rho);
  const auto best = opt::maximize_1d(
      [&](double a) { return siso_objective(a, b.rho, r0, deficit); }, 0.0, 1.0 / b.beta, {}, 64,
      1e-13);
  return {best.value, best.x, b.rho * r0 - deficit};
}

SumBound u_mimo_sum(const MimoFadingSpec& spec, const PowerBudget& budget,
                    const opt::SolverOptions& opts) {
  const auto b = PowerBudget::make(budget.rho, budget.beta);
  const int nr = spec.nr(), nt = spec.nt();
  const double rho = b.rho;
  std::vector<double> r0(static_cast<std::size_t>(nr * nt)), def(r0.size());
  for (int r = 0; r < nr; ++r) {
    for (int t = 0; t < nt; ++t) {
      const auto k = static_cast<std::size_t>(r * nt + t);
      r0[k] = spec.entry(r, t).r0();
      def[k] = spectral_deficit(spec.entry(r, t), rho);
    }
  }
  const opt::Oracle f = [&](std::span<const double> a, std::span<double> grad) {
    double val = 0.0;
    std::fill(grad.begin(), grad.end(), 0.0);
    for (int r = 0; r < nr; ++r) {
      double m = 0.0;
      for (int t = 0; t < nt; ++t) {
        const auto k = static_cast<std::size_t>(r * nt + t);
        m += a[static_cast<std::size_t>(t)] * r0[k];
        val += a[static_cast<std::size_t>(t)] * def[k];
      }
      const double x = rho * m;
      val -= x_minus_log1p(x);
      const double shrink = x / (1.0 + x);
      for (int t = 0; t < nt; ++t) {
        const auto k = static_cast<std::size_t>(r * nt + t);
        grad[static_cast<std::size_t>(t)] += def[k] - rho * r0[k] * shrink;
      }
    }
    return val;
  };
  const double cap = 1.0 / b.beta;
  const auto sol = opt::maximize_concave(
      f, [cap](std::span<double> x) { opt::project_capped_simplex(x, cap); },
      opt::capped_simplex_starts(nt, cap), opts);
  return {sol.value, sol.x};
}

std::vector<double> default_noise_split(int nt) {
  return std::vector<double>(static_cast<std::size_t>(nt), 1.0 / nt);
}

void check_noise_split(const std::vector<double>& d, int nt) {
  if (static_cast<int>(d.size()) != nt) throw SpecError("noise split d must have nt entries");
  double sum = 0.0;
  for (double v : d) {
    if (!(std::isfinite(v) && v >= 0.0)) throw SpecError("noise split entries must be >= 0");
    sum += v;
  }
  if (sum > 1.0 + 1e-12) throw SpecError("noise split entries must sum to at most 1");
}

IndividualBound u_mimo_individual(const MimoFadingSpec& spec, const PowerBudget& budget,
                                  const std::optional<std::vector<double>>& d_in,
                                  const opt::SolverOptions& opts) {
  const auto b = PowerBudget::make(budget.rho, budget.beta);
  const int nr = spec.nr(), nt = spec.nt();
  const opt::PatternPolytope poly(nt, 1.0 / b.beta);
  const std::vector<double> d = d_in.value_or(default_noise_split(nt));
  check_noise_split(d, nt);
  const double rho = b.rho;
  const std::size_t np = poly.size();

  // Per-pattern data: s_rb, and e_rb = rho s_rb - log(1 + rho v_rb) in stable form.
  std::vector<double> s(static_cast<std::size_t>(nr) * np, 0.0), e(s.size(), 0.0);
  for (int r = 0; r < nr; ++r) {
    std::vector<double> r0(static_cast<std::size_t>(nt)), gain(r0.size()), resid(r0.size());
    for (int t = 0; t < nt; ++t) {
      const auto& law = spec.entry(r, t);
      const auto tt = static_cast<std::size_t>(t);
      const double eff = d[tt] > 0.0 ? rho / d[tt] : std::numeric_limits<double>::infinity();
      r0[tt] = law.r0();
      gain[tt] = prediction_gain(law, eff);
      resid[tt] = std::max(r0[tt] - gain[tt], 0.0);
    }
    for (std::size_t pb = 0; pb < np; ++pb) {
      double sv = 0.0, gv = 0.0, vv = 0.0;
      for (int t = 0; t < nt; ++t) {
        if (!((pb >> t) & 1U)) continue;
        const auto tt = static_cast<std::size_t>(t);
        sv += r0[tt];
        gv += gain[tt];
        vv += resid[tt];
      }
      const std::size_t k = static_cast<std::size_t>(r) * np + pb;
      s[k] = sv;
      e[k] = rho * gv + x_minus_log1p(rho * vv);
    }
  }

  const opt::Oracle f = [&](std::span<const double> p, std::span<double> grad) {
    double val = 0.0;
    std::fill(grad.begin(), grad.end(), 0.0);
    for (int r = 0; r < nr; ++r) {
      const std::size_t base = static_cast<std::size_t>(r) * np;
      double m = 0.0;
      for (std::size_t pb = 0; pb < np; ++pb) {
        m += p[pb] * s[base + pb];
        val += p[pb] * e[base + pb];
      }
      const double x = rho * m;
      val -= x_minus_log1p(x);
      const double shrink = x / (1.0 + x);
      for (std::size_t pb = 0; pb < np; ++pb) grad[pb] += e[base + pb] - rho * s[base + pb] * shrink;
    }
    return val;
  };
  const auto sol = opt::maximize_concave(
      f, [&poly](std::span<double> x) { poly.project(x); }, poly.starts(), opts);
  return {sol.value, sol.x, d};
}

}  // namespace noncoh
