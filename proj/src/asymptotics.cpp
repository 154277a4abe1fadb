#include "noncoh/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "noncoh/errors.hpp"
#include "noncoh/prediction.hpp"
#include "noncoh/quadrature.hpp"

namespace noncoh {
namespace {

constexpr double kUnitTol = 1e-12;

void require_unit(const ScalarFadingSpec& spec, const char* op) {
  if (std::abs(spec.r0() - 1.0) > kUnitTol) {
    std::ostringstream os;
    os << op << " needs R(0) = 1 (got " << spec.r0()
       << "); use the separable MIMO or delay-spread asymptotes for scaled laws";
    throw SpecError(os.str());
  }
}

void require_lambda(double lambda) {
  if (!(std::isfinite(lambda) && lambda >= 1.0 - kUnitTol)) {
    throw DomainError("a unit-variance law has lambda >= 1");
  }
}

// max_{0 <= a <= cap} (a l - a^2 q), q >= 0.
struct ScalarMax {
  double a = 0.0;
  double value = 0.0;
  bool interior = false;
};

ScalarMax quad_max(double l, double q, double cap) {
  ScalarMax out;
  if (q <= 0.0) {
    out.a = l > 0.0 ? cap : 0.0;
  } else {
    const double stat = l / (2.0 * q);
    out.interior = stat < cap;
    out.a = std::clamp(stat, 0.0, cap);
  }
  out.value = out.a * l - out.a * out.a * q;
  return out;
}

const MimoFadingSpec::Separable& need_separable(const MimoFadingSpec& spec) {
  if (!spec.separable()) throw SpecError("MIMO law carries no transmit-separable factorization");
  return *spec.separable();
}

ScalarMax separable_rows(const MimoFadingSpec::Separable& f, double beta) {
  double l = 0.0, q = 0.0;
  for (const auto& base : f.base) {
    l += base.lambda();
    q += base.r0() * base.r0();
  }
  return quad_max(l, q, 1.0 / beta);
}

double alpha_sum(const std::vector<double>& alpha) {
  double s = 0.0;
  for (double a : alpha) s += a;
  return s;
}

Regime regime_of(const ScalarMax& m) {
  return m.interior ? Regime::ephemeral_branch : Regime::nonephemeral_branch;
}

// sum_{v >= 1} |sum_t R_t(v)|^2 = ((1/2pi) int (sum_t S_t)^2 - (sum_t R_t(0))^2) / 2.
double one_sided_energy(const std::vector<const ScalarFadingSpec*>& laws) {
  std::vector<double> cuts;
  bool table = false;
  double r0 = 0.0;
  for (const auto* l : laws) {
    const auto c = l->breakpoints();
    cuts.insert(cuts.end(), c.begin(), c.end());
    table = table || l->repr() == ScalarFadingSpec::Repr::psd_table;
    r0 += l->r0();
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  std::vector<double> buf, acc;
  const auto eval = [&](std::span<const double> x, std::span<double> out) {
    acc.assign(x.size(), 0.0);
    buf.resize(x.size());
    for (const auto* l : laws) {
      l->psd(x, buf);
      for (std::size_t i = 0; i < x.size(); ++i) acc[i] += buf[i];
    }
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = acc[i] * acc[i];
  };
  quad::DoublingOptions o;
  if (table) o.initial_panels = 1;
  const double pi = std::acos(-1.0);
  const auto est = quad::composite_doubling(eval, 1, -pi, pi, cuts, o);
  if (!est[0].converged) throw NumericError("spectral energy quadrature did not converge", est[0].value);
  return std::max(0.0, 0.5 * (est[0].value / (2.0 * pi) - r0 * r0));
}

}  // namespace

const char* to_string(Regime r) noexcept {
  return r == Regime::ephemeral_branch ? "ephemeral_branch" : "nonephemeral_branch";
}

AsymptoteResult c_siso(double lambda, double beta) {
  check_beta(beta);
  require_lambda(lambda);
  AsymptoteResult out;
  if (lambda < 2.0 / beta) {
    out.value = lambda * lambda / 8.0;
    out.regime = Regime::ephemeral_branch;
    out.argmax = {lambda / 2.0};
  } else {
    out.value = lambda / (2.0 * beta) - 1.0 / (2.0 * beta * beta);
    out.regime = Regime::nonephemeral_branch;
    out.argmax = {1.0 / beta};
  }
  return out;
}

AsymptoteResult c_siso(const ScalarFadingSpec& spec, double beta) {
  require_unit(spec, "c_siso");
  return c_siso(spec.lambda(), beta);
}

AsymptoteResult c_iid(double lambda, double beta) {
  check_beta(beta);
  require_lambda(lambda);
  AsymptoteResult out;
  if (lambda < 2.0 - beta / 2.0) {
    out.value = 1.0 / (8.0 * (2.0 - lambda));
    out.regime = Regime::ephemeral_branch;
    out.argmax = {std::min(1.0 / (2.0 * (2.0 - lambda)), 1.0 / beta)};
  } else {
    out.value = 1.0 / (2.0 * beta) + (lambda - 2.0) / (2.0 * beta * beta);
    out.regime = Regime::nonephemeral_branch;
    out.argmax = {1.0 / beta};
  }
  return out;
}

AsymptoteResult c_iid(const ScalarFadingSpec& spec, double beta) {
  require_unit(spec, "c_iid");
  if (spec.repr() == ScalarFadingSpec::Repr::psd_table) {
    throw DomainError("c_iid needs an absolutely summable law; tabulated densities are not checkable");
  }
  return c_iid(spec.lambda(), beta);
}

double c_psk(double lambda) {
  require_lambda(lambda);
  return (lambda - 1.0) / 2.0;
}

double c_psk(const ScalarFadingSpec& spec) {
  require_unit(spec, "c_psk");
  return c_psk(spec.lambda());
}

AsymptoteResult c_mimo_sum(const MimoFadingSpec& spec, double beta, const opt::SolverOptions& opts) {
  check_beta(beta);
  const int nr = spec.nr(), nt = spec.nt();
  std::vector<double> lam(static_cast<std::size_t>(nr * nt)), r0(lam.size());
  for (int r = 0; r < nr; ++r) {
    for (int t = 0; t < nt; ++t) {
      const auto k = static_cast<std::size_t>(r * nt + t);
      lam[k] = spec.entry(r, t).lambda();
      r0[k] = spec.entry(r, t).r0();
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
        val += 0.5 * a[static_cast<std::size_t>(t)] * lam[k];
      }
      val -= 0.5 * m * m;
      for (int t = 0; t < nt; ++t) {
        const auto k = static_cast<std::size_t>(r * nt + t);
        grad[static_cast<std::size_t>(t)] += 0.5 * lam[k] - m * r0[k];
      }
    }
    return val;
  };
  const double cap = 1.0 / beta;
  const auto sol = opt::maximize_concave(
      f, [cap](std::span<double> x) { opt::project_capped_simplex(x, cap); },
      opt::capped_simplex_starts(nt, cap), opts);
  double total = 0.0;
  for (double v : sol.x) total += v;
  return {sol.value,
          total < cap * (1.0 - 1e-9) ? Regime::ephemeral_branch : Regime::nonephemeral_branch,
          sol.x};
}

AsymptoteResult c_mimo_sum_separable(const MimoFadingSpec& spec, double beta) {
  check_beta(beta);
  const auto& f = need_separable(spec);
  const auto top = std::max_element(f.alpha.begin(), f.alpha.end());
  const double amax = *top;
  const ScalarMax m = separable_rows(f, beta);
  std::vector<double> a(f.alpha.size(), 0.0);
  a[static_cast<std::size_t>(top - f.alpha.begin())] = m.a;
  return {0.5 * amax * amax * m.value, regime_of(m), a};
}

AsymptoteResult c_mimo_individual_separable(const MimoFadingSpec& spec, double beta) {
  check_beta(beta);
  const auto& f = need_separable(spec);
  const double s = alpha_sum(f.alpha);
  const ScalarMax m = separable_rows(f, beta);
  return {0.5 * s * s * m.value, regime_of(m), {m.a}};
}

IndividualBox c_mimo_individual_box(const MimoFadingSpec& spec, double beta,
                                    const std::optional<std::vector<double>>& d_in, bool loose,
                                    const opt::SolverOptions& opts) {
  check_beta(beta);
  const int nr = spec.nr(), nt = spec.nt();
  const opt::PatternPolytope poly(nt, 1.0 / beta);
  const std::vector<double> d =
      d_in.value_or(std::vector<double>(static_cast<std::size_t>(nt), 1.0 / nt));
  if (static_cast<int>(d.size()) != nt) throw SpecError("noise split d must have nt entries");
  for (double v : d) {
    if (!(std::isfinite(v) && v > 0.0)) {
      throw DomainError("the second-order upper bound needs every d_t > 0");
    }
  }
  const std::size_t np = poly.size();
  std::vector<double> s(static_cast<std::size_t>(nr) * np, 0.0), g(s.size(), 0.0);
  for (int r = 0; r < nr; ++r) {
    for (std::size_t pb = 0; pb < np; ++pb) {
      double sv = 0.0, gv = 0.0;
      for (int t = 0; t < nt; ++t) {
        if (!((pb >> t) & 1U)) continue;
        const auto& law = spec.entry(r, t);
        sv += law.r0();
        gv += (law.lambda() - law.r0() * law.r0()) / d[static_cast<std::size_t>(t)];
      }
      const std::size_t k = static_cast<std::size_t>(r) * np + pb;
      s[k] = sv;
      g[k] = gv + sv * sv;
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
        val += 0.5 * p[pb] * g[base + pb];
      }
      val -= 0.5 * m * m;
      for (std::size_t pb = 0; pb < np; ++pb) grad[pb] += 0.5 * g[base + pb] - m * s[base + pb];
    }
    return val;
  };
  const auto sol = opt::maximize_concave(
      f, [&poly](std::span<double> x) { poly.project(x); }, poly.starts(), opts);
  IndividualBox out;
  out.upper = sol.value;
  out.p = sol.x;
  if (loose) {
    if (beta != 1.0) throw DomainError("the loose bracket holds for beta = 1 only");
    double up = 0.0, low = 0.0;
    for (int r = 0; r < nr; ++r) {
      std::vector<const ScalarFadingSpec*> row;
      for (int t = 0; t < nt; ++t) {
        const auto& law = spec.entry(r, t);
        if (is_ephemeral(law)) throw DomainError("the loose bracket needs nonephemeral entries");
        up += 0.5 * (law.lambda() - law.r0() * law.r0());
        row.push_back(&law);
      }
      low += one_sided_energy(row);
    }
    out.loose_upper = nt * up;
    out.loose_lower = low;
  }
  return out;
}

AsymptoteResult c_delay_spread_separable(const DelaySpreadSpec& spec, double beta) {
  check_beta(beta);
  if (!spec.separable()) throw SpecError("delay-spread law carries no delay-separable factorization");
  const auto& f = *spec.separable();
  const double s = alpha_sum(f.alpha);
  const ScalarMax m = quad_max(f.base.lambda(), f.base.r0() * f.base.r0(), 1.0 / beta);
  return {0.5 * s * s * m.value, regime_of(m), {m.a}};
}

double large_beta_limit(const ScalarFadingSpec& spec, double rho) {
  if (!(rho > 0.0) || !std::isfinite(rho)) throw DomainError("rho must be finite and > 0");
  return spectral_deficit(spec, rho) / rho;
}

}  // namespace noncoh
