#include "noncoh/rate_oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <sstream>

#include "noncoh/concave_solver.hpp"
#include "noncoh/errors.hpp"
#include "noncoh/kernels.hpp"
#include "noncoh/prediction.hpp"
#include "noncoh/quadrature.hpp"

namespace noncoh {
namespace {

using cplx = std::complex<double>;

int mod(int x, int m) {
  const int r = x % m;
  return r < 0 ? r + m : r;
}

// Exact second and fourth moments of the phase sequence.
class PhaseMoments {
 public:
  explicit PhaseMoments(const InputLaw& law) : kind_(law.kind), m_(law.m) {}

  // E[Phi_u conj(Phi_v)]
  double second(int u, int v) const {
    if (fsk()) return mod(u - v, m_) == 0 ? 1.0 : 0.0;
    return u == v ? 1.0 : 0.0;
  }

  // E[Phi_u conj(Phi_v) conj(Phi_u2) Phi_v2]
  double fourth(int u, int v, int u2, int v2) const {
    if (fsk()) return mod(u - v - u2 + v2, m_) == 0 ? 1.0 : 0.0;
    const std::array<std::pair<int, int>, 4> terms{{{u, 1}, {v, -1}, {u2, -1}, {v2, 1}}};
    for (const auto& [time, _] : terms) {
      int net = 0;
      for (const auto& [t2, e] : terms) {
        if (t2 == time) net += e;
      }
      const bool vanishes = kind_ == InputLaw::Kind::onoff_psk ? mod(net, m_) == 0 : net == 0;
      if (!vanishes) return 0.0;
    }
    return 1.0;
  }

 private:
  bool fsk() const {
    return kind_ == InputLaw::Kind::onoff_fsk || kind_ == InputLaw::Kind::storm_common_signal;
  }

  InputLaw::Kind kind_;
  int m_;
};

void check_law(const InputLaw& law) {
  if (law.n < 1) throw DomainError("block length n must be >= 1");
  if (law.n > kMaxBlockLength) {
    std::ostringstream os;
    os << "block length " << law.n << " exceeds the supported " << kMaxBlockLength;
    throw CapacityError(os.str());
  }
  if (!(law.a >= 0.0 && law.a <= 1.0)) throw DomainError("on-probability a must lie in [0, 1]");
  const bool fsk = law.kind == InputLaw::Kind::onoff_fsk ||
                   law.kind == InputLaw::Kind::storm_common_signal;
  if ((fsk || law.kind == InputLaw::Kind::onoff_psk) && law.m < 2) {
    throw DomainError("constellation size m must be > 1");
  }
  if (fsk && law.m < law.n) {
    throw DomainError("FSK phases e^{ik Theta} are correlated across the block unless m >= n");
  }
}

struct Path {
  int branch;
  int delay;
  std::vector<cplx> r;  // R(0..n-1)
};

std::vector<cplx> lags(const ScalarFadingSpec& spec, int n) {
  std::vector<cplx> r(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) r[static_cast<std::size_t>(v)] = spec.autocorr(v);
  return r;
}

cplx lag_at(const std::vector<cplx>& r, int d) {
  return d >= 0 ? r[static_cast<std::size_t>(d)] : std::conj(r[static_cast<std::size_t>(-d)]);
}

double cesaro_lambda(std::span<const cplx> r, int n) {
  return std::norm(r[0]) + 2.0 * kernels::cesaro_abs2(r, static_cast<std::size_t>(n));
}

SecondOrderResult evaluate(const std::vector<Path>& paths, int branches, const InputLaw& law) {
  check_law(law);
  const int n = law.n;
  const PhaseMoments ph(law);
  const auto in_block = [n](int k) { return k >= 0 && k < n; };
  double fourth_sum = 0.0, second_sum = 0.0, lam = 0.0;
  for (int br = 0; br < branches; ++br) {
    std::vector<const Path*> mine;
    std::vector<cplx> combined(static_cast<std::size_t>(n), 0.0);
    for (const auto& p : paths) {
      if (p.branch != br) continue;
      mine.push_back(&p);
      for (int v = 0; v < n; ++v) combined[static_cast<std::size_t>(v)] += p.r[static_cast<std::size_t>(v)];
    }
    lam += cesaro_lambda(combined, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        cplx mean{};
        for (const Path* p : mine) {
          const int u = i - p->delay, v = j - p->delay;
          if (!in_block(u) || !in_block(v)) continue;
          const cplx rp = lag_at(p->r, i - j);
          mean += rp * ph.second(u, v);
          for (const Path* q : mine) {
            const int u2 = i - q->delay, v2 = j - q->delay;
            if (!in_block(u2) || !in_block(v2)) continue;
            fourth_sum += (rp * std::conj(lag_at(q->r, i - j))).real() * ph.fourth(u, v, u2, v2);
          }
        }
        second_sum += std::norm(mean);
      }
    }
  }
  // U^4 = U^2 = U, so the fourth moment carries a and the mean carries a^2.
  const double a = law.a;
  return {(a * fourth_sum - a * a * second_sum) / (2.0 * n), lam};
}

}  // namespace

std::string to_string(InputLaw::Kind kind) {
  switch (kind) {
    case InputLaw::Kind::onoff_fsk: return "onoff_fsk";
    case InputLaw::Kind::onoff_psk: return "onoff_psk";
    case InputLaw::Kind::onoff_uniform_phase: return "onoff_uniform_phase";
    case InputLaw::Kind::storm_common_signal: return "storm_common_signal";
  }
  return "unknown";
}

SecondOrderResult second_order_mi(const ScalarFadingSpec& spec, const InputLaw& law) {
  check_law(law);
  return evaluate({Path{0, 0, lags(spec, law.n)}}, 1, law);
}

SecondOrderResult second_order_mi(const MimoFadingSpec& spec, const InputLaw& law) {
  check_law(law);
  std::vector<Path> paths;
  for (int r = 0; r < spec.nr(); ++r) {
    for (int t = 0; t < spec.nt(); ++t) paths.push_back({r, 0, lags(spec.entry(r, t), law.n)});
  }
  return evaluate(paths, spec.nr(), law);
}

SecondOrderResult second_order_mi(const DelaySpreadSpec& spec, const InputLaw& law) {
  check_law(law);
  std::vector<Path> paths;
  for (int t = 0; t < spec.taps(); ++t) paths.push_back({0, t, lags(spec.tap(t), law.n)});
  return evaluate(paths, 1, law);
}

double lambda_n(const ScalarFadingSpec& spec, int n) {
  if (n < 1) throw DomainError("lambda_n needs n >= 1");
  return cesaro_lambda(lags(spec, n), n);
}

double richardson_limit(std::span<const int> ns, std::span<const double> values) {
  if (ns.empty() || ns.size() != values.size()) throw DomainError("richardson_limit: size mismatch");
  // Neville interpolation in h = 1/n, evaluated at h = 0.
  std::vector<double> h(ns.size()), p(values.begin(), values.end());
  for (std::size_t k = 0; k < ns.size(); ++k) h[k] = 1.0 / ns[k];
  for (std::size_t level = 1; level < p.size(); ++level) {
    for (std::size_t k = p.size() - 1; k >= level; --k) {
      p[k] = (h[k - level] * p[k] - h[k] * p[k - 1]) / (h[k - level] - h[k]);
    }
  }
  return p.back();
}

double mi_qpsk(double s, int order) {
  if (!(s >= 0.0)) throw DomainError("mi_qpsk needs s >= 0");
  const double log4 = std::log(4.0);
  if (s == 0.0) return 0.0;
  if (std::isinf(s)) return log4;
  const auto& gh = quad::gauss_hermite(order);
  const double rs = std::sqrt(s);
  // Differences x0 - xj for the other three points, x0 = (1 + i)/sqrt(2).
  const double r2 = std::numbers::sqrt2;
  const std::array<cplx, 3> d{cplx{rs * r2, 0.0}, cplx{0.0, rs * r2}, cplx{rs * r2, rs * r2}};
  std::array<double, 3> dd{};
  for (int j = 0; j < 3; ++j) dd[static_cast<std::size_t>(j)] = std::norm(d[static_cast<std::size_t>(j)]);
  // Product weights below this fraction of the largest add nothing at double precision.
  const double wmax = *std::max_element(gh.weights.begin(), gh.weights.end());
  const double floor = 1e-25 * wmax * wmax;
  double acc = 0.0;
  for (std::size_t iu = 0; iu < gh.nodes.size(); ++iu) {
    const double u = gh.nodes[iu];
    if (gh.weights[iu] * wmax < floor) continue;
    double row = 0.0;
    for (std::size_t iv = 0; iv < gh.nodes.size(); ++iv) {
      if (gh.weights[iu] * gh.weights[iv] < floor) continue;
      const double v = gh.nodes[iv];
      std::array<double, 3> e{};
      double top = 0.0;
      for (std::size_t j = 0; j < 3; ++j) {
        // |N|^2 - |d + N|^2 = -|d|^2 - 2 Re(conj(d) N)
        e[j] = -dd[j] - 2.0 * (d[j].real() * u + d[j].imag() * v);
        top = std::max(top, e[j]);
      }
      double sum = std::exp(-top);
      for (double x : e) sum += std::exp(x - top);
      row += gh.weights[iv] * (top + std::log(sum));
    }
    acc += gh.weights[iu] * row;
  }
  return std::clamp(log4 - acc / std::numbers::pi, 0.0, log4);
}

namespace {

// log cosh x without cancellation near 0.
double log_cosh(double x) {
  const double a = std::abs(x);
  if (a < 1.0) {
    const double sh = std::sinh(0.5 * a);
    return std::log1p(2.0 * sh * sh);
  }
  return a - std::numbers::ln2 + std::log1p(std::exp(-2.0 * a));
}

// Real BPSK y = sqrt(s) x + N(0, 1), x = +-1.
double bpsk_mi(double s) {
  const double rs = std::sqrt(s);
  const double c = 1.0 / std::sqrt(2.0 * std::numbers::pi);
  std::function<double(double)> f;
  if (s < 1.0) {
    // I = s - E log cosh(s + sqrt(s) Z)
    f = [&](double z) { return c * std::exp(-0.5 * z * z) * log_cosh(s + rs * z); };
  } else {
    // I = log 2 - E log(1 + exp(-2(s + sqrt(s) Z)))
    f = [&](double z) {
      const double t = -2.0 * (s + rs * z);
      const double sp = t > 0.0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t));
      return c * std::exp(-0.5 * z * z) * sp;
    };
  }
  const auto est = quad::adaptive_gauss_kronrod(f, -38.0, 38.0, 1e-300, 1e-13);
  if (!est.converged) throw NumericError("BPSK quadrature did not converge", est.value);
  return s < 1.0 ? s - est.value : std::numbers::ln2 - est.value;
}

}  // namespace

double mi_qpsk(double s) {
  if (!(s >= 0.0)) throw DomainError("mi_qpsk needs s >= 0");
  if (s == 0.0) return 0.0;
  const double log4 = std::log(4.0);
  if (std::isinf(s)) return log4;
  // The posterior factors over the real and imaginary parts.
  return std::clamp(2.0 * bpsk_mi(s), 0.0, log4);
}

double qpsk_conditional_mi_L(const ScalarFadingSpec& spec, double rho) {
  if (std::abs(spec.r0() - 1.0) > 1e-12) throw SpecError("the QPSK rate needs a unit-variance law");
  if (!(rho > 0.0) || !std::isfinite(rho)) throw DomainError("rho must be finite and > 0");
  const double mean = prediction_gain(spec, rho);  // E|h|^2 = 1 - sigma^2
  if (!(mean > 0.0)) return 0.0;
  const double sigma2 = 1.0 - mean;
  const double scale = rho / (1.0 + rho * sigma2);

  // g = -mean log(1 - u) maps the exponential law onto u uniform on [0, 1).
  const auto est = quad::adaptive_gauss_kronrod(
      [&](double u) { return mi_qpsk(scale * (-mean * std::log1p(-u))); }, 0.0, 1.0, 1e-300, 1e-10);
  if (!est.converged) throw NumericError("QPSK rate quadrature did not converge", est.value);
  return est.value;
}

double capacity_lower_bound(const ScalarFadingSpec& spec, const PowerBudget& budget) {
  const auto b = PowerBudget::make(budget.rho, budget.beta);
  if (b.beta == 1.0) return qpsk_conditional_mi_L(spec, b.rho);
  // Search over t = log(gamma) in [0, log beta].
  const double top = std::log(b.beta);
  const std::array<double, 3> seeds{0.0, 0.5 * top, top};
  const auto best = opt::maximize_1d(
      [&](double t) {
        const double g = std::exp(t);
        return qpsk_conditional_mi_L(spec, g * b.rho / b.beta) / g;
      },
      0.0, top, seeds, 7, 1e-4);
  return best.value;
}

const char* to_string(RatePoint::Kind kind) noexcept {
  switch (kind) {
    case RatePoint::Kind::upper: return "upper";
    case RatePoint::Kind::lower: return "lower";
    case RatePoint::Kind::asymptote_scaled: return "asymptote-scaled";
  }
  return "unknown";
}

}  // namespace noncoh
