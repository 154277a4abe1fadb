#include "noncoh/channel_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "noncoh/errors.hpp"
#include "noncoh/kernels.hpp"

namespace noncoh {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr std::size_t kMaxDefaultLag = 100000;

// Relative threshold below which a negative density sample is rounding noise.
constexpr double kNegativeTolerance = 1e-12;

double wrap_to_pi(double w) {
  if (w >= -kPi && w <= kPi) return w;
  double r = std::remainder(w, kTwoPi);
  if (r < -kPi) r += kTwoPi;
  return r;
}

double sinc(double x) { return x == 0.0 ? 1.0 : std::sin(x) / x; }

void require(bool ok, const std::string& msg) {
  if (!ok) throw SpecError(msg);
}

}  // namespace

ScalarFadingSpec ScalarFadingSpec::memoryless(double scale) {
  require(std::isfinite(scale) && scale >= 0.0, "memoryless: scale must be >= 0");
  ScalarFadingSpec s;
  s.repr_ = Repr::parametric;
  s.family_ = Family::memoryless;
  s.scale_ = scale;
  s.finish();
  return s;
}

ScalarFadingSpec ScalarFadingSpec::gauss_markov(double a, double scale) {
  require(std::isfinite(a) && a >= 0.0 && a < 1.0, "gauss_markov: a must lie in [0, 1)");
  require(std::isfinite(scale) && scale >= 0.0, "gauss_markov: scale must be >= 0");
  ScalarFadingSpec s;
  s.repr_ = Repr::parametric;
  s.family_ = Family::gauss_markov;
  s.param_ = a;
  s.scale_ = scale;
  s.finish();
  return s;
}

ScalarFadingSpec ScalarFadingSpec::bandlimited_flat(double omega0, double scale) {
  require(std::isfinite(omega0) && omega0 > 0.0 && omega0 <= kPi,
          "bandlimited_flat: omega0 must lie in (0, pi]");
  require(std::isfinite(scale) && scale >= 0.0, "bandlimited_flat: scale must be >= 0");
  ScalarFadingSpec s;
  s.repr_ = Repr::parametric;
  s.family_ = Family::bandlimited_flat;
  s.param_ = omega0;
  s.scale_ = scale;
  s.finish();
  return s;
}

ScalarFadingSpec ScalarFadingSpec::from_sequence(std::vector<std::complex<double>> r) {
  require(!r.empty(), "sequence: need at least R(0)");
  for (const auto& z : r) {
    require(std::isfinite(z.real()) && std::isfinite(z.imag()), "sequence: non-finite entry");
  }
  require(std::abs(r[0].imag()) <= 1e-12 * std::max(1.0, std::abs(r[0].real())),
          "sequence: R(0) must be real");
  require(r[0].real() >= 0.0, "sequence: R(0) must be >= 0");
  r[0] = {r[0].real(), 0.0};
  ScalarFadingSpec s;
  s.repr_ = Repr::sequence;
  s.seq_ = std::move(r);
  s.finish();

  // A truncated sequence is a valid autocorrelation only if its trig sum is >= 0.
  const std::size_t grid = std::max<std::size_t>(1024, 8 * s.seq_.size());
  std::vector<double> w(grid), vals(grid);
  for (std::size_t j = 0; j < grid; ++j) w[j] = -kPi + kTwoPi * static_cast<double>(j) / grid;
  kernels::trig_series(s.seq_, w, vals);
  const double floor = -kNegativeTolerance * std::max(s.r0_, 1e-300);
  const double lowest = *std::min_element(vals.begin(), vals.end());
  if (lowest < floor) {
    std::ostringstream os;
    os << "sequence: not a valid autocorrelation, spectral density reaches " << lowest;
    throw SpecError(os.str());
  }
  return s;
}

ScalarFadingSpec ScalarFadingSpec::from_psd_table(std::vector<double> omega, std::vector<double> v) {
  require(omega.size() == v.size(), "psd_table: omega and s must have equal length");
  require(omega.size() >= 3, "psd_table: need at least 3 samples");
  const std::size_t n = omega.size();
  const double h = kTwoPi / static_cast<double>(n - 1);
  for (std::size_t j = 0; j < n; ++j) {
    const double expect = -kPi + h * static_cast<double>(j);
    require(std::abs(omega[j] - expect) <= 1e-9, "psd_table: omega must be uniform on [-pi, pi]");
    require(std::isfinite(v[j]) && v[j] >= 0.0, "psd_table: s must be finite and >= 0");
  }
  const double top = *std::max_element(v.begin(), v.end());
  require(std::abs(v.front() - v.back()) <= 1e-9 * std::max(top, 1e-300),
          "psd_table: s(-pi) and s(pi) must agree");
  for (std::size_t j = 0; j < n; ++j) omega[j] = -kPi + h * static_cast<double>(j);
  omega.back() = kPi;
  v.back() = v.front();
  ScalarFadingSpec s;
  s.repr_ = Repr::psd_table;
  s.omega_ = std::move(omega);
  s.table_ = std::move(v);
  s.finish();
  return s;
}

void ScalarFadingSpec::finish() {
  switch (repr_) {
    case Repr::parametric:
      r0_ = scale_;
      switch (family_) {
        case Family::memoryless: lambda_ = scale_ * scale_; break;
        case Family::gauss_markov: {
          const double a2 = param_ * param_;
          lambda_ = scale_ * scale_ * (1.0 + a2) / (1.0 - a2);
          break;
        }
        case Family::bandlimited_flat: lambda_ = scale_ * scale_ * kPi / param_; break;
      }
      break;
    case Repr::sequence: {
      r0_ = seq_[0].real();
      lambda_ = r0_ * r0_ + 2.0 * kernels::sum_abs2(std::span(seq_).subspan(1));
      break;
    }
    case Repr::psd_table: {
      const std::size_t m = table_.size() - 1;
      double mean = 0.0, energy = 0.0;
      for (std::size_t j = 0; j < m; ++j) {
        const double a = table_[j], b = table_[j + 1];
        mean += a;
        // Exact integral of the squared linear interpolant over one segment.
        energy += (a * a + a * b + b * b) / 3.0;
      }
      r0_ = mean / static_cast<double>(m);
      lambda_ = energy / static_cast<double>(m);
      break;
    }
  }
  if (!std::isfinite(lambda_)) throw SpecError("fading law has infinite lambda");
}

std::complex<double> ScalarFadingSpec::autocorr(long lag) const {
  if (lag < 0) return std::conj(autocorr(-lag));
  const double v = static_cast<double>(lag);
  switch (repr_) {
    case Repr::parametric:
      switch (family_) {
        case Family::memoryless: return lag == 0 ? scale_ : 0.0;
        case Family::gauss_markov: return scale_ * std::pow(param_, v);
        case Family::bandlimited_flat: return scale_ * sinc(v * param_);
      }
      break;
    case Repr::sequence:
      return static_cast<std::size_t>(lag) < seq_.size() ? seq_[static_cast<std::size_t>(lag)]
                                                         : std::complex<double>{};
    case Repr::psd_table: {
      const std::size_t m = table_.size() - 1;
      const double h = kTwoPi / static_cast<double>(m);
      std::complex<double> acc{};
      for (std::size_t j = 0; j < m; ++j) acc += table_[j] * std::polar(1.0, v * omega_[j]);
      const double k = sinc(0.5 * v * h);
      return acc * (k * k / static_cast<double>(m));
    }
  }
  return {};
}

double ScalarFadingSpec::psd(double omega) const {
  double out = 0.0;
  psd(std::span(&omega, 1), std::span(&out, 1));
  return out;
}

void ScalarFadingSpec::psd(std::span<const double> omega, std::span<double> out) const {
  switch (repr_) {
    case Repr::parametric:
      for (std::size_t i = 0; i < omega.size(); ++i) {
        const double w = wrap_to_pi(omega[i]);
        switch (family_) {
          case Family::memoryless: out[i] = scale_; break;
          case Family::gauss_markov: {
            const double a = param_;
            out[i] = scale_ * (1.0 - a * a) / (1.0 - 2.0 * a * std::cos(w) + a * a);
            break;
          }
          case Family::bandlimited_flat:
            out[i] = std::abs(w) <= param_ ? scale_ * kPi / param_ : 0.0;
            break;
        }
      }
      return;
    case Repr::sequence: {
      std::vector<double> wrapped(omega.size());
      for (std::size_t i = 0; i < omega.size(); ++i) wrapped[i] = wrap_to_pi(omega[i]);
      kernels::trig_series(seq_, wrapped, out.first(omega.size()));
      for (std::size_t i = 0; i < omega.size(); ++i) out[i] = std::max(out[i], 0.0);
      return;
    }
    case Repr::psd_table: {
      const std::size_t m = table_.size() - 1;
      const double h = kTwoPi / static_cast<double>(m);
      for (std::size_t i = 0; i < omega.size(); ++i) {
        const double w = wrap_to_pi(omega[i]);
        const double pos = (w + kPi) / h;
        std::size_t j = static_cast<std::size_t>(std::floor(pos));
        if (j >= m) j = m - 1;
        const double f = pos - static_cast<double>(j);
        out[i] = (1.0 - f) * table_[j] + f * table_[j + 1];
      }
      return;
    }
  }
}

std::optional<double> ScalarFadingSpec::abs_sum() const {
  switch (repr_) {
    case Repr::parametric:
      switch (family_) {
        case Family::memoryless: return scale_;
        case Family::gauss_markov: return scale_ * (1.0 + param_) / (1.0 - param_);
        case Family::bandlimited_flat:
          if (param_ == kPi) return scale_;
          return std::nullopt;  // sinc tails are not absolutely summable
      }
      break;
    case Repr::sequence: {
      double s = r0_;
      for (std::size_t v = 1; v < seq_.size(); ++v) s += 2.0 * std::abs(seq_[v]);
      return s;
    }
    case Repr::psd_table: return std::nullopt;
  }
  return std::nullopt;
}

std::vector<double> ScalarFadingSpec::breakpoints() const {
  std::vector<double> cuts;
  switch (repr_) {
    case Repr::parametric:
      if (family_ == Family::bandlimited_flat) {
        cuts = {-param_, param_};
      } else if (family_ == Family::gauss_markov) {
        // The density peaks at 0 with width ~ (1 - a); grade panels toward it.
        cuts.push_back(0.0);
        for (double w = 0.25 * (1.0 - param_); w < kPi; w *= 2.0) {
          cuts.push_back(w);
          cuts.push_back(-w);
        }
      }
      break;
    case Repr::sequence: cuts.push_back(0.0); break;
    case Repr::psd_table:
      cuts.assign(omega_.begin() + 1, omega_.end() - 1);
      break;
  }
  std::sort(cuts.begin(), cuts.end());
  return cuts;
}

ScalarFadingSpec ScalarFadingSpec::scaled(double c) const {
  require(std::isfinite(c) && c >= 0.0, "scaled: factor must be >= 0");
  ScalarFadingSpec s = *this;
  switch (repr_) {
    case Repr::parametric: s.scale_ = scale_ * c; break;
    case Repr::sequence:
      for (auto& z : s.seq_) z *= c;
      break;
    case Repr::psd_table:
      for (auto& x : s.table_) x *= c;
      break;
  }
  s.finish();
  return s;
}

std::string ScalarFadingSpec::describe() const {
  std::ostringstream os;
  switch (repr_) {
    case Repr::parametric:
      switch (family_) {
        case Family::memoryless: os << "memoryless(scale=" << scale_ << ")"; break;
        case Family::gauss_markov: os << "gauss_markov(a=" << param_ << ", scale=" << scale_ << ")"; break;
        case Family::bandlimited_flat:
          os << "bandlimited_flat(omega0=" << param_ << ", scale=" << scale_ << ")";
          break;
      }
      break;
    case Repr::sequence: os << "sequence(lags=" << seq_.size() - 1 << ")"; break;
    case Repr::psd_table: os << "psd_table(points=" << table_.size() << ")"; break;
  }
  return os.str();
}

ScalarFadingSpec make_parametric(Family family, double param, double scale) {
  switch (family) {
    case Family::memoryless: return ScalarFadingSpec::memoryless(scale);
    case Family::gauss_markov: return ScalarFadingSpec::gauss_markov(param, scale);
    case Family::bandlimited_flat: return ScalarFadingSpec::bandlimited_flat(param, scale);
  }
  throw SpecError("make_parametric: unknown family");
}

double lambda_of(const ScalarFadingSpec& spec) { return spec.lambda(); }

bool is_ephemeral(const ScalarFadingSpec& spec) {
  const double r0 = spec.r0();
  return spec.lambda() < 2.0 * r0 * r0;
}

ScalarFadingSpec autocorr_to_psd(const ScalarFadingSpec& spec, std::optional<std::size_t> points) {
  std::size_t n = points.value_or(0);
  if (!points) {
    n = 1024;
    if (spec.repr() == ScalarFadingSpec::Repr::sequence) {
      n = std::max<std::size_t>(n, 2 * spec.sequence_length() + 2);
    }
  }
  if (n < 3) throw DomainError("autocorr_to_psd: need at least 3 grid points");
  const std::size_t m = n - 1;
  std::vector<double> w(n), s(n);
  for (std::size_t j = 0; j < n; ++j) w[j] = -kPi + kTwoPi * static_cast<double>(j) / m;
  w.back() = kPi;
  spec.psd(w, s);
  s.back() = s.front();
  return ScalarFadingSpec::from_psd_table(std::move(w), std::move(s));
}

ScalarFadingSpec psd_to_autocorr(const ScalarFadingSpec& spec, std::optional<std::size_t> max_lag) {
  using Repr = ScalarFadingSpec::Repr;
  const double r0 = spec.r0();
  std::size_t limit = kMaxDefaultLag;
  if (spec.repr() == Repr::psd_table) {
    const std::size_t m = spec.table_values().size() - 1;
    limit = (m - 1) / 2;
    if (max_lag && *max_lag > limit) {
      std::ostringstream os;
      os << "psd_to_autocorr: a grid of " << m << " distinct frequencies resolves lags up to "
         << limit << ", requested " << *max_lag;
      throw ResolutionError(os.str());
    }
  } else if (spec.repr() == Repr::sequence) {
    limit = std::min(limit, spec.sequence_length());
  }

  // Trapezoidal DFT for tables so the pair inverts exactly on the grid.
  const auto lag_value = [&](std::size_t v) -> std::complex<double> {
    if (spec.repr() != Repr::psd_table) return spec.autocorr(static_cast<long>(v));
    const auto w = spec.table_omega();
    const auto s = spec.table_values();
    const std::size_t m = s.size() - 1;
    std::complex<double> acc{};
    for (std::size_t j = 0; j < m; ++j) acc += s[j] * std::polar(1.0, static_cast<double>(v) * w[j]);
    return acc / static_cast<double>(m);
  };

  std::size_t top = 0;
  if (max_lag) {
    top = *max_lag;
  } else {
    top = limit;
    for (std::size_t v = 1; v <= limit; ++v) {
      if (std::abs(lag_value(v)) < 1e-12 * r0) {
        top = v;
        break;
      }
    }
  }
  std::vector<std::complex<double>> r(top + 1);
  for (std::size_t v = 0; v <= top; ++v) r[v] = lag_value(v);
  r[0] = {r[0].real(), 0.0};
  return ScalarFadingSpec::from_sequence(std::move(r));
}

std::vector<double> spectral_averages(const ScalarFadingSpec& spec,
                                      std::span<const std::function<double(double)>> g,
                                      const quad::DoublingOptions& opts) {
  const std::size_t count = g.size();
  if (count == 0) return {};
  std::vector<double> dens;
  const auto eval = [&](std::span<const double> x, std::span<double> out) {
    dens.resize(x.size());
    spec.psd(x, dens);
    for (std::size_t i = 0; i < x.size(); ++i) {
      for (std::size_t k = 0; k < count; ++k) out[i * count + k] = g[k](dens[i]);
    }
  };
  quad::DoublingOptions o = opts;
  if (spec.repr() == ScalarFadingSpec::Repr::psd_table) o.initial_panels = 1;
  const std::vector<double> cuts = spec.breakpoints();
  const auto est = quad::composite_doubling(eval, count, -kPi, kPi, cuts, o);
  std::vector<double> out(count);
  for (std::size_t k = 0; k < count; ++k) {
    if (!est[k].converged) {
      throw NumericError("spectral quadrature did not converge for " + spec.describe(),
                         est[k].value / kTwoPi);
    }
    out[k] = est[k].value / kTwoPi;
  }
  return out;
}

MimoFadingSpec MimoFadingSpec::from_entries(std::vector<std::vector<ScalarFadingSpec>> entries) {
  require(!entries.empty() && !entries[0].empty(), "mimo: need at least one entry");
  for (const auto& row : entries) {
    require(row.size() == entries[0].size(), "mimo: ragged entries");
  }
  MimoFadingSpec m;
  m.entries_ = std::move(entries);
  return m;
}

MimoFadingSpec MimoFadingSpec::transmit_separable(std::vector<double> alpha,
                                                  std::vector<ScalarFadingSpec> base_rows) {
  require(!alpha.empty() && !base_rows.empty(), "mimo: empty factorization");
  for (double a : alpha) require(std::isfinite(a) && a >= 0.0, "mimo: alpha must be >= 0");
  std::vector<std::vector<ScalarFadingSpec>> entries;
  entries.reserve(base_rows.size());
  for (const auto& base : base_rows) {
    std::vector<ScalarFadingSpec> row;
    row.reserve(alpha.size());
    for (double a : alpha) row.push_back(base.scaled(a));
    entries.push_back(std::move(row));
  }
  MimoFadingSpec m = from_entries(std::move(entries));
  m.separable_ = Separable{std::move(alpha), std::move(base_rows)};
  return m;
}

MimoFadingSpec MimoFadingSpec::with_factorization(std::vector<std::vector<ScalarFadingSpec>> entries,
                                                  Separable f) {
  MimoFadingSpec m = from_entries(std::move(entries));
  require(static_cast<int>(f.alpha.size()) == m.nt() && static_cast<int>(f.base.size()) == m.nr(),
          "mimo: factorization shape does not match entries");
  for (int r = 0; r < m.nr(); ++r) {
    for (int t = 0; t < m.nt(); ++t) {
      for (long k = 0; k <= 16; ++k) {
        const auto want = f.alpha[t] * f.base[r].autocorr(k);
        const auto got = m.entry(r, t).autocorr(k);
        require(std::abs(want - got) <= 1e-10 * std::max(1.0, std::abs(want)),
                "mimo: entries are not transmit separable with the given alpha");
      }
    }
  }
  m.separable_ = std::move(f);
  return m;
}

DelaySpreadSpec DelaySpreadSpec::from_taps(std::vector<ScalarFadingSpec> taps) {
  require(!taps.empty(), "delay_spread: need at least one tap");
  DelaySpreadSpec d;
  d.taps_ = std::move(taps);
  return d;
}

DelaySpreadSpec DelaySpreadSpec::delay_separable(std::vector<double> alpha, ScalarFadingSpec base) {
  require(!alpha.empty(), "delay_spread: need at least one tap");
  std::vector<ScalarFadingSpec> taps;
  taps.reserve(alpha.size());
  for (double a : alpha) {
    require(std::isfinite(a) && a >= 0.0, "delay_spread: alpha must be >= 0");
    taps.push_back(base.scaled(a));
  }
  DelaySpreadSpec d = from_taps(std::move(taps));
  d.separable_ = Separable{std::move(alpha), std::move(base)};
  return d;
}

void check_beta(double beta) {
  if (!(std::isfinite(beta) && beta >= 1.0)) throw SpecError("beta must be >= 1");
}

PowerBudget PowerBudget::make(double rho, double beta) {
  if (!(std::isfinite(rho) && rho > 0.0)) throw SpecError("rho must be > 0");
  check_beta(beta);
  return {rho, beta};
}

}  // namespace noncoh
