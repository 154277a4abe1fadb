#pragma once

// Stationary proper-complex-normal fading laws and their second-order summaries.
//
// A fading law is described by its autocorrelation R(v) = E[H_{k+v} H_k^*] and the
// spectral density S(w) with R(v) = (1/2pi) int S(w) e^{ivw} dw. The quantity
// lambda = sum_v |R(v)|^2 = (1/2pi) int S(w)^2 dw drives every low-SNR result.

#include <complex>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "noncoh/quadrature.hpp"

namespace noncoh {

enum class Family { memoryless, gauss_markov, bandlimited_flat };

/// One scalar fading law. Immutable once constructed.
class ScalarFadingSpec {
 public:
  enum class Repr { parametric, sequence, psd_table };

  /// Parametric families. `scale` is R(0).
  static ScalarFadingSpec memoryless(double scale = 1.0);
  /// R(v) = scale a^|v|, 0 <= a < 1.
  static ScalarFadingSpec gauss_markov(double a, double scale = 1.0);
  /// S(w) = scale pi/w0 on |w| <= w0, zero elsewhere, 0 < w0 <= pi.
  static ScalarFadingSpec bandlimited_flat(double omega0, double scale = 1.0);

  /// Truncated autocorrelation r[0..L]; negative lags follow from R(-v) = conj R(v).
  static ScalarFadingSpec from_sequence(std::vector<std::complex<double>> r);

  /// Spectral density sampled on the uniform grid omega[0] = -pi .. omega[N-1] = pi.
  /// Between samples the density is the periodic piecewise-linear interpolant.
  static ScalarFadingSpec from_psd_table(std::vector<double> omega, std::vector<double> s);

  Repr repr() const noexcept { return repr_; }
  /// Parametric family, meaningful only when repr() == parametric.
  Family family() const noexcept { return family_; }
  /// Family parameter: a for Gauss–Markov, w0 for bandlimited-flat, 0 otherwise.
  double parameter() const noexcept { return param_; }

  double r0() const noexcept { return r0_; }
  double lambda() const noexcept { return lambda_; }
  std::complex<double> autocorr(long lag) const;
  double psd(double omega) const;
  void psd(std::span<const double> omega, std::span<double> out) const;

  /// sum_v |R(v)| when it is finite and known in closed form.
  std::optional<double> abs_sum() const;

  /// Frequencies where S is non-smooth or sharply peaked; used as quadrature cuts.
  std::vector<double> breakpoints() const;

  /// Largest lag carried exactly by a sequence repr (L); 0 for other reprs.
  std::size_t sequence_length() const noexcept { return seq_.empty() ? 0 : seq_.size() - 1; }
  std::span<const std::complex<double>> sequence() const noexcept { return seq_; }
  std::span<const double> table_omega() const noexcept { return omega_; }
  std::span<const double> table_values() const noexcept { return table_; }

  /// Same law with every R(v) multiplied by c >= 0.
  ScalarFadingSpec scaled(double c) const;

  std::string describe() const;

 private:
  ScalarFadingSpec() = default;
  void finish();

  Repr repr_ = Repr::parametric;
  Family family_ = Family::memoryless;
  double param_ = 0.0;
  double scale_ = 1.0;
  double r0_ = 0.0;
  double lambda_ = 0.0;
  std::vector<std::complex<double>> seq_;
  std::vector<double> omega_;
  std::vector<double> table_;
};

/// Build a parametric law; `param` is a (Gauss–Markov) or w0 (bandlimited-flat).
ScalarFadingSpec make_parametric(Family family, double param, double scale);

double lambda_of(const ScalarFadingSpec& spec);

/// lambda < 2 R(0)^2.
bool is_ephemeral(const ScalarFadingSpec& spec);

/// Samples S on `points` uniformly spaced frequencies covering [-pi, pi]
/// (both ends included). Defaults to an even count with at least 2L+2 points for
/// sequence laws and 1024 otherwise.
ScalarFadingSpec autocorr_to_psd(const ScalarFadingSpec& spec,
                                 std::optional<std::size_t> points = std::nullopt);

/// Returns R(0..max_lag) as a sequence law.
///
/// Tabulated densities use the trapezoidal discrete Fourier transform over the
/// M = N-1 distinct grid points, which resolves lags up to (M-1)/2; asking for
/// more throws ResolutionError. The default max_lag is the smallest lag with
/// |R| < 1e-12 R(0), capped at 1e5 and at the grid resolution.
ScalarFadingSpec psd_to_autocorr(const ScalarFadingSpec& spec,
                                 std::optional<std::size_t> max_lag = std::nullopt);

/// (1/2pi) int g_k(S(w)) dw for every g_k, sharing one composite Gauss–Legendre
/// grid that is refined until each component settles.
std::vector<double> spectral_averages(const ScalarFadingSpec& spec,
                                      std::span<const std::function<double(double)>> g,
                                      const quad::DoublingOptions& opts = {});

/// n_r x n_t grid of independent scalar laws, optionally transmit separable:
/// R_{r,t}(k) = alpha_t R_r(k).
class MimoFadingSpec {
 public:
  struct Separable {
    std::vector<double> alpha;
    std::vector<ScalarFadingSpec> base;
  };

  static MimoFadingSpec from_entries(std::vector<std::vector<ScalarFadingSpec>> entries);
  static MimoFadingSpec transmit_separable(std::vector<double> alpha,
                                           std::vector<ScalarFadingSpec> base_rows);
  /// Attaches a factorization to explicit entries after checking it on lags 0..16.
  static MimoFadingSpec with_factorization(std::vector<std::vector<ScalarFadingSpec>> entries,
                                           Separable factorization);

  int nr() const noexcept { return static_cast<int>(entries_.size()); }
  int nt() const noexcept { return entries_.empty() ? 0 : static_cast<int>(entries_[0].size()); }
  const ScalarFadingSpec& entry(int r, int t) const { return entries_.at(r).at(t); }
  const std::optional<Separable>& separable() const noexcept { return separable_; }

 private:
  std::vector<std::vector<ScalarFadingSpec>> entries_;
  std::optional<Separable> separable_;
};

/// T independent tap laws, optionally delay separable: R_t(k) = alpha_t R(k).
class DelaySpreadSpec {
 public:
  struct Separable {
    std::vector<double> alpha;
    ScalarFadingSpec base;
  };

  static DelaySpreadSpec from_taps(std::vector<ScalarFadingSpec> taps);
  static DelaySpreadSpec delay_separable(std::vector<double> alpha, ScalarFadingSpec base);

  int taps() const noexcept { return static_cast<int>(taps_.size()); }
  const ScalarFadingSpec& tap(int t) const { return taps_.at(t); }
  const std::optional<Separable>& separable() const noexcept { return separable_; }

 private:
  std::vector<ScalarFadingSpec> taps_;
  std::optional<Separable> separable_;
};

/// Peak SNR rho > 0 and peak-to-average ratio beta >= 1.
struct PowerBudget {
  double rho;
  double beta;

  static PowerBudget make(double rho, double beta);
};

/// Throws SpecError unless beta >= 1 and finite.
void check_beta(double beta);

}  // namespace noncoh
