#include "noncoh/prediction.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "noncoh/errors.hpp"
#include "numeric_util.hpp"

namespace noncoh {
namespace {

struct SpectralPair {
  double i = 0.0;
  double deficit = 0.0;
};

SpectralPair spectral_pair(const ScalarFadingSpec& spec, double rho) {
  if (!(rho >= 0.0) || !std::isfinite(rho)) throw DomainError("rho must be finite and >= 0");
  if (rho == 0.0 || spec.r0() == 0.0) return {};
  const std::array<std::function<double(double)>, 2> g{
      [rho](double s) { return std::log1p(rho * s); },
      [rho](double s) { return detail::x_minus_log1p(rho * s); },
  };
  const auto v = spectral_averages(spec, g);
  SpectralPair out;
  out.deficit = std::max(v[1], 0.0);
  const double linear = rho * spec.r0();
  // rho R0 - D is the more accurate route while the deficit is a small correction.
  out.i = out.deficit <= 0.5 * linear ? linear - out.deficit : v[0];
  return out;
}

Eigen::MatrixXcd history_covariance(const ScalarFadingSpec& spec, std::size_t m) {
  const auto n = static_cast<Eigen::Index>(m);
  std::vector<std::complex<double>> r(m);
  for (std::size_t k = 0; k < m; ++k) r[k] = spec.autocorr(static_cast<long>(k));
  Eigen::MatrixXcd k(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      // K[i][j] = R(j - i)
      k(i, j) = j >= i ? r[static_cast<std::size_t>(j - i)] : std::conj(r[static_cast<std::size_t>(i - j)]);
    }
  }
  return k;
}

void check_history(double rho, std::span<const std::complex<double>> z) {
  if (!(rho > 0.0) || !std::isfinite(rho)) throw DomainError("rho must be finite and > 0");
  if (z.empty()) throw DomainError("history must hold at least one symbol");
  for (const auto& x : z) {
    if (!(std::abs(x) <= 1.0 + 1e-12)) throw DomainError("history symbols must satisfy |z| <= 1");
  }
}

}  // namespace

double i_of_rho(const ScalarFadingSpec& spec, double rho) { return spectral_pair(spec, rho).i; }

double spectral_deficit(const ScalarFadingSpec& spec, double rho) {
  return spectral_pair(spec, rho).deficit;
}

PredictionResult sigma2_of_rho(const ScalarFadingSpec& spec, double rho) {
  if (rho == 0.0) return {0.0, spec.r0(), 0.0};
  const double i = i_of_rho(spec, rho);
  return {rho, std::expm1(i) / rho, i};
}

double prediction_gain(const ScalarFadingSpec& spec, double rho) {
  if (std::isinf(rho) && rho > 0.0) return spec.r0();
  if (rho == 0.0) return 0.0;
  if (spec.repr() == ScalarFadingSpec::Repr::parametric &&
      (spec.family() == Family::memoryless || (spec.family() == Family::gauss_markov && spec.parameter() == 0.0))) {
    return 0.0;
  }
  const SpectralPair s = spectral_pair(spec, rho);
  // R0 - (e^I - 1)/rho with I = rho R0 - D.
  return std::clamp((s.deficit - detail::expm1_minus_x(s.i)) / rho, 0.0, spec.r0());
}

double finite_history_error(const ScalarFadingSpec& spec, double rho,
                            std::span<const std::complex<double>> z) {
  check_history(rho, z);
  const std::size_t m = z.size();
  const auto n = static_cast<Eigen::Index>(m);
  Eigen::VectorXcd d(n), v(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    d(i) = z[static_cast<std::size_t>(i)];
    v(i) = spec.autocorr(-1 - static_cast<long>(i));
  }
  Eigen::MatrixXcd a = rho * (d.asDiagonal() * history_covariance(spec, m) * d.conjugate().asDiagonal());
  a.diagonal().array() += 1.0;
  const Eigen::VectorXcd dv = d.cwiseProduct(v);
  Eigen::LLT<Eigen::MatrixXcd> llt(a);
  const Eigen::VectorXcd x = llt.solve(dv);
  const double q = dv.dot(x).real();  // dv^H x
  const double out = spec.r0() - rho * q;
  if (llt.info() != Eigen::Success || !std::isfinite(out)) {
    const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(a, Eigen::EigenvaluesOnly).eigenvalues();
    std::ostringstream os;
    os << "history solve failed, condition estimate " << ev(n - 1) / ev(0);
    throw NumericError(os.str(), spec.r0());
  }
  return out;
}

FirstOrderCheck first_order_error_check(const ScalarFadingSpec& spec, double rho,
                                        std::span<const std::complex<double>> z) {
  if (!spec.abs_sum()) {
    throw DomainError("first-order check needs an absolutely summable autocorrelation: " +
                      spec.describe());
  }
  FirstOrderCheck out;
  out.exact = finite_history_error(spec, rho, z);
  double acc = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    acc += std::norm(spec.autocorr(-1 - static_cast<long>(i))) * std::norm(z[i]);
  }
  out.linearized = spec.r0() - rho * acc;
  return out;
}

double first_order_remainder_bound(const ScalarFadingSpec& spec, double rho) {
  const auto q = spec.abs_sum();
  if (!q) throw DomainError("autocorrelation is not absolutely summable: " + spec.describe());
  const double rq = rho * *q;
  if (rq >= 1.0) return std::numeric_limits<double>::infinity();
  return rho * rho * *q * *q / (1.0 - rq);
}

HistoryConvergence converge_history(const ScalarFadingSpec& spec, double rho, double tol,
                                    std::size_t start, std::size_t max_history) {
  HistoryConvergence out;
  std::size_t m = std::max<std::size_t>(start, 1);
  std::vector<std::complex<double>> ones(m, 1.0);
  double prev = finite_history_error(spec, rho, ones);
  out.trace.push_back(prev);
  while (2 * m <= max_history) {
    m *= 2;
    ones.assign(m, 1.0);
    const double cur = finite_history_error(spec, rho, ones);
    out.trace.push_back(cur);
    if (std::abs(cur - prev) < tol) {
      out.value = cur;
      out.history = m;
      return out;
    }
    prev = cur;
  }
  throw NumericError("prediction history did not settle below the cap", prev);
}

}  // namespace noncoh
