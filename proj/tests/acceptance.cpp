// Acceptance suite: `noncoh_acceptance K CLI` checks criterion K and prints one
// PASS/FAIL line. Exit status 0 on PASS.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "noncoh/asymptotics.hpp"
#include "noncoh/firm_bounds.hpp"
#include "noncoh/prediction.hpp"
#include "noncoh/rate_oracle.hpp"

using namespace noncoh;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) detail = what;
    pass = pass && ok;
  }
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

double rel(double got, double want) { return std::abs(got - want) / std::abs(want); }

// ---- 1: closed-form asymptote table
constexpr double kTableTol = 1e-12;

Verdict closed_form_table() {
  Verdict v;
  for (double lam : {1.0, 1.25, 1.5, 2.0, 3.0, 5.0}) {
    for (double beta : {1.0, 1.5, 2.0}) {
      const double s = lam < 2.0 / beta ? lam * lam / 8.0 : lam / (2.0 * beta) - 1.0 / (2.0 * beta * beta);
      const double i = lam < 2.0 - beta / 2.0 ? 1.0 / (8.0 * (2.0 - lam))
                                              : 1.0 / (2.0 * beta) + (lam - 2.0) / (2.0 * beta * beta);
      const std::string at = " at lambda=" + fmt(lam) + " beta=" + fmt(beta);
      v.require(std::abs(c_siso(lam, beta).value - s) <= kTableTol, "c_siso" + at);
      v.require(std::abs(c_iid(lam, beta).value - i) <= kTableTol, "c_iid" + at);
    }
    v.require(std::abs(c_psk(lam) - (lam - 1.0) / 2.0) <= kTableTol, "c_psk at lambda=" + fmt(lam));
  }
  v.require(c_siso(2.0, 1.0).value == 0.5 && c_iid(2.0, 1.0).value == 0.5 && c_psk(2.0) == 0.5,
            "three-way meet at lambda=2 is not exactly 0.5");
  if (v.pass) v.detail = "54 table entries within 1e-12, meet at 0.5";
  return v;
}

// ---- 2: low-SNR tightness of the SISO bound
constexpr double kLowSnrRel = 0.05;

Verdict low_snr_tightness() {
  Verdict v;
  std::string worst;
  for (double a : {0.5, 0.99}) {
    const auto law = ScalarFadingSpec::gauss_markov(a);
    for (double beta : {1.0, 10.0}) {
      const double c = c_siso(law, beta).value;
      double prev = INFINITY, err = 0.0;
      const std::string at = "GM(" + fmt(a) + ") beta=" + fmt(beta);
      for (double rho : {1e-1, 1e-2, 1e-3}) {
        err = std::abs(u_siso(law, {rho, beta}) / (rho * rho) - c);
        v.require(err < prev, at + " error not decreasing at rho=" + fmt(rho));
        prev = err;
      }
      v.require(err / c < kLowSnrRel, at + " relative error " + fmt(err / c) + " at rho=1e-3");
      worst += (worst.empty() ? "" : ", ") + at + ": " + fmt(err / c);
    }
  }
  v.detail = (v.pass ? "" : v.detail + "; ") + "relative errors at rho=1e-3: " + worst;
  return v;
}

// ---- 3: large-beta tightness
constexpr double kLargeBetaRel = 1e-3;

Verdict large_beta() {
  Verdict v;
  const auto law = ScalarFadingSpec::gauss_markov(0.9);
  const double rho = 1.0, beta = 1e4;
  const double limit = 1.0 - i_of_rho(law, rho) / rho;
  const double gap = std::abs(beta / rho * u_siso(law, {rho, beta}) - limit);
  v.require(gap < kLargeBetaRel * limit, "gap " + fmt(gap));
  if (v.pass) v.detail = "relative gap " + fmt(gap / limit);
  return v;
}

// ---- 4: prediction identities
constexpr double kIdentityTol = 1e-12;
constexpr double kTaylorShrink = 5.0;

Verdict prediction_identities() {
  Verdict v;
  const std::vector<ScalarFadingSpec> laws{ScalarFadingSpec::memoryless(), ScalarFadingSpec::gauss_markov(0.5),
                                           ScalarFadingSpec::gauss_markov(0.99), ScalarFadingSpec::bandlimited_flat(0.3)};
  double worst = 0.0;
  for (const auto& law : laws) {
    for (int k = 0; k <= 32; ++k) {
      const double rho = std::pow(10.0, -6.0 + k * 0.25);
      const double e = std::abs(std::log1p(rho * sigma2_of_rho(law, rho).sigma2) - i_of_rho(law, rho));
      worst = std::max(worst, e);
      v.require(e <= kIdentityTol, law.describe() + " identity off by " + fmt(e) + " at rho=" + fmt(rho));
    }
    const double lam = law.lambda();
    double prev_i = INFINITY, prev_s = INFINITY;
    for (double rho : {1e-2, 1e-3, 1e-4}) {
      const double ri = std::abs(i_of_rho(law, rho) - (rho - lam * rho * rho / 2.0)) / (rho * rho);
      const double rs = std::abs(sigma2_of_rho(law, rho).sigma2 - (1.0 - (lam - 1.0) * rho / 2.0)) / rho;
      v.require(ri <= prev_i / kTaylorShrink && rs <= prev_s / kTaylorShrink,
                law.describe() + " Taylor residual shrinks too slowly at rho=" + fmt(rho));
      prev_i = ri;
      prev_s = rs;
    }
  }
  if (v.pass) v.detail = "max identity error " + fmt(worst) + ", Taylor residuals shrink >= 5x per decade";
  return v;
}

// ---- 5: finite-history prediction
constexpr double kHistoryTol = 1e-6;
constexpr double kOneTapTol = 1e-12;

Verdict finite_history() {
  Verdict v;
  const double a = 0.9;
  const auto law = ScalarFadingSpec::gauss_markov(a);
  int largest = 0;
  for (double rho : {0.1, 1.0, 10.0}) {
    const std::complex<double> one[1] = {1.0};
    v.require(std::abs(finite_history_error(law, rho, one) - (1.0 - rho * a * a / (1.0 + rho))) <= kOneTapTol,
              "M=1 formula at rho=" + fmt(rho));
    const double target = sigma2_of_rho(law, rho).sigma2;
    double prev = INFINITY, e = INFINITY;
    int m = 1;
    for (; m <= 4096; m *= 2) {
      e = finite_history_error(law, rho, std::vector<std::complex<double>>(static_cast<std::size_t>(m), 1.0));
      v.require(e <= prev && e >= target - 1e-12, "not monotone toward sigma2 at rho=" + fmt(rho));
      prev = e;
      if (e - target < kHistoryTol) break;
    }
    v.require(e - target < kHistoryTol, "no convergence at rho=" + fmt(rho));
    largest = std::max(largest, m);
  }
  if (v.pass) v.detail = "converged by M=" + std::to_string(largest);
  return v;
}

// ---- 6: second-order mutual information
constexpr double kSecondOrderTol = 1e-10;
constexpr double kRichardsonTol = 1e-3;

double cesaro(double a, int n) {
  double s = 1.0;
  for (int k = 1; k < n; ++k) s += 2.0 * (1.0 - static_cast<double>(k) / n) * std::pow(a, 2.0 * k);
  return s;
}

Verdict second_order() {
  Verdict v;
  for (double g : {0.0, 0.5}) {
    const auto law = g == 0.0 ? ScalarFadingSpec::memoryless() : ScalarFadingSpec::gauss_markov(g);
    for (int n : {1, 2, 4, 8, 16, 32}) {
      const double ln = g == 0.0 ? 1.0 : cesaro(g, n);
      for (double a : {0.25, 0.5, 1.0}) {
        const double got = second_order_mi(law, InputLaw::uniform_phase(n, a)).coeff;
        v.require(std::abs(got - 0.5 * (a * ln - a * a)) <= kSecondOrderTol,
                  law.describe() + " n=" + std::to_string(n) + " a=" + fmt(a));
      }
    }
  }
  const auto gm = ScalarFadingSpec::gauss_markov(0.5);
  const auto c = c_siso(gm, 1.0);
  const std::vector<int> ns{8, 16, 32, 64};
  std::vector<double> vals;
  for (int n : ns) vals.push_back(second_order_mi(gm, InputLaw::fsk(n, n, c.argmax[0])).coeff);
  const double lim = richardson_limit(ns, vals);
  v.require(std::abs(lim - c.value) < kRichardsonTol, "extrapolated " + fmt(lim) + " vs " + fmt(c.value));
  if (v.pass) v.detail = "36 cases within 1e-10, extrapolation off by " + fmt(std::abs(lim - c.value));
  return v;
}

// ---- 7: MIMO consistency
constexpr double kReductionTol = 1e-12;
constexpr double kIdenticalRel = 1e-10;
constexpr double kExpansionRel = 0.05;
constexpr double kSandwichSlack = 1e-9;

Verdict mimo_consistency() {
  Verdict v;
  for (const auto& law : {ScalarFadingSpec::memoryless(), ScalarFadingSpec::gauss_markov(0.5), ScalarFadingSpec::gauss_markov(0.99)}) {
    const auto m = MimoFadingSpec::from_entries({{law}});
    for (const PowerBudget b : {PowerBudget{0.01, 1.0}, PowerBudget{1.0, 1.0}, PowerBudget{5.0, 3.0}}) {
      const double s = u_siso(law, b);
      v.require(std::abs(u_mimo_sum(m, b).value - s) <= kReductionTol &&
                    std::abs(u_mimo_individual(m, b).value - s) <= kReductionTol,
                "(a) 1x1 reduction for " + law.describe());
    }
  }

  const auto base = ScalarFadingSpec::gauss_markov(0.8);
  for (double beta : {1.0, 2.0}) {
    const double cs = c_siso(base, beta).value;
    for (int nr = 1; nr <= 3; ++nr) {
      for (int nt = 1; nt <= 3; ++nt) {
        const auto m = MimoFadingSpec::transmit_separable(std::vector<double>(nt, 1.0),
                                                          std::vector<ScalarFadingSpec>(nr, base));
        v.require(rel(c_mimo_sum(m, beta).value, nr * cs) <= kIdenticalRel, "(b) c_S scaling");
        v.require(rel(c_mimo_individual_separable(m, beta).value, nt * nt * nr * cs) <= kIdenticalRel,
                  "(b) c_I scaling");
      }
    }
  }

  const double rho = 1e-3;
  double worst = 0.0;
  const std::vector<MimoFadingSpec> cases{
      MimoFadingSpec::from_entries({{ScalarFadingSpec::gauss_markov(0.5), ScalarFadingSpec::gauss_markov(0.5)}}),
      MimoFadingSpec::from_entries({{ScalarFadingSpec::gauss_markov(0.3), ScalarFadingSpec::gauss_markov(0.6)},
                                    {ScalarFadingSpec::memoryless(), ScalarFadingSpec::gauss_markov(0.5, 0.8)}})};
  for (const auto& m : cases) {
    const double want = c_mimo_individual_box(m, 1.0).upper;
    const double got = u_mimo_individual(m, {rho, 1.0}).value / (rho * rho);
    worst = std::max(worst, rel(got, want));
    v.require(rel(got, want) < kExpansionRel, "(c) small-rho expansion off by " + fmt(rel(got, want)));
  }

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> coef(0.6, 0.95), scale(0.5, 1.5);
  std::uniform_int_distribution<int> dim(1, 3);
  for (int trial = 0; trial < 20; ++trial) {
    const int nr = dim(rng), nt = dim(rng);
    std::vector<std::vector<ScalarFadingSpec>> e(static_cast<std::size_t>(nr));
    for (auto& row : e) {
      for (int t = 0; t < nt; ++t) row.push_back(ScalarFadingSpec::gauss_markov(coef(rng), scale(rng)));
    }
    const auto box = c_mimo_individual_box(MimoFadingSpec::from_entries(e), 1.0, std::nullopt, true);
    v.require(*box.loose_lower <= box.upper * (1.0 + kSandwichSlack) &&
                  box.upper <= *box.loose_upper * (1.0 + kSandwichSlack),
              "(d) sandwich violated on instance " + std::to_string(trial));
  }
  if (v.pass) v.detail = "(a)-(d) hold, expansion off by at most " + fmt(worst);
  return v;
}

// ---- 8: delay spread
constexpr double kDelayTol = 1e-12;

Verdict delay_spread() {
  Verdict v;
  // Flat spectrum on |omega| < pi/3: unit variance, lambda = 3.
  const auto law = ScalarFadingSpec::bandlimited_flat(std::acos(-1.0) / 3.0);
  const double value = c_delay_spread_separable(DelaySpreadSpec::delay_separable({1.0, 1.0}, law), 1.0).value;
  v.require(std::abs(value - 4.0) <= kDelayTol, "value " + fmt(value));
  const double miso =
      c_mimo_individual_separable(MimoFadingSpec::transmit_separable({1.0, 1.0}, {law}), 1.0).value;
  v.require(std::abs(value - miso) <= kDelayTol, "MISO value differs");
  if (v.pass) v.detail = "value 4, MISO difference " + fmt(std::abs(value - miso));
  return v;
}

// ---- 9: figure 3 curves
constexpr double kFigureRel = 0.20;

Verdict figure3() {
  Verdict v;
  const auto law = ScalarFadingSpec::gauss_markov(0.99);
  const double beta = 10.0;
  const double c = c_siso(law, beta).value;
  double up0 = 0.0, low0 = 0.0;
  for (int k = 0; k < 20; ++k) {
    const double rho = 0.01 * std::pow(1000.0, k / 19.0);
    const double up = u_siso(law, {rho, beta});
    const double low = capacity_lower_bound(law, {rho, beta});
    v.require(low <= up, "lower above upper at rho=" + fmt(rho));
    v.require(low > 0.0 && up > 0.0, "nonpositive value at rho=" + fmt(rho));
    if (k == 0) {
      up0 = up / (rho * rho);
      low0 = low / (rho * rho);
    }
  }
  const std::string scaled = "at rho=0.01: upper/rho^2=" + fmt(up0) + " lower/rho^2=" + fmt(low0) + " c=" + fmt(c);
  v.require(rel(up0, c) < kFigureRel && rel(low0, c) < kFigureRel, scaled);
  v.detail = v.pass ? "ordering holds; " + scaled : v.detail;
  return v;
}

// ---- 10: determinism of the CLI figure output
Verdict determinism(const std::string& cli) {
  Verdict v;
  const auto dir = std::filesystem::temp_directory_path();
  const auto a = dir / "noncoh_fig3_a.csv", b = dir / "noncoh_fig3_b.csv";
  const int ra = std::system((cli + " figure fig3 --out " + a.string()).c_str());
  const int rb = std::system(("NONCOH_THREADS=4 " + cli + " figure fig3 --out " + b.string()).c_str());
  v.require(ra == 0 && rb == 0, "CLI exited with an error");
  const auto slurp = [](const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
  };
  const std::string sa = slurp(a), sb = slurp(b);
  v.require(!sa.empty() && sa == sb, "outputs differ");
  if (v.pass) v.detail = std::to_string(sa.size()) + " identical bytes";
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: noncoh_acceptance K [CLI]\n");
    return 2;
  }
  const int k = std::atoi(argv[1]);
  const std::string cli = argc > 2 ? argv[2] : "noncoh_cli";
  struct Entry {
    std::function<Verdict()> run;
    double seconds;
  };
  const std::vector<Entry> table{
      {closed_form_table, 1.0},  {low_snr_tightness, 5.0}, {large_beta, 1.0},
      {prediction_identities, 5.0}, {finite_history, 10.0}, {second_order, 60.0},
      {mimo_consistency, 120.0}, {delay_spread, 1.0},       {figure3, 120.0},
      {[&] { return determinism(cli); }, 600.0}};
  if (k < 1 || k > static_cast<int>(table.size())) {
    std::fprintf(stderr, "criterion must be 1..%zu\n", table.size());
    return 2;
  }
  const auto t0 = std::chrono::steady_clock::now();
  Verdict v;
  try {
    v = table[static_cast<std::size_t>(k - 1)].run();
  } catch (const std::exception& e) {
    v.pass = false;
    v.detail = std::string("exception: ") + e.what();
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const double limit = table[static_cast<std::size_t>(k - 1)].seconds;
  if (secs > limit) {
    v.pass = false;
    v.detail += "; took " + fmt(secs) + " s, limit " + fmt(limit) + " s";
  }
  std::printf("AC%d %s: %s (%.2f s)\n", k, v.pass ? "PASS" : "FAIL", v.detail.c_str(), secs);
  return v.pass ? 0 : 1;
}
