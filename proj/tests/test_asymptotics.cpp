#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "noncoh/asymptotics.hpp"
#include "noncoh/errors.hpp"

using namespace noncoh;

namespace {

double siso_formula(double lam, double beta) {
  return lam < 2.0 / beta ? lam * lam / 8.0 : lam / (2.0 * beta) - 1.0 / (2.0 * beta * beta);
}

double iid_formula(double lam, double beta) {
  return lam < 2.0 - beta / 2.0 ? 1.0 / (8.0 * (2.0 - lam)) : 1.0 / (2.0 * beta) + (lam - 2.0) / (2.0 * beta * beta);
}

// Brute-force max of (a lam - a^2) / 2 over a fine grid on [0, 1/beta].
double grid_max(double lam, double beta) {
  double best = 0.0;
  const int n = 200000;
  for (int i = 0; i <= n; ++i) {
    const double a = i / (beta * n);
    best = std::max(best, 0.5 * (a * lam - a * a));
  }
  return best;
}

ScalarFadingSpec unit_law_with_lambda(double lam) {
  return ScalarFadingSpec::gauss_markov(std::sqrt((lam - 1.0) / (lam + 1.0)));
}

}  // namespace

TEST_CASE("scalar asymptotes on a grid") {
  for (double lam : {1.0, 1.25, 1.5, 2.0, 3.0, 5.0}) {
    for (double beta : {1.0, 1.5, 2.0}) {
      const auto c = c_siso(lam, beta);
      CHECK(c.value == doctest::Approx(siso_formula(lam, beta)).epsilon(1e-14));
      CHECK(c.value == doctest::Approx(grid_max(lam, beta)).epsilon(1e-8));
      CHECK(c.argmax.at(0) == doctest::Approx(std::min(lam / 2.0, 1.0 / beta)));
      CHECK(c.regime == (lam >= 2.0 / beta ? Regime::nonephemeral_branch : Regime::ephemeral_branch));
      CHECK(c_iid(lam, beta).value == doctest::Approx(iid_formula(lam, beta)).epsilon(1e-14));
      CHECK(c_iid(lam, beta).value <= c.value + 1e-15);
    }
  }
}

TEST_CASE("scalar reference points") {
  CHECK(c_siso(1.0, 1.0).value == doctest::Approx(0.125));
  CHECK(c_siso(3.0, 1.0).value == doctest::Approx(1.0));
  CHECK(c_siso(3.0, 1.5).value == doctest::Approx(7.0 / 9.0));
  CHECK(c_iid(1.0, 1.0).value == doctest::Approx(0.125));
  CHECK(c_iid(2.0, 1.0).value == doctest::Approx(0.5));
  CHECK(c_psk(1.0) == 0.0);
  CHECK(c_psk(2.0) == doctest::Approx(0.5));
  CHECK(c_siso(2.0, 1.0).value == doctest::Approx(0.5));
  CHECK(c_psk(1.2) == doctest::Approx(0.1));
  CHECK(c_iid(1.2, 1.0).value == doctest::Approx(0.15625));
  CHECK(c_siso(1.2, 1.0).value == doctest::Approx(0.18));
}

TEST_CASE("branch continuity") {
  const double h = 1e-9;
  for (double beta : {1.0, 1.5, 2.0}) {
    const double ls = 2.0 / beta;
    if (ls >= 1.0 + h) CHECK(std::abs(c_siso(ls - h, beta).value - c_siso(ls, beta).value) < 1e-8);
    const double li = 2.0 - beta / 2.0;
    if (li >= 1.0 + h) CHECK(std::abs(c_iid(li - h, beta).value - c_iid(li, beta).value) < 1e-8);
  }
  CHECK(c_iid(1.5, 1.0).value == doctest::Approx(0.25));
  CHECK(c_iid(1.5 - 1e-12, 1.0).value == doctest::Approx(0.25));
}

TEST_CASE("dominance over the lambda grid at beta = 1") {
  for (int k = 0; k <= 400; ++k) {
    const double lam = 1.0 + k / 100.0;
    const double p = c_psk(lam), i = c_iid(lam, 1.0).value, s = c_siso(lam, 1.0).value;
    CHECK(p <= i + 1e-15);
    CHECK(i <= s + 1e-15);
    if (lam >= 1.5 && lam < 2.0) CHECK(p == doctest::Approx(i).epsilon(1e-14));
    if (lam >= 2.0) CHECK(p == doctest::Approx(s).epsilon(1e-14));
  }
}

TEST_CASE("spec overloads") {
  CHECK(c_siso(ScalarFadingSpec::gauss_markov(0.5), 1.0).value == doctest::Approx(siso_formula(5.0 / 3.0, 1.0)));
  CHECK_THROWS_AS(c_siso(ScalarFadingSpec::memoryless(2.0), 1.0), SpecError);
  CHECK(c_psk(unit_law_with_lambda(3.0)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(c_siso(1.0, 0.5), SpecError);
}

TEST_CASE("sum constraint: solver against the separable formula") {
  const auto m = MimoFadingSpec::transmit_separable(
      {1.0, 0.5, 0.8}, {ScalarFadingSpec::gauss_markov(0.6), ScalarFadingSpec::gauss_markov(0.9, 0.7)});
  for (double beta : {1.0, 1.5, 3.0}) {
    CHECK(std::abs(c_mimo_sum(m, beta).value - c_mimo_sum_separable(m, beta).value) <= 1e-10);
  }
  const auto one = MimoFadingSpec::transmit_separable({1.0}, {unit_law_with_lambda(1.5)});
  CHECK(c_mimo_sum_separable(one, 1.0).value == doctest::Approx(c_siso(1.5, 1.0).value).epsilon(1e-12));
  const auto pick = MimoFadingSpec::transmit_separable({1.0, 0.5}, {unit_law_with_lambda(3.0)});
  CHECK(c_mimo_sum_separable(pick, 1.0).value == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("identical entries") {
  const auto law = ScalarFadingSpec::gauss_markov(0.7);
  const double cs = c_siso(law, 1.5).value;
  for (int nr : {1, 2, 3}) {
    for (int nt : {1, 2, 3}) {
      const auto m = MimoFadingSpec::transmit_separable(std::vector<double>(nt, 1.0), std::vector<ScalarFadingSpec>(nr, law));
      CHECK(c_mimo_sum(m, 1.5).value == doctest::Approx(nr * cs).epsilon(1e-10));
      CHECK(c_mimo_individual_separable(m, 1.5).value == doctest::Approx(nt * nt * nr * cs).epsilon(1e-12));
    }
  }
}

TEST_CASE("individual constraint, separable") {
  const std::vector<double> alpha{1.0, 0.5, 0.3};
  const std::vector<ScalarFadingSpec> rows{ScalarFadingSpec::gauss_markov(0.8), ScalarFadingSpec::gauss_markov(0.9, 2.0)};
  const auto m = MimoFadingSpec::transmit_separable(alpha, rows);
  double inner = 0.0;
  for (const auto& r : rows) inner += r.lambda() - r.r0() * r.r0();
  CHECK(c_mimo_individual_separable(m, 1.0).value == doctest::Approx(1.8 * 1.8 * inner / 2.0).epsilon(1e-12));

  const double ave = 1.8 / 3.0;
  for (double beta : {1.0, 2.0}) {
    const double ratio = c_mimo_sum_separable(m, beta).value / (c_mimo_individual_separable(m, beta).value / 9.0);
    CHECK(ratio == doctest::Approx((1.0 / ave) * (1.0 / ave)).epsilon(1e-12));
  }

  for (double beta : {1.0, 2.0}) {
    const std::vector<double> d{1.0 / 1.8, 0.5 / 1.8, 0.3 / 1.8};
    const auto box = c_mimo_individual_box(m, beta, d);
    CHECK(box.upper == doctest::Approx(c_mimo_individual_separable(m, beta).value).epsilon(1e-9));
  }
}

TEST_CASE("individual box validation") {
  const auto law = ScalarFadingSpec::gauss_markov(0.8);
  const auto m = MimoFadingSpec::from_entries({{law, law}});
  CHECK_THROWS_AS(c_mimo_individual_box(m, 1.0, std::vector<double>{0.0, 1.0}), DomainError);
  CHECK_THROWS_AS(c_mimo_individual_box(m, 2.0, std::nullopt, true), DomainError);
  const auto eph = MimoFadingSpec::from_entries({{ScalarFadingSpec::gauss_markov(0.3)}});
  CHECK_THROWS_AS(c_mimo_individual_box(eph, 1.0, std::nullopt, true), DomainError);
}

TEST_CASE("loose bracket") {
  for (double a : {0.6, 0.8, 0.95}) {
    const auto law = ScalarFadingSpec::gauss_markov(a);
    const auto box = c_mimo_individual_box(MimoFadingSpec::from_entries({{law}}), 1.0, std::nullopt, true);
    const double want = (law.lambda() - 1.0) / 2.0;
    CHECK(box.loose_lower.value() == doctest::Approx(want).epsilon(1e-8));
    CHECK(box.loose_upper.value() == doctest::Approx(want).epsilon(1e-12));
    CHECK(box.upper == doctest::Approx(c_siso(law, 1.0).value).epsilon(1e-9));
  }

  const auto simo = MimoFadingSpec::from_entries({{ScalarFadingSpec::gauss_markov(0.7)}, {ScalarFadingSpec::gauss_markov(0.9)}});
  double want = 0.0;
  for (int r = 0; r < 2; ++r) want += (simo.entry(r, 0).lambda() - 1.0) / 2.0;
  CHECK(c_mimo_individual_box(simo, 1.0, std::nullopt, true).loose_upper.value() == doctest::Approx(want).epsilon(1e-12));

  std::mt19937_64 rng(20261015);
  std::uniform_real_distribution<double> coef(0.6, 0.95), scale(0.5, 1.5);
  std::uniform_int_distribution<int> dim(1, 3);
  for (int trial = 0; trial < 12; ++trial) {
    const int nr = dim(rng), nt = dim(rng);
    std::vector<std::vector<ScalarFadingSpec>> e(nr);
    for (auto& row : e) {
      for (int t = 0; t < nt; ++t) row.push_back(ScalarFadingSpec::gauss_markov(coef(rng), scale(rng)));
    }
    const auto box = c_mimo_individual_box(MimoFadingSpec::from_entries(e), 1.0, std::nullopt, true);
    CHECK(box.loose_lower.value() <= box.upper * (1.0 + 1e-9));
    CHECK(box.upper <= box.loose_upper.value() * (1.0 + 1e-9));
  }
}

TEST_CASE("delay spread") {
  const auto base = unit_law_with_lambda(3.0);
  const auto ds = DelaySpreadSpec::delay_separable({1.0, 1.0}, base);
  CHECK(c_delay_spread_separable(ds, 1.0).value == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(c_delay_spread_separable(DelaySpreadSpec::delay_separable({1.0}, base), 1.5).value ==
        doctest::Approx(c_siso(base, 1.5).value).epsilon(1e-12));
  const std::vector<double> alpha{1.0, 0.4, 0.2};
  const auto miso = MimoFadingSpec::transmit_separable(alpha, {base});
  for (double beta : {1.0, 2.0}) {
    CHECK(std::abs(c_delay_spread_separable(DelaySpreadSpec::delay_separable(alpha, base), beta).value -
                   c_mimo_individual_separable(miso, beta).value) <= 1e-12);
  }
}

TEST_CASE("large beta limit") {
  CHECK(large_beta_limit(ScalarFadingSpec::memoryless(), 1.0) == doctest::Approx(1.0 - std::log(2.0)).epsilon(1e-14));
  const auto gm = ScalarFadingSpec::gauss_markov(0.5);
  const double rho = 1e-4;
  CHECK(large_beta_limit(gm, rho) / rho == doctest::Approx(gm.lambda() / 2.0).epsilon(1e-3));
}

TEST_CASE("rescaling the fading multiplies the sum asymptote") {
  const auto m1 = MimoFadingSpec::transmit_separable({1.0, 0.5}, {ScalarFadingSpec::gauss_markov(0.8)});
  const double c = 1.7;
  const auto mc = MimoFadingSpec::transmit_separable({c, 0.5 * c}, {ScalarFadingSpec::gauss_markov(0.8)});
  for (double beta : {1.0, 3.0}) {
    const auto r1 = c_mimo_sum(m1, beta), rc = c_mimo_sum(mc, beta);
    CHECK(rc.value == doctest::Approx(c * c * r1.value).epsilon(1e-10));
    CHECK(c_mimo_individual_separable(mc, beta).value ==
          doctest::Approx(c * c * c_mimo_individual_separable(m1, beta).value).epsilon(1e-12));
  }
}
