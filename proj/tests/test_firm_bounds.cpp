#include <cmath>
#include <vector>

#include "doctest.h"
#include "noncoh/asymptotics.hpp"
#include "noncoh/errors.hpp"
#include "noncoh/firm_bounds.hpp"
#include "noncoh/prediction.hpp"

using namespace noncoh;

TEST_CASE("SISO bound reference values") {
  const auto mem = ScalarFadingSpec::memoryless();
  const auto b = u_siso_detail(mem, {1.0, 1.0});
  CHECK(b.zeta == doctest::Approx(1.0 / std::log(2.0) - 1.0).epsilon(1e-14));
  // 40-digit evaluation of log(1 + zeta) - zeta log 2.
  CHECK(b.value == doctest::Approx(0.059660101141609636).epsilon(1e-13));

  const auto gm99 = ScalarFadingSpec::gauss_markov(0.99);
  // Frozen from the closed-form I(rho) of the Gauss-Markov law.
  CHECK(u_siso(gm99, {0.01, 10.0}) == doctest::Approx(0.00026668294387893613).epsilon(1e-9));
  CHECK(u_siso(gm99, {0.1, 10.0}) == doctest::Approx(0.006361085587119793).epsilon(1e-9));
  CHECK(u_siso(gm99, {1.0, 10.0}) == doctest::Approx(0.082113769315067292).epsilon(1e-9));
  CHECK(u_siso(gm99, {10.0, 10.0}) == doctest::Approx(0.64967433245958444).epsilon(1e-9));
  CHECK(u_siso(ScalarFadingSpec::gauss_markov(0.5), {0.5, 2.0}) == doctest::Approx(0.036350925643464624).epsilon(1e-9));
}

TEST_CASE("closed form agrees with the 1-D numeric maximizer") {
  for (const auto& law : {ScalarFadingSpec::memoryless(), ScalarFadingSpec::gauss_markov(0.5),
                          ScalarFadingSpec::gauss_markov(0.99), ScalarFadingSpec::bandlimited_flat(0.5, 2.0)}) {
    for (double rho : {1e-3, 0.1, 1.0, 10.0}) {
      for (double beta : {1.0, 2.0, 10.0}) {
        const PowerBudget b{rho, beta};
        CHECK(std::abs(u_siso(law, b) - u_siso_numeric(law, b).value) <= 1e-10);
      }
    }
  }
}

TEST_CASE("large-beta limit") {
  const auto gm = ScalarFadingSpec::gauss_markov(0.9);
  const double limit = 1.0 - i_of_rho(gm, 1.0) / 1.0;
  double prev = INFINITY;
  for (double beta : {10.0, 100.0, 1e3, 1e4}) {
    const double gap = std::abs(beta * u_siso(gm, {1.0, beta}) - limit);
    CHECK(gap < prev);
    prev = gap;
  }
  CHECK(prev < 1e-3 * limit);
}

TEST_CASE("monotone in rho and beta") {
  const auto gm = ScalarFadingSpec::gauss_markov(0.8);
  const auto m = MimoFadingSpec::transmit_separable({1.0, 0.6}, {gm, ScalarFadingSpec::gauss_markov(0.4)});
  double prev_s = 0.0, prev_ms = 0.0, prev_mi = 0.0;
  for (double rho : {0.01, 0.1, 1.0, 10.0}) {
    const PowerBudget b{rho, 2.0};
    const double s = u_siso(gm, b), ms = u_mimo_sum(m, b).value, mi = u_mimo_individual(m, b).value;
    CHECK(s >= prev_s);
    CHECK(ms >= prev_ms - 1e-14);
    CHECK(mi >= prev_mi - 1e-14);
    prev_s = s;
    prev_ms = ms;
    prev_mi = mi;
  }
  double last_s = INFINITY, last_mi = INFINITY;
  for (double beta : {1.0, 2.0, 5.0}) {
    const PowerBudget b{1.0, beta};
    const double s = u_siso(gm, b), mi = u_mimo_individual(m, b).value;
    CHECK(s <= last_s);
    CHECK(mi <= last_mi + 1e-14);
    last_s = s;
    last_mi = mi;
  }
}

TEST_CASE("MIMO bounds reduce to the SISO bound") {
  for (const auto& law : {ScalarFadingSpec::memoryless(), ScalarFadingSpec::gauss_markov(0.5), ScalarFadingSpec::gauss_markov(0.99)}) {
    const auto m = MimoFadingSpec::from_entries({{law}});
    for (const PowerBudget b : {PowerBudget{0.01, 1.0}, PowerBudget{1.0, 1.0}, PowerBudget{3.0, 4.0}}) {
      const double s = u_siso(law, b);
      CHECK(std::abs(u_mimo_sum(m, b).value - s) <= 1e-12);
      CHECK(std::abs(u_mimo_individual(m, b, std::vector<double>{1.0}).value - s) <= 1e-12);
    }
  }
}

TEST_CASE("identical transmit antennas under a sum constraint") {
  const auto gm = ScalarFadingSpec::gauss_markov(0.9);
  const auto m = MimoFadingSpec::from_entries({{gm, gm}});
  const PowerBudget b{1.0, 2.0};
  const auto r = u_mimo_sum(m, b);
  CHECK(r.value == doctest::Approx(u_siso(gm, b)).epsilon(1e-10));
  CHECK(r.a[0] + r.a[1] == doctest::Approx(u_siso_detail(gm, b).zeta).epsilon(1e-6));
}

TEST_CASE("two receive antennas, one transmit antenna") {
  const auto mem = ScalarFadingSpec::memoryless();
  const auto m = MimoFadingSpec::from_entries({{mem}, {mem}});
  // 2 log(1 + a) - 2 a log 2 peaks at a = 1/log 2 - 1.
  const double a = 1.0 / std::log(2.0) - 1.0;
  const double want = 2.0 * (std::log1p(a) - a * std::log(2.0));
  CHECK(u_mimo_sum(m, {1.0, 1.0}).value == doctest::Approx(want).epsilon(1e-12));
  CHECK(u_mimo_sum(m, {1.0, 1.0}).value >= u_siso(mem, {1.0, 1.0}));
}

TEST_CASE("zero noise split removes the penalty") {
  const auto gm = ScalarFadingSpec::gauss_markov(0.7);
  const auto m = MimoFadingSpec::transmit_separable({1.0, 0.5}, {gm, gm});
  const double rho = 0.8;
  const auto r = u_mimo_individual(m, {rho, 1.0}, std::vector<double>{0.0, 0.0});
  // All mass on the all-on pattern: each row sees log(1 + rho (1 + 0.5)).
  CHECK(r.value == doctest::Approx(2.0 * std::log1p(rho * 1.5)).epsilon(1e-10));
  CHECK(r.p.back() == doctest::Approx(1.0).epsilon(1e-8));
  const auto capped = u_mimo_individual(m, {rho, 2.0}, std::vector<double>{0.0, 0.0});
  CHECK(capped.value == doctest::Approx(2.0 * std::log1p(rho * 1.5 / 2.0)).epsilon(1e-8));
}

TEST_CASE("noise split validation") {
  const auto m = MimoFadingSpec::from_entries({{ScalarFadingSpec::memoryless(), ScalarFadingSpec::memoryless()}});
  CHECK_THROWS_AS(u_mimo_individual(m, {1.0, 1.0}, std::vector<double>{0.7, 0.7}), SpecError);
  CHECK_THROWS_AS(u_mimo_individual(m, {1.0, 1.0}, std::vector<double>{1.0}), SpecError);
  CHECK(default_noise_split(4) == std::vector<double>(4, 0.25));
}

TEST_CASE("individual bound expands to the second-order upper bound only with the minus sign") {
  const auto gm = ScalarFadingSpec::gauss_markov(0.5);
  const auto m = MimoFadingSpec::from_entries({{gm, gm}});
  const double target = c_mimo_individual_box(m, 1.0).upper;
  const double rho = 1e-3;
  const auto r = u_mimo_individual(m, {rho, 1.0});
  CHECK(std::abs(r.value / (rho * rho) - target) <= 0.05 * target);

  // Same p with the two log terms added: the ratio blows up like 1/rho.
  const std::vector<double> d = r.d;
  double plus = 0.0;
  double m_r = 0.0;
  for (std::size_t b = 0; b < r.p.size(); ++b) {
    double s = 0.0, v = 0.0;
    for (int t = 0; t < 2; ++t) {
      if (!((b >> t) & 1U)) continue;
      s += 1.0;
      v += sigma2_of_rho(gm, rho / d[static_cast<std::size_t>(t)]).sigma2;
    }
    m_r += r.p[b] * s;
    plus += r.p[b] * std::log1p(rho * v);
  }
  plus += std::log1p(rho * m_r);
  CHECK(plus / (rho * rho) > 100.0 * target);
}
