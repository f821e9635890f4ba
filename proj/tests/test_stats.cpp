#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "spkl/error.hpp"
#include "spkl/random.hpp"
#include "spkl/stats.hpp"

using namespace spkl;
using Vec = std::vector<double>;

TEST_CASE("ks statistic examples") {
  const Vec x{1, 2, 3, 4};
  CHECK(ks_two_sample(x, x).statistic == 0.0);
  CHECK(ks_two_sample(x, x).p_value == doctest::Approx(1.0));
  CHECK(ks_two_sample(Vec{0, 0, 0}, Vec{1, 1, 1}).statistic == 1.0);
  CHECK(ks_two_sample(x, Vec{1.5, 2.5, 3.5, 4.5}).statistic == 0.25);
  CHECK_THROWS_AS(ks_two_sample(Vec{}, x), DataError);
}

TEST_CASE("ks statistic matches the ECDF oracle, with ties") {
  Rng rng(77);
  for (int trial = 0; trial < 200; ++trial) {
    Vec x(1 + uniform_index(rng, 12)), y(1 + uniform_index(rng, 12));
    // Values on a coarse grid so ties within and across samples are common.
    for (auto& v : x) v = static_cast<double>(uniform_index(rng, 6));
    for (auto& v : y) v = static_cast<double>(uniform_index(rng, 6)) + (trial % 2 ? 0.5 : 0.0);
    CHECK(ks_two_sample(x, y).statistic == doctest::Approx(oracle::ks_statistic(x, y)).epsilon(1e-12));
  }
}

TEST_CASE("ks statistic is invariant under increasing transforms") {
  Rng rng(8);
  for (int trial = 0; trial < 50; ++trial) {
    Vec x(15), y(20);
    for (auto& v : x) v = standard_normal(rng);
    for (auto& v : y) v = standard_normal(rng) + 0.3;
    Vec tx = x, ty = y;
    for (auto& v : tx) v = std::exp(v) * 3 + 1;
    for (auto& v : ty) v = std::exp(v) * 3 + 1;
    CHECK(ks_two_sample(x, y).statistic == ks_two_sample(tx, ty).statistic);
  }
}

TEST_CASE("exact ks p-value matches enumeration") {
  for (std::size_t n = 1; n <= 7; ++n) {
    for (std::size_t m = 1; m <= 7; ++m) {
      for (double d : {0.2, 1.0 / 3.0, 0.5, 0.75, 1.0}) {
        CAPTURE(n);
        CAPTURE(m);
        CAPTURE(d);
        CHECK(ks_exact_p_value(n, m, d) == doctest::Approx(oracle::ks_exact_enumerated(n, m, d)).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("asymptotic ks p-value tracks the exact distribution for moderate samples") {
  // n = m = 60: the asymptotic form should be within a few hundredths.
  for (double d : {0.15, 0.2, 0.25, 0.3}) {
    const double exact = ks_exact_p_value(60, 60, d);
    const double asym = kolmogorov_survival(std::sqrt(30.0) * d);
    CHECK(std::abs(exact - asym) < 0.03);
  }
  CHECK(kolmogorov_survival(0.0) == 1.0);
  CHECK(kolmogorov_survival(10.0) < 1e-80);
  // Both series branches agree where they meet.
  CHECK(kolmogorov_survival(1.18 - 1e-9) == doctest::Approx(kolmogorov_survival(1.18 + 1e-9)).epsilon(1e-7));
  CHECK(kolmogorov_survival(1.3580986393225505) == doctest::Approx(0.05).epsilon(1e-6));
}

TEST_CASE("t-test examples") {
  const auto r = t_test(Vec{1, 2, 3}, Vec{2, 3, 4});
  CHECK(r.statistic == doctest::Approx(-1.224745).epsilon(1e-6));
  CHECK(r.df == 4.0);
  const auto same = t_test(Vec{1, 2, 3}, Vec{1, 2, 3});
  CHECK(same.statistic == 0.0);
  CHECK(same.p_value == doctest::Approx(1.0));
  const auto swapped = t_test(Vec{2, 3, 4}, Vec{1, 2, 3});
  CHECK(swapped.statistic == -r.statistic);
  CHECK(swapped.p_value == r.p_value);
  CHECK(t_test(Vec{5, 5}, Vec{5, 5}).statistic == 0.0);
  CHECK_THROWS_AS(t_test(Vec{5, 5}, Vec{6, 6}), DataError);
  CHECK_THROWS_AS(t_test(Vec{5}, Vec{6, 6}), DataError);
}

TEST_CASE("t-test matches the pooled oracle") {
  Rng rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    Vec x(2 + uniform_index(rng, 20)), y(2 + uniform_index(rng, 20));
    for (auto& v : x) v = standard_normal(rng);
    for (auto& v : y) v = standard_normal(rng) * 2 + 0.5;
    const auto r = t_test(x, y);
    const auto o = oracle::pooled_t(x, y);
    CHECK(r.statistic == doctest::Approx(o.t).epsilon(1e-9));
    CHECK(r.df == o.df);
    if (trial < 20) CHECK(r.p_value == doctest::Approx(oracle::t_two_sided_p(o.t, o.df)).epsilon(1e-6));
  }
}

TEST_CASE("welch variant") {
  const auto r = t_test(Vec{1, 2, 3, 4}, Vec{2, 4, 6, 8, 10}, TTestVariant::Welch);
  // Hand evaluation: var 5/3 and 10; se^2 = 5/12 + 2; t = (2.5 - 6)/sqrt(29/12).
  CHECK(r.statistic == doctest::Approx(-3.5 / std::sqrt(29.0 / 12.0)).epsilon(1e-12));
  const double a = 5.0 / 12.0, b = 2.0;
  CHECK(r.df == doctest::Approx((a + b) * (a + b) / (a * a / 3 + b * b / 4)).epsilon(1e-12));
}

TEST_CASE("chi-square goodness of fit") {
  const auto r = chi_square_gof(Vec{10, 10, 10, 10}, Vec{0.25, 0.25, 0.25, 0.25});
  CHECK(r.statistic == 0.0);
  CHECK(r.p_value == doctest::Approx(1.0));
  CHECK(r.df == 3.0);
  // 2 cells, statistic 4 with df 1: p = erfc(sqrt(2)).
  const auto s = chi_square_gof(Vec{60, 40}, Vec{0.5, 0.5});
  CHECK(s.statistic == doctest::Approx(4.0));
  CHECK(s.p_value == doctest::Approx(std::erfc(std::sqrt(2.0))).epsilon(1e-12));
  CHECK_THROWS_AS(chi_square_gof(Vec{1}, Vec{1}), DataError);
}

TEST_CASE("mean and sample standard deviation") {
  CHECK(mean(Vec{1, 2, 3, 4}) == 2.5);
  CHECK(stddev(Vec{1, 2, 3, 4}) == doctest::Approx(std::sqrt(5.0 / 3.0)).epsilon(1e-15));
  CHECK(stddev(Vec{7}) == 0.0);
}
