#include <catch_amalgamated.hpp>

#include <cmath>

#include <gammoments/momentseq.hpp>

using namespace gammoments;
using Catch::Matchers::WithinAbs;

TEST_CASE("factorial_power") {
  CHECK_THAT(factorial_power(2).eval(3), WithinAbs(std::log(36.0), 1e-14));
  CHECK(factorial_power(1).eval(0) == 0.0);
  CHECK_THAT(factorial_power(0.5).eval(4), WithinAbs(1.589027, 1e-6));
  CHECK_THROWS_AS(factorial_power(0.0), domain_error);
}

TEST_CASE("bernstein_rising") {
  CHECK_THAT(bernstein_rising([](double l) { return l; }, 1.0).eval(4), WithinAbs(std::log(24.0), 1e-14));
  CHECK_THAT(bernstein_rising([](double l) { return l; }, 2.0).eval(2), WithinAbs(std::log(4.0), 1e-14));
  CHECK_THAT(bernstein_rising([](double l) { return l / (1 + l); }, 1.0).eval(2), WithinAbs(std::log(1.0 / 3.0), 1e-14));
  CHECK_THROWS_AS(bernstein_rising([](double l) { return l - 1.5; }, 1.0).eval(2), domain_error);
}

TEST_CASE("beta and gamma families") {
  CHECK_THAT(beta_power(1, 1, 1).eval(3), WithinAbs(std::log(0.25), 1e-14));
  CHECK_THAT(beta_power(0.5, 1.5, 1).eval(3), WithinAbs(std::log(5.0 / 64.0), 1e-14));
  CHECK_THAT(beta_power(2, 1, 1).eval(1), WithinAbs(std::log(2.0 / 3.0), 1e-14));
  CHECK_THAT(gamma_order1(0.5, 0.5).eval(2), WithinAbs(std::log(0.5), 1e-14));
}

TEST_CASE("binomial, raney, fuss-catalan") {
  CHECK_THAT(binomial_seq(2, 0).eval(3), WithinAbs(std::log(20.0), 1e-13));
  CHECK_THAT(raney_seq(2, 1).eval(3), WithinAbs(std::log(5.0), 1e-13));
  CHECK_THAT(fuss_catalan_seq(2).eval(2), WithinAbs(std::log(3.0), 1e-13));
  CHECK_THROWS_AS(binomial_seq(0.5, 0), domain_error);
  CHECK_THROWS_AS(binomial_seq(2, 1.5), domain_error);
  CHECK_THROWS_AS(raney_seq(2, 3), domain_error);
  CHECK_THROWS_AS(fuss_catalan_seq(1.5), domain_error);
  // 1/(1 + kn) times C((k+1)n, n)
  const auto prod = combine_product(
      from_log_function("inv", {}, [](std::size_t n) { return -std::log1p(2.0 * static_cast<double>(n)); }),
      binomial_seq(3, 0));
  CHECK_THAT(prod.eval(2), WithinAbs(fuss_catalan_seq(2).eval(2), 1e-13));
}

TEST_CASE("gamma ratio, mt and rgstable") {
  GammaRatioSpec uni{{{1, 1}}, {{2, 1}}};
  CHECK_THAT(gamma_ratio_seq(uni).eval(3), WithinAbs(std::log(0.25), 1e-14));
  GammaRatioSpec half{{{0.5, 1}}, {{2, 1}}};
  CHECK_THAT(gamma_ratio_seq(half).eval(1), WithinAbs(std::log(0.25), 1e-14));
  CHECK_THROWS_AS(gamma_ratio_seq(GammaRatioSpec{{{-1, 1}}, {}}), domain_error);
  CHECK_THAT(mt_seq(0.5).eval(2), WithinAbs(0.346574, 1e-6));
  CHECK_THAT(mt_seq(2).eval(2), WithinAbs(std::log(6.0), 1e-14));
  CHECK_THAT(rgstable_seq(1, 2).eval(3), WithinAbs(std::log(6.0), 1e-14));
  CHECK_THAT(rgstable_seq(2, 3).eval(1), WithinAbs(std::log(1.253314), 1e-6));
  CHECK_THROWS_AS(rgstable_seq(2, 1), domain_error);
}

TEST_CASE("from_values") {
  const auto s = from_values({1.0, 0.5, 1.0 / 3.0});
  CHECK_THAT(s.eval(2), WithinAbs(std::log(1.0 / 3.0), 1e-15));
  CHECK_THROWS_AS(s.eval(3), domain_error);
  CHECK_THROWS_AS(from_values({2.0}), domain_error);
}

TEST_CASE("growth_profile") {
  const auto f2 = growth_profile(factorial_power(2));
  CHECK_THAT(f2.g_hi, WithinAbs(2.0, 0.02));
  CHECK_THAT(f2.g_lo, WithinAbs(2.0, 0.02));
  REQUIRE(f2.c_hat);
  CHECK_THAT(*f2.c_hat, WithinAbs(std::exp(-1.0), 0.02 * std::exp(-1.0)));
  CHECK(growth_profile(beta_power(1, 1, 1)).g_hi < 0.02);
  const auto rg = growth_profile(rgstable_seq(1, 4));
  CHECK_THAT(0.5 * (rg.g_hi + rg.g_lo), WithinAbs(3.0, 0.05));
  CHECK(rg.g_lo <= rg.g_hi);
  CHECK_THROWS_AS(growth_profile(ones(), 8), domain_error);
}
