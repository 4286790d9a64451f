#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include <gammoments/bernstein.hpp>

#include "oracles/oracle_values.hpp"

using namespace gammoments;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("triplet evaluation") {
  BernsteinFunction phi;
  phi.levy_density = [](double x) { return std::exp(-x); };
  CHECK_THAT(evaluate(phi, 1.0), WithinAbs(0.5, 1e-12));
  CHECK_THAT(evaluate(phi, 3.0), WithinAbs(0.75, 1e-12));
  CHECK_THROWS_AS(evaluate(phi, -1.0), domain_error);
}

TEST_CASE("growth_of_phi") {
  const auto id = growth_of_phi([](double l) { return l; });
  CHECK_THAT(id.g_hi, WithinAbs(1.0, 0.02));
  CHECK_THAT(id.g_lo, WithinAbs(1.0, 0.02));
  CHECK_THAT(growth_of_phi([](double l) { return l / (1 + l); }).g_hi, WithinAbs(0.0, 0.02));
  CHECK_THAT(growth_of_phi([](double l) { return std::sqrt(l); }).g_hi, WithinAbs(0.5, 0.02));
}

TEST_CASE("beta_bernstein") {
  const auto u = beta_bernstein(1, 1, 1);
  REQUIRE(u.is_bernstein);
  CHECK_THAT(u.phi->killing, WithinAbs(0.0, 1e-15));
  for (int n = 1; n <= 6; ++n) CHECK_THAT(evaluate_triplet(*u.phi, n), WithinRel(n / (n + 1.0), 1e-8));
  CHECK_FALSE(beta_bernstein(0.5, 1.5, 1).is_bernstein);
  const auto v = beta_bernstein(2, 3, 1);
  REQUIRE(v.is_bernstein);
  CHECK_THAT(v.phi->killing, WithinAbs(0.25, 1e-14));
  CHECK_THAT(v.phi->levy_density(1.0), WithinRel(3.0 * std::exp(-4.0), 1e-12));
  for (int n = 1; n <= 12; ++n) CHECK_THAT(evaluate_triplet(*v.phi, n), WithinRel((n + 1.0) / (n + 4.0), 1e-8));
  CHECK(check_invariants(*v.phi) < 1e-7);
}

TEST_CASE("rho forms against the 2F1 oracle") {
  for (std::size_t i = 0; i < oracle::rho_v.size(); ++i) {
    CHECK_THAT(beta_rho(oracle::rho_a[i], oracle::rho_b[i], oracle::rho_s[i], oracle::rho_x[i]),
               WithinRel(oracle::rho_v[i], 1e-11));
  }
  const auto [f1, f2] = rho_crosscheck(1, 2, 0.5, 0.5);
  CHECK_THAT(f1, WithinRel(f2, 1e-10));
  const auto [g1, g2] = rho_crosscheck(1, 1, 1, 2);
  CHECK_THAT(g1, WithinRel(std::exp(-2.0), 1e-12));
  CHECK_THAT(g2, WithinRel(std::exp(-2.0), 1e-12));
}

TEST_CASE("gamma1_bernstein") {
  const auto v = gamma1_bernstein(2, 1);
  REQUIRE(v.is_bernstein);
  CHECK_THAT(evaluate(*v.phi, 3.0), WithinAbs(4.0, 1e-14));
  const auto h = gamma1_bernstein(1, 0.5);
  REQUIRE(h.is_bernstein);
  CHECK_THAT(h.phi->killing, WithinRel(oracle::gamma1_half_killing, 1e-12));
  double prod = 1.0;
  for (int n = 1; n <= 10; ++n) {
    prod *= evaluate_triplet(*h.phi, n);
    CHECK_THAT(prod, WithinRel(oracle::gamma_one_plus_half_n[n - 1], 1e-7));
  }
  CHECK_FALSE(gamma1_bernstein(0.5, 0.8).is_bernstein);
}

TEST_CASE("catalan exponent") {
  CHECK_THAT(catalan_phi(3, false), WithinAbs(2.5, 1e-15));
  CHECK_THAT(catalan_phi(0.25, false), WithinAbs(-0.8, 1e-15));
  CHECK_THAT(catalan_phi(1, false) * catalan_phi(2, false) * catalan_phi(3, false), WithinAbs(5.0, 1e-13));
  CHECK_THAT(catalan_phi(0.5, true) * catalan_phi(1.5, true), WithinAbs(2.0, 1e-14));
  CHECK_FALSE(catalan_bernstein(false).is_bernstein);
  REQUIRE(catalan_bernstein(false).counterexample_point);
  CHECK(*catalan_bernstein(false).counterexample_point < 0.5);
  const auto r = factorization_check([](double l) { return catalan_phi(l, false); }, raney_seq(2, 1), 25, 1e-12);
  CHECK(r.pass);
}

TEST_CASE("rgstable_bernstein") {
  const auto v = rgstable_bernstein(1, 2);
  REQUIRE(v.is_bernstein);
  CHECK_THAT(evaluate(*v.phi, 4.0), WithinAbs(4.0, 1e-14));
  CHECK(factorization_check(*v.phi, factorial_power(1), 20, 1e-12).pass);
  const auto w = rgstable_bernstein(2, 4);
  REQUIRE(w.is_bernstein);
  CHECK_THAT(w.phi->killing, WithinRel(2.0 / std::sqrt(std::numbers::pi), 1e-12));
  CHECK_THAT(w.phi->levy_density(1.0), WithinRel(2.0 / std::sqrt(std::numbers::pi) * std::exp(-2.0) * std::pow(-std::expm1(-2.0), -1.5), 1e-12));
  CHECK(check_invariants(*w.phi) < 1e-7);
  CHECK_FALSE(rgstable_bernstein(1, 3).is_bernstein);
  // a = 1: the exponent factorizes the sequence
  const auto u = rgstable_bernstein(1, 1.5);
  REQUIRE(u.is_bernstein);
  CHECK(factorization_check(*u.phi, rgstable_seq(1, 1.5), 12, 1e-6).pass);
}

TEST_CASE("remainder_phi") {
  for (std::size_t i = 0; i < oracle::remainder_lambda.size(); ++i) {
    const auto r = remainder_phi(0.5, oracle::remainder_lambda[i]);
    CHECK_THAT(r.value, WithinRel(oracle::remainder_half_v[i], 1e-12));
    REQUIRE(r.representation_value);
    CHECK_THAT(*r.representation_value, WithinAbs(r.value, 1e-7));
  }
  const auto neg = remainder_phi(2, 0.25);
  CHECK_THAT(neg.value, WithinAbs(-4.0, 1e-13));
  CHECK(neg.negative);
  CHECK_THAT(remainder_phi(2, 1).value, WithinAbs(2.0, 1e-14));
  CHECK_FALSE(remainder_phi(2, 1).negative);
  const auto probe = remainder_probe(0.5, {0.5, 1, 2, 4, 8});
  CHECK(probe.positive);
  CHECK(probe.non_decreasing);
  CHECK(probe.log_cm_ok);
}

TEST_CASE("self-decomposability and log-Phi representation") {
  SpectralData one;
  one.eta = [](double) { return 1.0; };
  const auto r = selfdecomp_check(one, {0.5, 1, 2, 4});
  REQUIRE(r.kappa_from_eta);
  CHECK_THAT((*r.kappa_from_eta)[1], WithinAbs(1.0, 1e-9));
  CHECK(r.ratio_monotone);
  SpectralData ind;
  ind.eta = [](double t) { return t < 1.0 ? 1.0 : 0.0; };
  const auto q = selfdecomp_check(ind, {0.5, 1, 2});
  CHECK_THAT((*q.kappa_from_eta)[2], WithinAbs(-std::expm1(-2.0), 1e-8));
  CHECK(q.ratio_monotone);
  CHECK(logphi_representation_check([](double l) { return l; }, [](double) { return 1.0; }, 2.0) <= 1e-8);
}

TEST_CASE("shape_check") {
  const auto v = beta_bernstein(2, 3, 1);
  const auto s = shape_check(*v.phi, {0.5, 1, 2, 3, 5, 8});
  CHECK(s.non_decreasing);
  CHECK(s.concave);
}
