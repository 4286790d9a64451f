#include <catch_amalgamated.hpp>

#include <cmath>
#include <limits>

#include <gammoments/idlab.hpp>

#include "oracles/oracle_values.hpp"

using namespace gammoments;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("Hilbert matrix") {
  const auto r = hankel_psd(beta_power(1, 1, 1), 3, 0);
  CHECK_THAT(r.raw_min_eigenvalues.back(), WithinRel(oracle::hilbert3_min_eig, 1e-10));
  CHECK(r.all_psd());
  CHECK_THROWS_AS(hankel_psd(ones(), 13, 0), domain_error);
  CHECK_THROWS_AS(hankel_psd(ones(), 3, 2), domain_error);
}

TEST_CASE("exponential moments are psd") {
  for (int shift : {0, 1}) CHECK(hankel_psd(factorial_power(1), 5, shift).all_psd());
}

TEST_CASE("two-atom sequence at t = 0.1 matches the eigen oracle") {
  const auto seq = from_log_function("two_atom", {}, [](std::size_t n) {
    return std::log(0.5 * (1.0 + std::pow(3.0, static_cast<double>(n))));
  });
  const auto reps = id_probe(seq, {0.1}, 5);
  REQUIRE(reps.size() == 2);
  for (const auto& r : reps) {
    const auto& want = r.shift == 0 ? oracle::two_atom_shift0 : oracle::two_atom_shift1;
    for (std::size_t k = 0; k < 5; ++k) {
      CHECK_THAT(r.min_eigenvalues[k], WithinAbs(want[k], 1e-10));
      CHECK(r.psd[k] == (want[k] >= -1e-9));
    }
  }
}

TEST_CASE("id probes of families proved ID") {
  const std::vector<double> ts{0.25, 0.5, 1.5};
  CHECK(id_probe_passes(id_probe(beta_power(1, 1, 1), ts, 5)));
  CHECK(id_probe_passes(id_probe(factorial_power(2), {0.5}, 5)));
  CHECK(id_probe_passes(id_probe(fuss_catalan_seq(2), ts, 5)));
}

TEST_CASE("Hankel verdict is invariant under rescaling", "[property]") {
  const auto base = mt_seq(2);
  for (double c : {0.1, 10.0}) {
    for (int shift : {0, 1}) {
      const auto a = hankel_psd(base, 6, shift);
      const auto b = hankel_psd(rescale(base, c), 6, shift);
      CHECK(a.psd == b.psd);
      for (std::size_t k = 0; k < a.min_eigenvalues.size(); ++k) {
        CHECK_THAT(b.min_eigenvalues[k], WithinAbs(a.min_eigenvalues[k], 1e-12));
      }
    }
  }
}

TEST_CASE("Levy identities") {
  for (double s : {-0.5, 0.5, 1.0, 2.0, 5.0}) {
    CHECK(levy_identity_check(LevyIdentity::malmsten_gamma, {}, s) <= 1e-8);
  }
  CHECK(levy_identity_check(LevyIdentity::malmsten_beta, {{"a", 1}, {"b", 1}, {"s", 1}}, 1.0) <= 1e-8);
  CHECK(levy_identity_check(LevyIdentity::mt_exponent, {{"t", 2}}, 1.0) <= 1e-8);
  CHECK(levy_identity_check(LevyIdentity::logphi_repr, {{"c", 1}, {"alpha", 0.5}}, 3.0) <= 1e-8);
  CHECK_THROWS_AS(parse_identity("nope"), domain_error);
  CHECK_THROWS_AS(levy_identity_check(LevyIdentity::malmsten_gamma, {}, -1.5), domain_error);
}

TEST_CASE("KP16") {
  const auto u = kp16_check(GammaRatioSpec{{{1, 1}}, {{2, 1}}});
  CHECK(u.verdict);
  CHECK_THAT(u.support_sup, WithinAbs(1.0, 1e-14));
  const auto b = kp16_check(GammaRatioSpec{{{0.5, 1}}, {{2, 1}}});
  CHECK(b.verdict);
  CHECK_THAT(b.support_sup, WithinAbs(1.0, 1e-14));
  const auto h = kp16_check(GammaRatioSpec{{{1, 1}}, {{1, 0.5}, {1, 0.5}}});
  CHECK(h.sum_balanced);
  CHECK_THAT(h.support_sup, WithinRel(2.0, 1e-13));
  CHECK_THAT(h.kernel_min, WithinAbs(std::min(oracle::kp16_half_kernel_min, h.limit_at_zero), 1e-12));
  CHECK_FALSE(kp16_check(GammaRatioSpec{{{1, 1}}, {{2, 2}}}).verdict);
}

TEST_CASE("support endpoint") {
  CHECK_THAT(support_endpoint(beta_power(1, 1, 1)), WithinRel(1.0, 0.01));
  CHECK_THAT(support_endpoint(mt_seq(0.5)), WithinRel(std::sqrt(2.0), 0.01));
  CHECK_THAT(support_endpoint(mt_seq(2)), WithinRel(4.0, 0.01));
  CHECK(std::isinf(support_endpoint(factorial_power(1))));
}
