#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include <gammoments/diagnostics.hpp>

using namespace gammoments;
using Catch::Matchers::WithinAbs;

namespace {

const DensityTable& f3_table() {
  static const DensityTable tab =
      mellin_density(DensityTarget::L, 3, default_density_grid(DensityTarget::L, 3), std::nullopt, 1e-12, 4);
  return tab;
}

}  // namespace

TEST_CASE("carleman") {
  const auto f2 = carleman(factorial_power(2));
  CHECK(f2.satisfied);
  CHECK(f2.outcome == "divergent");
  CHECK_THAT(f2.numbers.at("g"), WithinAbs(2.0, 0.05));
  REQUIRE(f2.numbers.count("log_correction_c"));
  CHECK(f2.numbers.at("log_correction_c") < 0.75);
  const auto f3 = carleman(factorial_power(3));
  CHECK_FALSE(f3.satisfied);
  CHECK(f3.outcome == "convergent");
  CHECK(carleman(gamma_order1(1, 3)).outcome == "convergent");
  CHECK(carleman(factorial_power(1)).outcome == "divergent");
  CHECK_THROWS_AS(carleman(factorial_power(1), 32), domain_error);
}

TEST_CASE("lin condition on closed forms") {
  const auto grid = geometric_grid(0.5, 20, 200);
  CHECK(lin_condition_density(sample([](double x) { return std::exp(-x); }, grid), 1.0).satisfied);
  CHECK(lin_condition_density(sample([](double x) { return std::exp(-x * x); }, grid), 1.0).satisfied);
  CHECK_FALSE(lin_condition_density(sample([](double x) { return 1.0 / (1.0 + x * x); }, grid), 1.0).satisfied);
  CHECK_THROWS_AS(lin_condition_density(sample([](double x) { return x < 5 ? 1.0 : 0.0; }, grid), 1.0), domain_error);
}

TEST_CASE("lin condition on f_3") {
  const auto e = lin_condition_density(f3_table(), 2.0);
  CHECK(e.satisfied);
}

TEST_CASE("krein") {
  const auto grid = geometric_grid(1e-2, 500, 400);
  const auto ex = krein_check(sample([](double x) { return std::exp(-x); }, grid), 1);
  CHECK_FALSE(ex.satisfied);
  CHECK(ex.outcome == "infinite");
  CHECK_THAT(ex.numbers.at("tail_p"), WithinAbs(1.0, 0.02));
  auto lognormal = [](double x) {
    const double l = std::log(x);
    return std::exp(-0.5 * l * l) / (x * std::sqrt(2.0 * std::numbers::pi));
  };
  const auto ln = krein_check(sample(lognormal, geometric_grid(1e-2, 1e6, 400)), 1);
  CHECK(ln.satisfied);
  CHECK(ln.outcome == "finite");
  const auto f3 = krein_check(f3_table(), 1);
  CHECK(f3.satisfied);
  CHECK_THAT(f3.numbers.at("tail_p"), WithinAbs(1.0 / 3.0, 0.05));
  const auto bumpy = krein_check(sample([](double x) { return std::exp(-x) * (1.0 + 0.999 * std::sin(x)); }, grid), 1);
  CHECK(bumpy.outcome.rfind("inconclusive", 0) == 0);
}

TEST_CASE("closed-form rules") {
  CHECK(classify_factorial(1).verdict == Verdict::MD);
  CHECK(classify_factorial(2).verdict == Verdict::MD);
  CHECK(classify_factorial(2.5).verdict == Verdict::MI);
  CHECK(classify_factorial(3).verdict == Verdict::MI);
  CHECK(classify_gamma1(1, 1, 2).verdict == Verdict::MD);
  CHECK(classify_gamma1(1, 3, 1).verdict == Verdict::MI);
  CHECK(classify_rgstable(1, 2).verdict == Verdict::MD);
  CHECK(classify_rgstable(2, 5).verdict == Verdict::MD);
  CHECK(classify_rgstable(1, 3).verdict == Verdict::MD);
  CHECK(classify_rgstable(1, 4).verdict == Verdict::MI);
}

TEST_CASE("remainder thresholds") {
  auto id = [](double l) { return l; };
  CHECK(classify_remainder(id, 1.5, true).verdict == Verdict::MD);
  CHECK(classify_remainder(id, 2, true).verdict == Verdict::MD);
  CHECK(classify_remainder(id, 3, true).verdict == Verdict::MI);
  CHECK(classify_remainder(id, 3, std::nullopt).verdict == Verdict::INCONCLUSIVE);
  ClassifyInput in;
  in.family = "remainder";
  in.params = {{"t", 3}};
  in.phi = id;
  in.selfdecomp = true;
  CHECK(classify(in).verdict == Verdict::MI);
  in.family = "nope";
  CHECK_THROWS_AS(classify(in), domain_error);
}

TEST_CASE("generic pipeline agrees off the threshold") {
  CHECK(classify_sequence(factorial_power(1), std::nullopt).verdict == Verdict::MD);
  CHECK(classify_sequence(factorial_power(3), sample(f3_table()), 2.0).verdict == Verdict::MI);
  CHECK(classify_sequence(factorial_power(3), std::nullopt).verdict == Verdict::INCONCLUSIVE);
}

TEST_CASE("prop5") {
  const auto a = prop5_equivalence(factorial_power(1), 2);
  CHECK(a.match);
  CHECK(a.direct == SeriesClass::divergent);
  const auto b = prop5_equivalence(gamma_order1(1, 1), 3);
  CHECK(b.match);
  CHECK(b.direct == SeriesClass::convergent);
  const auto c = prop5_equivalence(beta_power(1, 1, 1), 1);
  CHECK(c.match);
  CHECK(c.direct_partial_sum == c.sampled_partial_sum);
}
