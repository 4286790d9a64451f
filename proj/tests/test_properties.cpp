#include <catch_amalgamated.hpp>

#include <gammoments/gammoments.hpp>

using namespace gammoments;

TEST_CASE("carleman is invariant under geometric rescaling") {
  for (const auto& seq : {factorial_power(1), factorial_power(2), factorial_power(3), gamma_order1(1, 3), mt_seq(2)}) {
    const auto base = carleman(seq);
    for (double c : {0.1, 10.0}) CHECK(carleman(rescale(seq, c)).outcome == base.outcome);
  }
}

TEST_CASE("remainder classification is monotone in t") {
  const std::vector<double> ts{0.5, 1.0, 1.5, 1.9, 2.0, 2.1, 2.5, 3.0, 4.0};
  const std::vector<RealFunction> phis{[](double l) { return l; }, [](double l) { return std::sqrt(l); },
                                       [](double l) { return remainder_phi_value(0.5, l); }};
  for (const auto& phi : phis) {
    for (std::optional<bool> flag : {std::optional<bool>(true), std::optional<bool>()}) {
      std::vector<Verdict> vs;
      for (double t : ts) vs.push_back(classify_remainder(phi, t, flag).verdict);
      for (std::size_t i = 0; i < vs.size(); ++i) {
        for (std::size_t j = i + 1; j < vs.size(); ++j) {
          if (vs[i] == Verdict::MI) CHECK(vs[j] == Verdict::MI);
          if (vs[j] == Verdict::MD) CHECK(vs[i] == Verdict::MD);
        }
      }
    }
  }
}

TEST_CASE("prop5 over the families") {
  const std::vector<LogMomentSequence> fams{
      factorial_power(1), factorial_power(2), ones(),          beta_power(1, 1, 1), gamma_order1(1, 1),
      binomial_seq(2, 0), raney_seq(2, 1),    fuss_catalan_seq(2), mt_seq(0.5),       mt_seq(2),
      rgstable_seq(1, 2), rgstable_seq(1, 4)};
  for (const auto& s : fams) {
    for (double t : {0.5, 1.0, 2.0, 3.0}) {
      INFO(s.family() << " t=" << t);
      CHECK(prop5_equivalence(s, t).match);
    }
  }
}

TEST_CASE("generic pipeline agrees with family rules off the threshold") {
  for (double t : {1.0, 3.0}) {
    const auto rule = classify_factorial(t).verdict;
    const auto series = carleman(factorial_power(t));
    CHECK((rule == Verdict::MD) == series.satisfied);
  }
  CHECK(carleman(gamma_order1(1, 3)).outcome == "convergent");
  CHECK(carleman(rgstable_seq(1, 4)).outcome == "convergent");
  CHECK(carleman(rgstable_seq(1, 2)).outcome == "divergent");
}
