#pragma once

// Moment determinacy: Carleman growth with the log-correction refinement at
// g = 2, Lin's condition and a Krein-type integral on sampled densities, the
// closed-form family rules and the 2/l thresholds for remainder laws.

#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gammoments/bernstein.hpp"
#include "gammoments/errors.hpp"
#include "gammoments/meldens.hpp"
#include "gammoments/momentseq.hpp"

namespace gammoments {

enum class Verdict { MD, MI, INCONCLUSIVE };

inline std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::MD: return "MD";
    case Verdict::MI: return "MI";
    case Verdict::INCONCLUSIVE: return "INCONCLUSIVE";
  }
  return "INCONCLUSIVE";
}

enum class Side { MD, MI, none };

inline std::string to_string(Side s) {
  switch (s) {
    case Side::MD: return "MD";
    case Side::MI: return "MI";
    case Side::none: return "none";
  }
  return "none";
}

struct Evidence {
  std::string criterion;
  bool satisfied = false;
  Side side = Side::none;  // the verdict a satisfied record supports
  std::map<std::string, double> numbers;
  std::string outcome;
};

struct DeterminacyVerdict {
  Verdict verdict = Verdict::INCONCLUSIVE;
  std::vector<Evidence> evidence;
  std::vector<std::string> citations;
};

enum class SeriesClass { divergent, convergent, inconclusive };

inline std::string to_string(SeriesClass c) {
  switch (c) {
    case SeriesClass::divergent: return "divergent";
    case SeriesClass::convergent: return "convergent";
    case SeriesClass::inconclusive: return "threshold-inconclusive";
  }
  return "threshold-inconclusive";
}

inline constexpr double carleman_threshold_tolerance = 0.05;
// c' within this distance of 1 is left undecided.
inline constexpr double log_correction_band = 0.25;

struct SampledDensity {
  std::vector<double> x;
  std::vector<double> f;
};

inline SampledDensity sample(const std::function<double(double)>& f, const std::vector<double>& grid) {
  SampledDensity d;
  d.x = grid;
  for (double x : grid) d.f.push_back(f(x));
  return d;
}

inline SampledDensity sample(const DensityTable& tab) { return {tab.grid, tab.values}; }

namespace detail {

struct SeriesReport {
  SeriesClass cls = SeriesClass::inconclusive;
  GrowthProfile growth;
  double g = 0.0;
  std::optional<double> log_correction;
  double partial_sum = 0.0;
};

// Sum_n mu_n^{-1/(2n)} classified through the growth exponent of log mu_n.
inline SeriesReport carleman_series(const LogMomentSequence& seq, std::size_t n_max) {
  if (n_max < 64) throw domain_error("carleman: n_max must be at least 64");
  SeriesReport r;
  r.growth = growth_profile(seq, n_max);
  r.g = 0.5 * (r.growth.g_hi + r.growth.g_lo);
  for (std::size_t n = 1; n <= n_max; ++n) {
    r.partial_sum += std::exp(-seq.eval(n) / (2.0 * static_cast<double>(n)));
  }
  if (r.g < 2.0 - carleman_threshold_tolerance) {
    r.cls = SeriesClass::divergent;
  } else if (r.g > 2.0 + carleman_threshold_tolerance) {
    r.cls = SeriesClass::convergent;
  } else {
    // mu_n^{-1/(2n)} ~ C / (n (log n)^c'): fit log mu_n/(2n) - log n.
    std::vector<double> xs, ys;
    for (std::size_t n : geometric_integers(16, n_max)) {
      const double dn = static_cast<double>(n);
      xs.push_back(dn);
      ys.push_back(seq.eval(n) / (2.0 * dn) - std::log(dn));
    }
    const std::vector<std::function<double(double)>> basis = {
        [](double) { return 1.0; }, [](double n) { return std::log(std::log(n)); }, [](double n) { return 1.0 / n; },
        [](double n) { return std::log(n) / n; }};
    auto [coef, res] = least_squares(xs, ys, basis);
    const double c = coef(1);
    r.log_correction = c;
    if (c < 1.0 - log_correction_band) {
      r.cls = SeriesClass::divergent;
    } else if (c > 1.0 + log_correction_band) {
      r.cls = SeriesClass::convergent;
    } else {
      r.cls = SeriesClass::inconclusive;
    }
  }
  return r;
}

inline Evidence series_evidence(const std::string& name, const SeriesReport& r) {
  Evidence e;
  e.criterion = name;
  e.satisfied = r.cls == SeriesClass::divergent;
  e.side = Side::MD;
  e.outcome = to_string(r.cls);
  e.numbers["g"] = r.g;
  e.numbers["g_hi"] = r.growth.g_hi;
  e.numbers["g_lo"] = r.growth.g_lo;
  e.numbers["partial_sum"] = r.partial_sum;
  if (r.log_correction) e.numbers["log_correction_c"] = *r.log_correction;
  return e;
}

inline Verdict assemble(const std::vector<Evidence>& ev) {
  bool md = false, mi = false;
  for (const auto& e : ev) {
    if (!e.satisfied) continue;
    if (e.side == Side::MD) md = true;
    if (e.side == Side::MI) mi = true;
  }
  if (md && !mi) return Verdict::MD;
  if (mi && !md) return Verdict::MI;
  return Verdict::INCONCLUSIVE;
}

inline DeterminacyVerdict finish(std::vector<Evidence> ev) {
  DeterminacyVerdict v;
  v.verdict = assemble(ev);
  for (const auto& e : ev) {
    if (e.satisfied) v.citations.push_back(e.criterion);
  }
  v.evidence = std::move(ev);
  return v;
}

inline Evidence rule_evidence(const std::string& name, bool md, std::map<std::string, double> numbers,
                              const std::string& rule) {
  Evidence e;
  e.criterion = name;
  e.satisfied = true;
  e.side = md ? Side::MD : Side::MI;
  e.numbers = std::move(numbers);
  e.outcome = rule;
  return e;
}

}  // namespace detail

/// Carleman's criterion for the Stieltjes problem. satisfied means the series
/// sum mu_n^{-1/(2n)} was classified divergent.
inline Evidence carleman(const LogMomentSequence& seq, std::size_t n_max = 256) {
  return detail::series_evidence("carleman", detail::carleman_series(seq, n_max));
}

/// -x f'/f by centered differences on [x_from, end], increasing with slack
/// 1e-8 and growing by more than 1.
inline Evidence lin_condition_density(const SampledDensity& d, double x_from) {
  if (d.x.size() != d.f.size()) throw domain_error("lin_condition_density: x and f differ in length");
  std::vector<std::size_t> idx;
  for (std::size_t i = 1; i + 1 < d.x.size(); ++i) {
    if (d.x[i] >= x_from) idx.push_back(i);
  }
  if (idx.size() < 3) throw domain_error("lin_condition_density: fewer than three interior points beyond x_from");
  std::vector<double> ratio;
  for (std::size_t i : idx) {
    if (!(d.f[i - 1] > 0.0 && d.f[i + 1] > 0.0 && d.f[i] > 0.0)) {
      throw domain_error("lin_condition_density: density touches 0 at x = " + std::to_string(d.x[i]));
    }
    ratio.push_back(-d.x[i] * (std::log(d.f[i + 1]) - std::log(d.f[i - 1])) / (d.x[i + 1] - d.x[i - 1]));
  }
  double worst_drop = 0.0;
  for (std::size_t k = 1; k < ratio.size(); ++k) worst_drop = std::max(worst_drop, ratio[k - 1] - ratio[k]);
  Evidence e;
  e.criterion = "lin";
  e.side = Side::none;
  const bool increasing = worst_drop <= 1e-8;
  const bool unbounded = ratio.back() > ratio.front() + 1.0;
  e.satisfied = increasing && unbounded;
  e.outcome = !increasing ? "not increasing" : (unbounded ? "increasing to infinity" : "increasing but bounded on grid");
  e.numbers["x_from"] = x_from;
  e.numbers["first"] = ratio.front();
  e.numbers["last"] = ratio.back();
  e.numbers["worst_drop"] = worst_drop;
  return e;
}

inline Evidence lin_condition_density(const DensityTable& tab, double x_from) {
  return lin_condition_density(sample(tab), x_from);
}

/// int -log f(x^power) / (1 + x^2) dx: trapezoid over the sampled range in
/// y = x^power, then the tail model -log f(y) ~ k y^p integrated in closed
/// form. Finite means MI-consistent.
inline Evidence krein_check(const SampledDensity& d, double power) {
  detail::require_positive(power, "power", "krein_check");
  if (d.x.size() != d.f.size() || d.x.size() < 4) throw domain_error("krein_check: need at least four samples");
  Evidence e;
  e.criterion = "krein";
  e.side = Side::MI;
  e.numbers["power"] = power;
  const double inv = 1.0 / power;
  auto weight = [&](double y) { return inv * std::pow(y, inv - 1.0) / (1.0 + std::pow(y, 2.0 * inv)); };
  double body = 0.0;
  for (std::size_t i = 0; i + 1 < d.x.size(); ++i) {
    if (!(d.f[i] > 0.0 && d.f[i + 1] > 0.0)) throw domain_error("krein_check: density must be positive where sampled");
    const double g0 = -std::log(d.f[i]) * weight(d.x[i]);
    const double g1 = -std::log(d.f[i + 1]) * weight(d.x[i + 1]);
    body += 0.5 * (g0 + g1) * (d.x[i + 1] - d.x[i]);
  }
  e.numbers["grid_integral"] = body;

  const double top = d.x.back();
  std::vector<double> ly, lh;
  for (std::size_t i = 0; i < d.x.size(); ++i) {
    if (d.x[i] < 0.1 * top) continue;
    const double h = -std::log(d.f[i]);
    if (!(h > 0.0)) {
      e.outcome = "inconclusive: -log f not positive on the last decade";
      return e;
    }
    if (!lh.empty() && !(std::log(h) > lh.back())) {
      e.outcome = "inconclusive: non-monotone tail";
      return e;
    }
    ly.push_back(std::log(d.x[i]));
    lh.push_back(std::log(h));
  }
  if (ly.size() < 3) {
    e.outcome = "inconclusive: fewer than three tail points";
    return e;
  }
  const std::vector<std::function<double(double)>> basis = {[](double) { return 1.0; }, [](double v) { return v; }};
  auto [coef, res] = detail::least_squares(ly, lh, basis);
  const double k = std::exp(coef(0));
  const double p = coef(1);
  e.numbers["tail_k"] = k;
  e.numbers["tail_p"] = p;
  e.numbers["tail_fit_residual"] = res.cwiseAbs().maxCoeff();
  // k y^p (1/power) y^{1/power - 1} y^{-2/power} on (top, inf).
  const double expo = p - inv;
  if (expo < 0.0) {
    const double tail = k * inv * std::pow(top, expo) / -expo;
    e.numbers["tail_integral"] = tail;
    e.numbers["integral"] = body + tail;
    e.satisfied = true;
    e.outcome = "finite";
  } else {
    e.numbers["integral"] = std::numeric_limits<double>::infinity();
    e.outcome = "infinite";
  }
  // Relaxed form: x^2 f(x) >= exp(-k' x^q) on the tail with some q < 1/power.
  if (expo < 0.0) {
    const double q = 0.5 * (p + inv);
    double kq = 0.0;
    for (std::size_t i = 0; i < d.x.size(); ++i) {
      if (d.x[i] < 0.1 * top) continue;
      kq = std::max(kq, -std::log(d.x[i] * d.x[i] * d.f[i]) / std::pow(d.x[i], q));
    }
    e.numbers["relaxed_q"] = q;
    e.numbers["relaxed_k"] = kq;
  }
  return e;
}

inline Evidence krein_check(const DensityTable& tab, double power) { return krein_check(sample(tab), power); }

// ---------------------------------------------------------------------------
// Family rules

inline DeterminacyVerdict classify_factorial(double t, std::size_t n_max = 256) {
  detail::require_positive(t, "t", "classify");
  std::vector<Evidence> ev;
  ev.push_back(detail::rule_evidence("factorial_rule", t <= 2.0, {{"t", t}}, "MD iff t <= 2"));
  ev.push_back(carleman(factorial_power(t), n_max));
  return detail::finish(std::move(ev));
}

inline DeterminacyVerdict classify_gamma1(double a, double s, double t, std::size_t n_max = 256) {
  detail::require_positive(t, "t", "classify");
  std::vector<Evidence> ev;
  ev.push_back(detail::rule_evidence("gamma1_rule", s * t <= 2.0, {{"a", a}, {"s", s}, {"t", t}, {"st", s * t}},
                                     "MD iff st <= 2"));
  ev.push_back(carleman(combine_power(gamma_order1(a, s), t), n_max));
  return detail::finish(std::move(ev));
}

inline DeterminacyVerdict classify_rgstable(double a, double m, std::size_t n_max = 256) {
  const auto seq = rgstable_seq(a, m);
  std::vector<Evidence> ev;
  ev.push_back(detail::rule_evidence("rgstable_rule", m <= 3.0 * a, {{"a", a}, {"m", m}}, "MD iff m <= 3a"));
  ev.push_back(carleman(seq, n_max));
  return detail::finish(std::move(ev));
}

/// R_t with moments (Phi(1)...Phi(n))^t. l and lbar come from growth_of_phi.
inline DeterminacyVerdict classify_remainder(const RealFunction& phi, double t, std::optional<bool> selfdecomp,
                                             std::size_t n_max = 256) {
  detail::require_positive(t, "t", "classify");
  const auto g = growth_of_phi(phi);
  const double l_sup = std::max(g.g_hi, 0.0);
  const double l_inf = std::max(g.g_lo, 0.0);
  std::vector<Evidence> ev;

  Evidence md;
  md.criterion = "remainder_carleman_threshold";
  md.side = Side::MD;
  md.numbers = {{"t", t}, {"l", l_sup}, {"l_bar", l_inf}};
  md.numbers["threshold"] = l_sup > 0.0 ? 2.0 / l_sup : std::numeric_limits<double>::infinity();
  // Strict sides keep a margin of the growth estimate's tolerance.
  md.satisfied = t * (l_sup + growth_profile_tolerance) < 2.0;
  md.outcome = "MD if t < 2/l";
  ev.push_back(md);

  Evidence mi;
  mi.criterion = "remainder_lin_threshold";
  mi.side = Side::MI;
  mi.numbers = {{"t", t}, {"l", l_sup}, {"l_bar", l_inf}};
  mi.numbers["threshold"] = l_inf > 0.0 ? 2.0 / l_inf : std::numeric_limits<double>::infinity();
  const bool above = t * (l_inf - growth_profile_tolerance) > 2.0;
  if (!above) {
    mi.outcome = "MI needs t > 2/l_bar";
  } else if (!selfdecomp) {
    mi.outcome = "t > 2/l_bar but self-decomposability was not supplied";
  } else if (!*selfdecomp) {
    mi.outcome = "t > 2/l_bar but S is not self-decomposable";
  } else {
    mi.satisfied = true;
    mi.outcome = "MI: t > 2/l_bar with S self-decomposable";
  }
  ev.push_back(mi);

  if (!md.satisfied && !above && l_sup - l_inf <= growth_profile_tolerance) {
    // At the threshold: the Carleman series decides, under self-decomposability
    // for the MI side.
    auto r = detail::carleman_series(bernstein_rising(phi, t), n_max);
    Evidence c = detail::series_evidence("remainder_threshold_carleman", r);
    ev.push_back(c);
    if (r.cls == SeriesClass::convergent) {
      Evidence mi2;
      mi2.criterion = "remainder_threshold_lin";
      mi2.side = Side::MI;
      mi2.satisfied = selfdecomp.value_or(false);
      mi2.outcome = mi2.satisfied ? "convergent series with S self-decomposable" : "convergent series; self-decomposability not established";
      ev.push_back(mi2);
    }
  }
  return detail::finish(std::move(ev));
}

/// Raw sequence with an optional density for the MI side.
inline DeterminacyVerdict classify_sequence(const LogMomentSequence& seq, const std::optional<SampledDensity>& density,
                                            std::optional<double> lin_from = std::nullopt, std::size_t n_max = 256) {
  std::vector<Evidence> ev;
  auto r = detail::carleman_series(seq, n_max);
  ev.push_back(detail::series_evidence("carleman", r));
  if (density) {
    Evidence lin = lin_condition_density(*density, lin_from.value_or(density->x[density->x.size() / 2]));
    ev.push_back(lin);
    Evidence both;
    both.criterion = "carleman_lin";
    both.side = Side::MI;
    both.satisfied = lin.satisfied && r.cls == SeriesClass::convergent;
    both.outcome = both.satisfied ? "convergent Carleman series with Lin's condition" : "not established";
    ev.push_back(both);
    ev.push_back(krein_check(*density, 1.0));
  }
  return detail::finish(std::move(ev));
}

struct ClassifyInput {
  std::string family;  // factorial, gamma1, rgstable, remainder, sequence
  Params params;
  RealFunction phi;  // remainder
  std::optional<bool> selfdecomp;
  std::optional<LogMomentSequence> sequence;
  std::optional<SampledDensity> density;
};

inline DeterminacyVerdict classify(const ClassifyInput& in) {
  auto p = [&](const std::string& k, std::optional<double> fallback = std::nullopt) {
    auto it = in.params.find(k);
    if (it != in.params.end()) return it->second;
    if (fallback) return *fallback;
    throw domain_error("classify: missing parameter " + k + " for family " + in.family);
  };
  if (in.family == "factorial") return classify_factorial(p("t"));
  if (in.family == "gamma1") return classify_gamma1(p("a"), p("s"), p("t", 1.0));
  if (in.family == "rgstable") return classify_rgstable(p("a"), p("m"));
  if (in.family == "remainder") {
    if (!in.phi) throw domain_error("classify: remainder needs Phi");
    return classify_remainder(in.phi, p("t"), in.selfdecomp);
  }
  if (in.family == "sequence") {
    if (!in.sequence) throw domain_error("classify: sequence input missing");
    return classify_sequence(*in.sequence, in.density);
  }
  throw domain_error("classify: unknown family " + in.family);
}

// ---------------------------------------------------------------------------

struct Prop5Report {
  SeriesClass direct = SeriesClass::inconclusive;    // sum mu_n^{-t/(2n)}
  SeriesClass sampled = SeriesClass::inconclusive;   // sum mu_[nt]^{-t/(2[nt])}
  double direct_partial_sum = 0.0;
  double sampled_partial_sum = 0.0;
  bool match = false;
};

inline Prop5Report prop5_equivalence(const LogMomentSequence& seq, double t, std::size_t n_max = 256) {
  detail::require_positive(t, "t", "prop5_equivalence");
  if (n_max < 64) throw domain_error("prop5_equivalence: n_max must be at least 64");
  const auto direct = detail::carleman_series(combine_power(seq, t), n_max);
  // L(n) = t (n/m) log mu_m with m = [nt], so exp(-L(n)/(2n)) is the n-th term.
  const auto sampled_seq = from_log_function(seq.family() + "[nt]", seq.params(), [seq, t](std::size_t n) {
    const auto m = std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(static_cast<double>(n) * t)));
    return t * static_cast<double>(n) / static_cast<double>(m) * seq.eval(m);
  });
  const auto sampled = detail::carleman_series(sampled_seq, n_max);
  Prop5Report r;
  r.direct = direct.cls;
  r.sampled = sampled.cls;
  r.direct_partial_sum = direct.partial_sum;
  r.sampled_partial_sum = sampled.partial_sum;
  r.match = r.direct == r.sampled;
  return r;
}

}  // namespace gammoments
