#pragma once

// Moment-sequence families, all carried in log scale, and the growth profile
// log mu_n / (n log n) with its extrapolated limit.

#include <cmath>
#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "gammoments/errors.hpp"
#include "gammoments/specfun.hpp"

namespace gammoments {

using Params = std::map<std::string, double>;

class LogMomentSequence {
 public:
  using Evaluator = std::function<double(std::size_t)>;

  LogMomentSequence(std::string family, Params params, Evaluator fn)
      : family_(std::move(family)), params_(std::move(params)), fn_(std::move(fn)) {}

  const std::string& family() const { return family_; }
  const Params& params() const { return params_; }

  double eval(std::size_t n) const { return n == 0 ? 0.0 : fn_(n); }
  double operator()(std::size_t n) const { return eval(n); }

 private:
  std::string family_;
  Params params_;
  Evaluator fn_;
};

struct GammaRatioSpec {
  std::vector<std::pair<double, double>> numerators;    // (a_i, A_i)
  std::vector<std::pair<double, double>> denominators;  // (b_j, B_j)
};

struct GrowthDiagnostics {
  std::vector<double> n;
  std::vector<double> ratio;  // log mu_n / (n log n)
  double full_fit = 0.0;
  double tail_fit = 0.0;
  double tail_residual_max = 0.0;
  double tail_residual_min = 0.0;
  std::string method;
};

struct GrowthProfile {
  double g_hi = 0.0;
  double g_lo = 0.0;
  std::optional<double> c_hat;
  std::size_t n_used = 0;
  GrowthDiagnostics diagnostics;
};

inline constexpr double growth_profile_tolerance = 0.02;

namespace detail {

inline void require_positive(double v, const char* name, const char* where) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw domain_error(std::string(where) + ": " + name + " must be positive and finite");
  }
}

inline double log_binomial(double top, double k) {
  return log_gamma(top + 1.0) - log_gamma(k + 1.0) - log_gamma(top - k + 1.0);
}

// Least squares with column basis evaluated at each abscissa. Returns the
// coefficients and the residuals.
inline std::pair<Eigen::VectorXd, Eigen::VectorXd> least_squares(
    const std::vector<double>& xs, const std::vector<double>& ys,
    const std::vector<std::function<double(double)>>& basis) {
  const auto rows = static_cast<Eigen::Index>(xs.size());
  const auto cols = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXd a(rows, cols);
  Eigen::VectorXd b(rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) a(i, j) = basis[j](xs[i]);
    b(i) = ys[i];
  }
  Eigen::VectorXd coef = a.colPivHouseholderQr().solve(b);
  Eigen::VectorXd res = b - a * coef;
  return {coef, res};
}

// Quarter-octave sample of integers in [lo, hi], always including hi.
inline std::vector<std::size_t> geometric_integers(std::size_t lo, std::size_t hi) {
  std::vector<std::size_t> out;
  for (int k = 0;; ++k) {
    const auto n = static_cast<std::size_t>(std::llround(lo * std::pow(2.0, k / 4.0)));
    if (n > hi) break;
    if (out.empty() || n != out.back()) out.push_back(n);
  }
  if (out.back() != hi) out.push_back(hi);
  return out;
}

}  // namespace detail

inline LogMomentSequence from_log_function(std::string family, Params params, LogMomentSequence::Evaluator fn) {
  return LogMomentSequence(std::move(family), std::move(params), std::move(fn));
}

/// Sequence from explicit positive values mu_0 = 1, mu_1, ...; zero-padded
/// values give log 0 = -inf.
inline LogMomentSequence from_values(std::vector<double> mu) {
  if (mu.empty() || mu[0] != 1.0) throw domain_error("from_values: mu_0 must be 1");
  for (double v : mu) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw domain_error("from_values: values must be finite and >= 0");
  }
  Params p{{"length", static_cast<double>(mu.size())}};
  return LogMomentSequence("values", std::move(p), [mu = std::move(mu)](std::size_t n) {
    if (n >= mu.size()) throw domain_error("from_values: index " + std::to_string(n) + " beyond the supplied values");
    return std::log(mu[n]);
  });
}

inline LogMomentSequence ones() {
  return LogMomentSequence("ones", {}, [](std::size_t) { return 0.0; });
}

inline LogMomentSequence factorial_power(double t) {
  detail::require_positive(t, "t", "factorial_power");
  return LogMomentSequence("factorial", {{"t", t}},
                           [t](std::size_t n) { return t * log_gamma(static_cast<double>(n) + 1.0); });
}

/// mu_n = (Phi(1) ... Phi(n))^t for a callable Phi.
inline LogMomentSequence bernstein_rising(std::function<double(double)> phi, double t) {
  detail::require_positive(t, "t", "bernstein_rising");
  struct Cache {
    std::mutex lock;
    std::vector<double> partial{0.0};
  };
  auto cache = std::make_shared<Cache>();
  return LogMomentSequence("bernstein_rising", {{"t", t}}, [phi = std::move(phi), t, cache](std::size_t n) {
    std::lock_guard<std::mutex> guard(cache->lock);
    auto& partial = cache->partial;
    while (partial.size() <= n) {
      const double k = static_cast<double>(partial.size());
      const double v = phi(k);
      if (!(v > 0.0) || !std::isfinite(v)) {
        throw domain_error("bernstein_rising: not a positive Bernstein value at k = " + std::to_string(k) +
                           " (Phi = " + std::to_string(v) + ")");
      }
      partial.push_back(partial.back() + std::log(v));
    }
    return t * partial[n];
  });
}

inline LogMomentSequence beta_power(double a, double b, double s) {
  detail::require_positive(a, "a", "beta_power");
  detail::require_positive(b, "b", "beta_power");
  detail::require_positive(s, "s", "beta_power");
  const double base = log_gamma(a + b) - log_gamma(a);
  return LogMomentSequence("beta", {{"a", a}, {"b", b}, {"s", s}}, [a, b, s, base](std::size_t n) {
    const double sn = s * static_cast<double>(n);
    return log_gamma(a + sn) - log_gamma(a + b + sn) + base;
  });
}

inline LogMomentSequence gamma_order1(double a, double s) {
  detail::require_positive(a, "a", "gamma_order1");
  detail::require_positive(s, "s", "gamma_order1");
  const double base = log_gamma(a);
  return LogMomentSequence("gamma1", {{"a", a}, {"s", s}}, [a, s, base](std::size_t n) {
    return log_gamma(a + s * static_cast<double>(n)) - base;
  });
}

enum class BinomialKind { binomial, raney, fuss_catalan };

inline LogMomentSequence binomial_family(BinomialKind kind, double p, double r_or_k) {
  switch (kind) {
    case BinomialKind::binomial: {
      const double r = r_or_k;
      if (!(p >= 1.0) || !std::isfinite(p)) throw domain_error("not a moment sequence: binomial requires p >= 1");
      if (!(r >= -1.0 && r <= p - 1.0)) throw domain_error("not a moment sequence: binomial requires r in [-1, p-1]");
      if (p == 1.0 && r == -1.0) throw domain_error("degenerate sequence: binomial with p = 1, r = -1 vanishes for n >= 1");
      return LogMomentSequence("binomial", {{"p", p}, {"r", r}}, [p, r](std::size_t n) {
        const double dn = static_cast<double>(n);
        return detail::log_binomial(p * dn + r, dn);
      });
    }
    case BinomialKind::raney: {
      const double r = r_or_k;
      if (!(p >= 1.0) || !std::isfinite(p)) throw domain_error("not a moment sequence: raney requires p >= 1");
      if (!(r >= 0.0 && r <= p)) throw domain_error("not a moment sequence: raney requires r in [0, p]");
      if (r == 0.0) throw domain_error("degenerate sequence: raney with r = 0");
      return LogMomentSequence("raney", {{"p", p}, {"r", r}}, [p, r](std::size_t n) {
        const double dn = static_cast<double>(n);
        return std::log(r) - std::log(dn * p + r) + detail::log_binomial(p * dn + r, dn);
      });
    }
    case BinomialKind::fuss_catalan: {
      const double k = r_or_k;
      if (!(k >= 1.0) || k != std::floor(k) || !std::isfinite(k)) {
        throw domain_error("not a moment sequence: fuss_catalan requires an integer k >= 1");
      }
      return LogMomentSequence("fuss_catalan", {{"k", k}}, [k](std::size_t n) {
        const double dn = static_cast<double>(n);
        return detail::log_binomial((k + 1.0) * dn, dn) - std::log1p(k * dn);
      });
    }
  }
  throw domain_error("binomial_family: unknown kind");
}

inline LogMomentSequence binomial_seq(double p, double r) { return binomial_family(BinomialKind::binomial, p, r); }
inline LogMomentSequence raney_seq(double p, double r) { return binomial_family(BinomialKind::raney, p, r); }
inline LogMomentSequence fuss_catalan_seq(double k) { return binomial_family(BinomialKind::fuss_catalan, 0.0, k); }

inline void validate(const GammaRatioSpec& spec) {
  for (const auto& [a, A] : spec.numerators) {
    detail::require_positive(a, "a_i", "gamma_ratio_seq");
    detail::require_positive(A, "A_i", "gamma_ratio_seq");
  }
  for (const auto& [b, B] : spec.denominators) {
    detail::require_positive(b, "b_j", "gamma_ratio_seq");
    detail::require_positive(B, "B_j", "gamma_ratio_seq");
  }
}

inline LogMomentSequence gamma_ratio_seq(const GammaRatioSpec& spec) {
  validate(spec);
  Params p{{"p", static_cast<double>(spec.numerators.size())}, {"q", static_cast<double>(spec.denominators.size())}};
  for (std::size_t i = 0; i < spec.numerators.size(); ++i) {
    p["a" + std::to_string(i + 1)] = spec.numerators[i].first;
    p["A" + std::to_string(i + 1)] = spec.numerators[i].second;
  }
  for (std::size_t j = 0; j < spec.denominators.size(); ++j) {
    p["b" + std::to_string(j + 1)] = spec.denominators[j].first;
    p["B" + std::to_string(j + 1)] = spec.denominators[j].second;
  }
  return LogMomentSequence("gamma_ratio", std::move(p), [spec](std::size_t n) {
    const double dn = static_cast<double>(n);
    double v = 0.0;
    for (const auto& [a, A] : spec.numerators) v += log_gamma(a + A * dn) - log_gamma(a);
    for (const auto& [b, B] : spec.denominators) v -= log_gamma(b + B * dn) - log_gamma(b);
    return v;
  });
}

inline LogMomentSequence mt_seq(double t) {
  detail::require_positive(t, "t", "mt_seq");
  return LogMomentSequence("mt", {{"t", t}}, [t](std::size_t n) {
    if (t == 1.0) return 0.0;
    const double dn = static_cast<double>(n);
    const double v = t * log_gamma(dn + 1.0) - log_gamma(1.0 + dn * t);
    return t < 1.0 ? v : -v;
  });
}

inline LogMomentSequence rgstable_seq(double a, double m) {
  detail::require_positive(a, "a", "rgstable_seq");
  if (!(m > a) || !std::isfinite(m)) throw domain_error("r-gstable undefined: requires 0 < a < m");
  const double slope = (m - a) / a * std::log(a);
  return LogMomentSequence("rgstable", {{"a", a}, {"m", m}}, [a, m, slope](std::size_t n) {
    double v = slope * static_cast<double>(n);
    for (std::size_t j = 0; j < n; ++j) {
      const double dj = static_cast<double>(j);
      v += log_gamma((m + dj) / a) - log_gamma((a + dj) / a);
    }
    return v;
  });
}

inline LogMomentSequence combine_product(const LogMomentSequence& x, const LogMomentSequence& y) {
  Params p;
  for (const auto& [k, v] : x.params()) p["x." + k] = v;
  for (const auto& [k, v] : y.params()) p["y." + k] = v;
  return LogMomentSequence(x.family() + "*" + y.family(), std::move(p),
                           [x, y](std::size_t n) { return x.eval(n) + y.eval(n); });
}

inline LogMomentSequence combine_power(const LogMomentSequence& x, double t) {
  detail::require_positive(t, "t", "combine_power");
  Params p = x.params();
  p["power"] = t;
  return LogMomentSequence(x.family() + "^t", std::move(p), [x, t](std::size_t n) { return t * x.eval(n); });
}

/// mu_n -> c^n mu_n.
inline LogMomentSequence rescale(const LogMomentSequence& x, double c) {
  detail::require_positive(c, "c", "rescale");
  Params p = x.params();
  p["scale"] = c;
  const double lc = std::log(c);
  return LogMomentSequence(x.family(), std::move(p),
                           [x, lc](std::size_t n) { return x.eval(n) + lc * static_cast<double>(n); });
}

namespace detail {

struct Extrapolation {
  double intercept;
  double residual_max;
  double residual_min;
};

// Intercept of a least-squares fit of ys against the basis, first column 1.
inline Extrapolation extrapolate(const std::vector<double>& xs, const std::vector<double>& ys,
                                 const std::vector<std::function<double(double)>>& basis) {
  auto [coef, res] = least_squares(xs, ys, basis);
  return {coef(0), res.maxCoeff(), res.minCoeff()};
}

inline const std::vector<std::function<double(double)>>& growth_basis() {
  static const std::vector<std::function<double(double)>> basis = {
      [](double) { return 1.0; }, [](double n) { return 1.0 / std::log(n); }, [](double n) { return 1.0 / n; },
      [](double n) { return 1.0 / (n * std::log(n)); }};
  return basis;
}

inline const std::vector<std::function<double(double)>>& constant_basis() {
  static const std::vector<std::function<double(double)>> basis = {
      [](double) { return 1.0; }, [](double n) { return 1.0 / n; }, [](double n) { return std::log(n) / n; }};
  return basis;
}

}  // namespace detail

inline GrowthProfile growth_profile(const LogMomentSequence& x, std::size_t n_max = 256) {
  if (n_max < 16) throw domain_error("growth_profile: n_max must be at least 16");
  const auto ns = detail::geometric_integers(16, n_max);
  GrowthProfile out;
  auto& d = out.diagnostics;
  d.method = "least squares on log mu_n/(n log n) against {1, 1/log n, 1/n, 1/(n log n)}, quarter-octave n";
  std::vector<double> values;
  for (std::size_t n : ns) {
    const double v = x.eval(n);
    if (!std::isfinite(v)) {
      throw accuracy_error("growth_profile: non-finite log moment at n = " + std::to_string(n), v, 0.0);
    }
    const double dn = static_cast<double>(n);
    d.n.push_back(dn);
    d.ratio.push_back(v / (dn * std::log(dn)));
    values.push_back(v);
  }
  out.n_used = n_max;

  const auto full = detail::extrapolate(d.n, d.ratio, detail::growth_basis());
  std::vector<double> tn, tr;
  const double tail_from = static_cast<double>(n_max) / 8.0;
  for (std::size_t i = 0; i < d.n.size(); ++i) {
    if (d.n[i] >= tail_from) {
      tn.push_back(d.n[i]);
      tr.push_back(d.ratio[i]);
    }
  }
  const auto tail = detail::extrapolate(tn, tr, detail::growth_basis());
  d.full_fit = full.intercept;
  d.tail_fit = tail.intercept;
  d.tail_residual_max = tail.residual_max;
  d.tail_residual_min = tail.residual_min;
  out.g_hi = std::max(full.intercept, tail.intercept) + std::max(0.0, tail.residual_max);
  out.g_lo = std::min(full.intercept, tail.intercept) + std::min(0.0, tail.residual_min);

  const double g = 0.5 * (out.g_hi + out.g_lo);
  if (out.g_hi - out.g_lo <= growth_profile_tolerance && g > growth_profile_tolerance) {
    std::vector<double> cy;
    for (std::size_t i = 0; i < d.n.size(); ++i) {
      if (d.n[i] >= tail_from) cy.push_back(values[i] / (g * d.n[i]) - std::log(d.n[i]));
    }
    out.c_hat = std::exp(detail::extrapolate(tn, cy, detail::constant_basis()).intercept);
  }
  return out;
}

}  // namespace gammoments
