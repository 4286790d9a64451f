#pragma once

// Bernstein functions Phi(lam) = killing + drift lam + int (1 - e^{-lam x}) rho(x) dx,
// the explicit families whose rising products are Gamma-type moment
// sequences, and numerical checks of factorizations and self-decomposability.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gammoments/errors.hpp"
#include "gammoments/momentseq.hpp"
#include "gammoments/quadrature.hpp"
#include "gammoments/specfun.hpp"

namespace gammoments {

using RealFunction = std::function<double(double)>;

struct BernsteinFunction {
  double killing = 0.0;
  double drift = 0.0;
  RealFunction levy_density;  // empty when only a closed form is known
  RealFunction closed_form;
  std::string validity_note;
};

struct SpectralData {
  RealFunction kappa;
  RealFunction eta;  // optional
};

struct BernsteinVerdict {
  bool is_bernstein = false;
  std::string condition;
  std::optional<BernsteinFunction> phi;
  std::optional<double> counterexample_point;
  std::optional<bool> jurek_class;
  std::optional<bool> complete_bernstein;
};

namespace detail {

inline QuadratureOptions tight_options() {
  QuadratureOptions o;
  o.abs_tol = 1e-15;
  o.rel_tol = 1e-12;
  o.max_level = 12;
  return o;
}

// int_0^inf g, split at 1 so that an endpoint singularity at 0 and the
// decay at infinity are each handled by their own map.
template <class G>
QuadratureResult half_line(G&& g, const QuadratureOptions& opts) {
  QuadratureResult a = integrate(g, 0.0, 1.0, opts);
  QuadratureResult b = integrate(g, 1.0, std::numeric_limits<double>::infinity(), opts);
  return {a.value + b.value, a.abs_error_estimate + b.abs_error_estimate, a.evaluations + b.evaluations};
}

// Product of Gamma(x) over nums divided by the product over dens, with sign;
// zero if a denominator argument is a pole, NaN if a numerator one is.
inline double signed_gamma_ratio(std::initializer_list<double> nums, std::initializer_list<double> dens) {
  double log_abs = 0.0;
  int sign = 1;
  for (double d : dens) {
    if (is_nonpositive_integer(d)) return 0.0;
  }
  for (double n : nums) {
    if (is_nonpositive_integer(n)) return std::numeric_limits<double>::quiet_NaN();
    const auto g = signed_log_gamma(n);
    log_abs += g.log_abs;
    sign *= g.sign;
  }
  for (double d : dens) {
    const auto g = signed_log_gamma(d);
    log_abs -= g.log_abs;
    sign *= g.sign;
  }
  return sign * std::exp(log_abs);
}

// First point of a fixed grid on (0, 10] where a candidate exponent is negative.
inline std::optional<double> first_negative(const RealFunction& candidate) {
  for (int k = 0; k <= 400; ++k) {
    const double lam = 1e-3 * std::pow(1e4, k / 400.0);
    const double v = candidate(lam);
    if (std::isfinite(v) && v < 0.0) return lam;
  }
  return std::nullopt;
}

inline bool close_to(double x, double y) { return std::fabs(x - y) <= 1e-12 * std::max(1.0, std::fabs(y)); }

}  // namespace detail

/// Phi(lam) from the triplet by quadrature, ignoring any closed form.
inline double evaluate_triplet(const BernsteinFunction& phi, double lam, double rel_tol = 1e-12) {
  if (!(lam > 0.0) || !std::isfinite(lam)) throw domain_error("evaluate: lambda must be positive");
  double v = phi.killing + phi.drift * lam;
  if (phi.levy_density) {
    QuadratureOptions o = detail::tight_options();
    o.rel_tol = rel_tol;
    const auto& rho = phi.levy_density;
    v += detail::half_line([&](double x) { return -std::expm1(-lam * x) * rho(x); }, o).value;
  } else if (phi.closed_form && phi.drift == 0.0 && phi.killing == 0.0) {
    throw domain_error("evaluate: function carries no triplet");
  }
  return v;
}

/// Phi(lam); the closed form is used when present.
inline double evaluate(const BernsteinFunction& phi, double lam) {
  if (!(lam > 0.0) || !std::isfinite(lam)) throw domain_error("evaluate: lambda must be positive");
  if (phi.closed_form) return phi.closed_form(lam);
  return evaluate_triplet(phi, lam);
}

/// Integrability of min(1, x) rho and agreement of closed form and triplet on
/// lam in {0.5, 1, 2, 5, 10}. Returns the largest relative disagreement.
inline double check_invariants(const BernsteinFunction& phi) {
  if (!(phi.killing >= 0.0) || !(phi.drift >= 0.0)) throw domain_error("bernstein: killing and drift must be >= 0");
  if (phi.levy_density) {
    const auto& rho = phi.levy_density;
    const double mass = detail::half_line([&](double x) { return std::min(1.0, x) * rho(x); }, detail::tight_options()).value;
    if (!std::isfinite(mass)) throw domain_error("bernstein: int min(1, x) rho(x) dx is not finite");
  }
  double worst = 0.0;
  if (phi.closed_form && (phi.levy_density || phi.drift > 0.0 || phi.killing > 0.0)) {
    for (double lam : {0.5, 1.0, 2.0, 5.0, 10.0}) {
      const double a = phi.closed_form(lam);
      const double b = evaluate_triplet(phi, lam);
      worst = std::max(worst, std::fabs(a - b) / std::max(std::fabs(a), 1e-300));
    }
    if (worst > 1e-7) {
      throw domain_error("bernstein: closed form and triplet disagree (relative " + std::to_string(worst) + ")");
    }
  }
  return worst;
}

inline LogMomentSequence bernstein_rising(const BernsteinFunction& phi, double t) {
  return bernstein_rising([phi](double lam) { return evaluate(phi, lam); }, t);
}

// ---------------------------------------------------------------------------
// Families

inline double beta_rho(double a, double b, double s, double x) {
  const double w = std::exp(-x / s);
  if (w == 0.0) return 0.0;
  return b * std::exp(-a * x / s) * gauss_2f1_complement(1.0 + s, 1.0 - b, 2.0, w);
}

inline double beta_rho_euler(double a, double b, double s, double x) {
  const double w = std::exp(-x / s);
  if (w == 0.0) return 0.0;
  return b * std::exp((1.0 - (a + b) / s) * x) * gauss_2f1_complement(1.0 + b, 1.0 - s, 2.0, w);
}

// Euler integral for 2F1(1 + p, 1 - q; 2; 1 - w) with 0 < q < 1, written in
// u = 1 - t so that the peak near u ~ w is resolved for tiny w:
// (sin(pi q)/(pi q)) int_0^1 u^q (1 - u)^{-q} (u + w(1 - u))^{-1-p} du.
inline double euler_integral_2f1(double p, double q, double w, double log_scale = 0.0) {
  QuadratureOptions o;
  o.abs_tol = 1e-300;
  o.rel_tol = 1e-13;
  o.max_level = 12;
  auto g = [=](double log_u, double v) {  // v = 1 - u
    const double u = std::exp(log_u);
    return std::exp(log_scale + q * log_u - q * std::log(v) - (1.0 + p) * std::log(u + w * v));
  };
  // On (0, 1/2] the mass sits near u ~ w, so integrate in y = log(u / w).
  const double log_w = std::log(w);
  auto in_y = [&](double y) {
    const double log_u = log_w + y;
    return g(log_u, 1.0 - std::exp(log_u)) * std::exp(log_u);
  };
  const double top = std::log(0.5) - log_w;
  const double split = std::min(0.0, top);
  double left = integrate(in_y, -std::numeric_limits<double>::infinity(), split, o).value;
  if (top > split) left += integrate(in_y, split, top, o).value;
  const double right = integrate([&](double v) { return g(std::log1p(-v), v); }, 0.0, 0.5, o).value;
  return std::sin(std::numbers::pi * q) / (std::numbers::pi * q) * (left + right);
}

// rho for integer b - s where neither hypergeometric form terminates.
inline double beta_rho_integral(double a, double b, double s, double x) {
  const double w = std::exp(-x / s);
  if (w == 0.0) return 0.0;
  if (b < 1.0) return b * euler_integral_2f1(s, b, w, -a * x / s);
  return b * euler_integral_2f1(b, s, w, (1.0 - (a + b) / s) * x);
}

inline bool beta_region(double a, double b, double s) { return std::min(b, s) <= 1.0 && a >= s; }

inline BernsteinVerdict beta_bernstein(double a, double b, double s) {
  detail::require_positive(a, "a", "beta_bernstein");
  detail::require_positive(b, "b", "beta_bernstein");
  detail::require_positive(s, "s", "beta_bernstein");
  BernsteinVerdict v;
  v.condition = "min(b, s) <= 1 and a >= s";
  v.jurek_class = 2.0 * a + b + s + b * s >= 1.0;
  v.is_bernstein = beta_region(a, b, s);
  auto candidate = [a, b, s](double lam) {
    return detail::signed_gamma_ratio({a + s * lam, a + b - s + s * lam}, {a - s + s * lam, a + b + s * lam});
  };
  if (!v.is_bernstein) {
    v.counterexample_point = detail::first_negative(candidate);
    return v;
  }
  v.complete_bernstein = (b == 1.0 || s == 1.0);
  BernsteinFunction phi;
  phi.killing = a == s ? 0.0 : std::max(0.0, detail::signed_gamma_ratio({a, a + b - s}, {a + b, a - s}));
  phi.closed_form = candidate;
  // The 2F1 connection formula is unavailable when b - s is an integer and
  // neither 1 - b nor 1 - s terminates the series.
  const double d = b - s;
  const bool b_int = b == std::floor(b);
  const bool s_int = s == std::floor(s);
  if (d != std::round(d) || b_int) {
    phi.levy_density = [a, b, s](double x) { return beta_rho(a, b, s, x); };
  } else if (s_int) {
    phi.levy_density = [a, b, s](double x) { return beta_rho_euler(a, b, s, x); };
  } else {
    phi.levy_density = [a, b, s](double x) { return beta_rho_integral(a, b, s, x); };
  }
  phi.validity_note = "beta power sequence B_{a,b}^s";
  v.phi = std::move(phi);
  return v;
}

inline std::pair<double, double> rho_crosscheck(double a, double b, double s, double x) {
  detail::require_positive(a, "a", "rho_crosscheck");
  detail::require_positive(b, "b", "rho_crosscheck");
  detail::require_positive(s, "s", "rho_crosscheck");
  detail::require_positive(x, "x", "rho_crosscheck");
  if (!beta_region(a, b, s)) throw domain_error("rho_crosscheck: parameters outside the Bernstein region");
  try {
    return {beta_rho(a, b, s, x), beta_rho_euler(a, b, s, x)};
  } catch (const domain_error& e) {
    throw accuracy_error(std::string("rho_crosscheck: ") + e.what(), std::numeric_limits<double>::quiet_NaN(),
                         std::numeric_limits<double>::infinity());
  }
}

inline BernsteinVerdict gamma1_bernstein(double a, double s) {
  detail::require_positive(a, "a", "gamma1_bernstein");
  detail::require_positive(s, "s", "gamma1_bernstein");
  BernsteinVerdict v;
  v.condition = "min(1, a) >= s";
  v.is_bernstein = std::min(1.0, a) >= s;
  auto candidate = [a, s](double lam) { return detail::signed_gamma_ratio({a + s * lam}, {a - s + s * lam}); };
  if (!v.is_bernstein) {
    v.counterexample_point = detail::first_negative(candidate);
    return v;
  }
  BernsteinFunction phi;
  if (s == 1.0) {
    phi.killing = a - 1.0;
    phi.drift = 1.0;
    phi.closed_form = [a](double lam) { return a - 1.0 + lam; };
  } else {
    phi.killing = a == s ? 0.0 : detail::signed_gamma_ratio({a}, {a - s});
    const double scale = reciprocal_gamma(1.0 - s);
    phi.levy_density = [a, s, scale](double x) {
      return scale * std::exp(-a * x / s - (1.0 + s) * std::log(-std::expm1(-x / s)));
    };
    phi.closed_form = candidate;
  }
  phi.validity_note = "Gamma sequence of order 1, Gamma(a + s n)/Gamma(a)";
  v.phi = std::move(phi);
  return v;
}

inline double catalan_phi(double lam, bool shifted) {
  if (!(lam > 0.0)) throw domain_error("catalan_phi: lambda must be positive");
  const double x = shifted ? lam + 0.5 : lam;
  return 2.0 * (2.0 - 3.0 / (1.0 + x));
}

inline BernsteinVerdict catalan_bernstein(bool shifted) {
  BernsteinVerdict v;
  if (!shifted) {
    v.condition = "Phi(lam) = 2(2 - 3/(1 + lam)) must be non-negative on (0, inf)";
    v.counterexample_point = detail::first_negative([](double lam) { return catalan_phi(lam, false); });
    return v;
  }
  v.condition = "half-shifted Catalan exponent 4 - 6/(3/2 + lam)";
  v.is_bernstein = true;
  v.complete_bernstein = true;
  BernsteinFunction phi;
  phi.levy_density = [](double x) { return 6.0 * std::exp(-1.5 * x); };
  phi.closed_form = [](double lam) { return catalan_phi(lam, true); };
  phi.validity_note = "C_n = Phi~(1/2) ... Phi~(n - 1/2)";
  v.phi = std::move(phi);
  return v;
}

inline BernsteinVerdict rgstable_bernstein(double a, double m) {
  detail::require_positive(a, "a", "rgstable_bernstein");
  if (!(m > a) || !std::isfinite(m)) throw domain_error("r-gstable undefined: requires 0 < a < m");
  BernsteinVerdict v;
  v.condition = "1 <= a < m <= 3a - 1";
  const double upper = 3.0 * a - 1.0;
  const bool at_upper = detail::close_to(m, upper);
  v.is_bernstein = a >= 1.0 && (m < upper || at_upper);
  const double lead = std::pow(a, (m - a) / a);
  auto candidate = [a, m, lead](double lam) {
    return lead * detail::signed_gamma_ratio({(m - a + lam) / a}, {(a - 1.0 + lam) / a});
  };
  if (!v.is_bernstein) {
    v.counterexample_point = detail::first_negative(candidate);
    return v;
  }
  BernsteinFunction phi;
  if (at_upper) {
    const double c = std::pow(a, 1.0 - 1.0 / a);
    phi.killing = c * (a - 1.0);
    phi.drift = c;
    phi.closed_form = [a, c](double lam) { return c * (a - 1.0 + lam); };
  } else {
    phi.killing = lead * detail::signed_gamma_ratio({m / a - 1.0}, {1.0 - 1.0 / a});
    const double scale = lead * (m + 1.0 - 2.0 * a) * reciprocal_gamma(3.0 - (m + 1.0) / a);
    const double power = (m + 1.0) / a - 1.0;
    phi.levy_density = [a, m, scale, power](double x) {
      return scale * std::exp(-(m - a) * x - power * std::log(-std::expm1(-a * x)));
    };
    phi.closed_form = candidate;
  }
  phi.validity_note = "r-gstable(a, m) exponent";
  v.phi = std::move(phi);
  return v;
}

// ---------------------------------------------------------------------------
// Remainder exponents attached to M_t

struct RemainderValue {
  double value = 0.0;
  std::optional<double> representation_value;
  bool negative = false;
};

inline double remainder_log_integrand(double t, double lam, double x) {
  const double u = 1.0 - t;
  const double num = expm1_minus_linear(-u * x) - u * expm1_minus_linear(-x);
  return std::exp(-lam * x) * num / (x * -std::expm1(-x));
}

/// Closed form only: Gamma(1-t+lam)/(lam^{1-t} Gamma(lam)) for t < 1, the
/// pseudo-exponent Gamma(1+lam t)/(lam^t Gamma(1-t+lam t)) for t > 1.
inline double remainder_phi_value(double t, double lam) {
  detail::require_positive(t, "t", "remainder_phi");
  detail::require_positive(lam, "lambda", "remainder_phi");
  if (t == 1.0) throw domain_error("remainder_phi: t = 1 gives the constant sequence");
  if (t < 1.0) return std::exp(log_gamma(1.0 - t + lam) - (1.0 - t) * std::log(lam) - log_gamma(lam));
  const double lo = 1.0 - t + lam * t;
  double ratio;
  if (t == std::floor(t) && t < 64.0) {
    // Gamma(lo + t)/Gamma(lo) is a product of t factors.
    ratio = 1.0;
    for (int k = 0; k < static_cast<int>(t); ++k) ratio *= lo + k;
  } else {
    ratio = detail::signed_gamma_ratio({1.0 + lam * t}, {lo});
  }
  return ratio / std::pow(lam, t);
}

inline RemainderValue remainder_phi(double t, double lam) {
  RemainderValue out;
  out.value = remainder_phi_value(t, lam);
  if (t < 1.0) {
    const double k = std::max(1.0, lam);  // integrate in y = k x
    try {
      const auto r = detail::half_line([t, lam, k](double y) { return remainder_log_integrand(t, lam, y / k) / k; },
                                       detail::tight_options());
      out.representation_value = std::exp(r.value);
    } catch (const accuracy_error&) {
      // tiny lambda: the e^{-lambda x} scale is out of reach, keep the closed form only
    }
  }
  out.negative = out.value < 0.0;
  return out;
}

// Numeric probes of the t < 1 remainder candidate. These are evidence only.
struct RemainderProbe {
  bool positive = true;
  bool non_decreasing = true;
  bool concave = true;
  int log_cm_orders_checked = 0;
  bool log_cm_ok = true;
};

inline RemainderProbe remainder_probe(double t, const std::vector<double>& grid, int orders = 4) {
  if (!(t > 0.0 && t < 1.0)) throw domain_error("remainder_probe: requires t in (0, 1)");
  RemainderProbe p;
  std::vector<double> vals;
  for (double lam : grid) vals.push_back(remainder_phi_value(t, lam));
  for (std::size_t i = 0; i < vals.size(); ++i) {
    if (!(vals[i] > 0.0)) p.positive = false;
    if (i > 0 && vals[i] < vals[i - 1] - 1e-10) p.non_decreasing = false;
    if (i > 0 && i + 1 < vals.size()) {
      const double h0 = grid[i] - grid[i - 1];
      const double h1 = grid[i + 1] - grid[i];
      const double second = 2.0 * ((vals[i + 1] - vals[i]) / h1 - (vals[i] - vals[i - 1]) / h0) / (h0 + h1);
      if (second > 1e-9) p.concave = false;
    }
  }
  // (-1)^k (d/dlam)^k (log Phi)'(lam) = int x^{k+1} e^{-lam x} (-h(x)) dx.
  for (double lam : grid) {
    for (int k = 0; k < orders; ++k) {
      const auto r = detail::half_line(
          [t, lam, k](double x) { return -std::pow(x, k + 1) * remainder_log_integrand(t, lam, x); },
          detail::tight_options());
      if (r.value < -1e-12) p.log_cm_ok = false;
    }
  }
  p.log_cm_orders_checked = orders;
  return p;
}

// ---------------------------------------------------------------------------
// Checks

struct FactorizationReport {
  bool pass = false;
  double max_abs_error = 0.0;
  std::size_t worst_n = 0;
  std::optional<std::size_t> nonpositive_k;
  std::string message;
};

inline FactorizationReport factorization_check(const RealFunction& phi, const LogMomentSequence& seq,
                                               std::size_t n_max, double tol) {
  FactorizationReport r;
  double partial = 0.0;
  for (std::size_t n = 1; n <= n_max; ++n) {
    const double v = phi(static_cast<double>(n));
    if (!(v > 0.0)) {
      r.nonpositive_k = n;
      r.message = "Phi(" + std::to_string(n) + ") is not positive";
      return r;
    }
    partial += std::log(v);
    const double err = std::fabs(partial - seq.eval(n));
    if (!(err <= r.max_abs_error)) {
      r.max_abs_error = err;
      r.worst_n = n;
    }
  }
  r.pass = r.max_abs_error <= tol;
  r.message = r.pass ? "factorization holds" : "mismatch at n = " + std::to_string(r.worst_n);
  return r;
}

inline FactorizationReport factorization_check(const BernsteinFunction& phi, const LogMomentSequence& seq,
                                               std::size_t n_max, double tol) {
  return factorization_check([&phi](double lam) { return evaluate(phi, lam); }, seq, n_max, tol);
}

struct SelfDecompReport {
  std::optional<std::vector<double>> kappa_from_eta;
  std::vector<double> ratio;  // kappa(x)/(e^x - 1)
  bool ratio_monotone = false;
};

inline double kappa_from_eta(const RealFunction& eta, double x) {
  const auto r = detail::half_line([&](double t) { return std::exp(-x * t) * eta(t); }, detail::tight_options());
  return x * r.value;
}

inline SelfDecompReport selfdecomp_check(const SpectralData& sd, const std::vector<double>& grid) {
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0) || (i > 0 && !(grid[i] > grid[i - 1]))) {
      throw domain_error("selfdecomp_check: grid must be positive and strictly increasing");
    }
  }
  if (!sd.kappa && !sd.eta) throw domain_error("selfdecomp_check: neither kappa nor eta supplied");
  SelfDecompReport r;
  std::vector<double> kappa;
  for (double x : grid) kappa.push_back(sd.eta ? kappa_from_eta(sd.eta, x) : sd.kappa(x));
  if (sd.eta) r.kappa_from_eta = kappa;
  r.ratio_monotone = true;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    r.ratio.push_back(kappa[i] / std::expm1(grid[i]));
    if (i > 0 && r.ratio[i] > r.ratio[i - 1] + 1e-10) r.ratio_monotone = false;
  }
  return r;
}

inline double logphi_representation_check(const RealFunction& phi, const RealFunction& kappa, double x) {
  detail::require_positive(x, "x", "logphi_representation_check");
  const double lhs = std::log(phi(x));
  if (x == 1.0) return std::fabs(lhs - std::log(phi(1.0)));
  const auto r = detail::half_line(
      [&](double t) { return (std::expm1(-t) - std::expm1(-x * t)) / t * kappa(t); }, detail::tight_options());
  return std::fabs(lhs - (std::log(phi(1.0)) + r.value));
}

/// Shape checks along an increasing grid: non-decreasing and concave with
/// slack for quadrature noise.
struct ShapeReport {
  bool non_decreasing = true;
  bool concave = true;
};

inline ShapeReport shape_check(const BernsteinFunction& phi, const std::vector<double>& grid) {
  ShapeReport s;
  std::vector<double> v;
  for (double lam : grid) v.push_back(evaluate(phi, lam));
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] < v[i - 1] - 1e-10) s.non_decreasing = false;
    if (i + 1 < v.size()) {
      const double h0 = grid[i] - grid[i - 1];
      const double h1 = grid[i + 1] - grid[i];
      const double second = 2.0 * ((v[i + 1] - v[i]) / h1 - (v[i] - v[i - 1]) / h0) / (h0 + h1);
      if (second > 1e-9 * std::max(1.0, std::fabs(v[i]))) s.concave = false;
    }
  }
  return s;
}

// ---------------------------------------------------------------------------
// Growth of Psi(x) = int_0^x log Phi

inline GrowthProfile growth_of_phi(const RealFunction& phi, double x_max = 1e6) {
  if (!(x_max > 10.0)) throw domain_error("growth_of_phi: x_max must exceed 10");
  auto log_phi = [&](double x) {
    const double v = phi(x);
    if (!(v > 0.0)) throw domain_error("growth_of_phi: Phi(" + std::to_string(x) + ") is not positive");
    return std::log(v);
  };
  QuadratureOptions o;
  o.abs_tol = 1e-12;
  o.rel_tol = 1e-10;
  o.max_depth = 3;
  const int points = 60;
  const double x0 = 2.0;
  std::vector<double> xs, ratio;
  // log Phi near 0 at large x is at the rounding level of Phi, so settle for
  // the best estimate there
  auto piece = [&](double a, double b) {
    try {
      return integrate(log_phi, a, b, o).value;
    } catch (const accuracy_error& e) {
      return e.best_estimate();
    }
  };
  double psi = piece(0.0, x0);
  double prev = x0;
  for (int k = 1; k <= points; ++k) {
    const double x = x0 * std::pow(x_max / x0, static_cast<double>(k) / points);
    psi += piece(prev, x);
    prev = x;
    xs.push_back(x);
    ratio.push_back(psi / (x * std::log(x)));
  }
  GrowthProfile g;
  g.n_used = xs.size();
  auto& d = g.diagnostics;
  d.method = "Psi(x)/(x log x) on a geometric grid, tail third fitted against {1, 1/log x, 1/x}";
  d.n = xs;
  d.ratio = ratio;
  std::vector<double> tx(xs.end() - points / 3, xs.end());
  std::vector<double> tr(ratio.end() - points / 3, ratio.end());
  const std::vector<std::function<double(double)>> basis = {
      [](double) { return 1.0; }, [](double x) { return 1.0 / std::log(x); }, [](double x) { return 1.0 / x; }};
  const auto fit = detail::extrapolate(tx, tr, basis);
  d.full_fit = fit.intercept;
  d.tail_fit = fit.intercept;
  d.tail_residual_max = fit.residual_max;
  d.tail_residual_min = fit.residual_min;
  g.g_hi = fit.intercept + std::max(0.0, fit.residual_max);
  g.g_lo = fit.intercept + std::min(0.0, fit.residual_min);
  return g;
}

inline GrowthProfile growth_of_phi(const BernsteinFunction& phi, double x_max = 1e6) {
  return growth_of_phi([&phi](double lam) { return evaluate(phi, lam); }, x_max);
}

}  // namespace gammoments
