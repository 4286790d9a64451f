#pragma once

// Real special functions used throughout the library: log-Gamma, digamma,
// signed Gamma for arbitrary real arguments, and the Gauss hypergeometric
// series on [0, 1). Everything is binary64, pure and re-entrant.

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <string>
#include <utility>

#include "gammoments/errors.hpp"

namespace gammoments {

inline constexpr double euler_gamma = 0.57721566490153286060651209008240243;

namespace detail {

inline constexpr double half_log_two_pi = 0.91893853320467274178032973640562;

// zeta(k) - 1 for k = 2, 3, ...
inline constexpr std::array<double, 40> zeta_minus_one = {
    6.44934066848226406e-01, 2.02056903159594292e-01, 8.23232337111381857e-02,
    3.69277551433699266e-02, 1.73430619844491402e-02, 8.34927738192282713e-03,
    4.07735619794433960e-03, 2.00839282608221426e-03, 9.94575127818085256e-04,
    4.94188604119464529e-04, 2.46086553308048320e-04, 1.22713347578489145e-04,
    6.12481350587048277e-05, 3.05882363070204933e-05, 1.52822594086518710e-05,
    7.63719763789976257e-06, 3.81729326499984022e-06, 1.90821271655393897e-06,
    9.53962033872796212e-07, 4.76932986787806447e-07, 2.38450502727733004e-07,
    1.19219925965311064e-07, 5.96081890512594801e-08, 2.98035035146522793e-08,
    1.49015548283650427e-08, 7.45071178983543006e-09, 3.72533402478845728e-09,
    1.86265972351304914e-09, 9.31327432419668166e-10, 4.65662906503378366e-10,
    2.32831183367650534e-10, 1.16415501727005193e-10, 5.82077208790270145e-11,
    2.91038504449710001e-11, 1.45519218910419849e-11, 7.27595983505748180e-12,
    3.63797954737865086e-12, 1.81898965030706607e-12, 9.09494784026388841e-13,
    4.54747378304215422e-13};

// B_{2k} / (2k (2k-1)) for k = 1..10, the Stirling series coefficients.
inline constexpr std::array<double, 10> stirling_coefficients = {
    1.0 / 12.0,          -1.0 / 360.0,          1.0 / 1260.0,          -1.0 / 1680.0,
    1.0 / 1188.0,        -691.0 / 360360.0,     1.0 / 156.0,           -3617.0 / 122400.0,
    43867.0 / 244188.0,  -174611.0 / 125400.0};

// B_{2k} / (2k) for k = 1..10, the digamma asymptotic coefficients.
inline constexpr std::array<double, 10> digamma_coefficients = {
    1.0 / 12.0,        -1.0 / 120.0,         1.0 / 252.0,          -1.0 / 240.0,
    1.0 / 132.0,       -691.0 / 32760.0,     1.0 / 12.0,           -3617.0 / 8160.0,
    43867.0 / 14364.0, -174611.0 / 6600.0};

// log Gamma(1 + z) for |z| <= 1/2 from the Taylor series at 1, with the
// logarithmic part summed in closed form so the remaining terms decay as 2^-k.
inline double log_gamma_1p_series(double z) {
  double acc = 0.0;
  double power = z * z;
  for (std::size_t i = 0; i < zeta_minus_one.size(); ++i) {
    const double k = static_cast<double>(i + 2);
    const double term = zeta_minus_one[i] * power / k;
    acc += (i % 2 == 0) ? term : -term;
    if (std::fabs(term) < 1e-18 * std::fabs(acc)) break;
    power *= z;
  }
  return (1.0 - euler_gamma) * z - std::log1p(z) + acc;
}

inline double log_gamma_stirling(double x) {
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  double series = 0.0;
  double p = inv;
  for (double c : stirling_coefficients) {
    const double term = c * p;
    series += term;
    if (std::fabs(term) < 1e-18 * std::fabs(series)) break;
    p *= inv2;
  }
  return (x - 0.5) * std::log(x) - x + half_log_two_pi + series;
}

inline bool is_nonpositive_integer(double x) { return x <= 0.0 && x == std::floor(x); }

}  // namespace detail

/// e^y - 1 - y without cancellation for small |y|.
inline double expm1_minus_linear(double y) {
  if (std::fabs(y) < 0.5) {
    double term = 0.5 * y * y;
    double sum = term;
    for (int k = 3; k < 40; ++k) {
      term *= y / k;
      sum += term;
      if (std::fabs(term) <= 1e-17 * std::fabs(sum)) break;
    }
    return sum;
  }
  return std::expm1(y) - y;
}

/// log Gamma(x) for x > 0.
inline double log_gamma(double x) {
  if (!std::isfinite(x) || x <= 0.0) {
    throw domain_error("log_gamma: argument must be positive and finite, got " + std::to_string(x));
  }
  if (x < 0.5) return detail::log_gamma_1p_series(x) - std::log(x);
  if (x <= 1.5) return detail::log_gamma_1p_series(x - 1.0);
  if (x <= 2.5) {
    const double z = x - 2.0;
    return std::log1p(z) + detail::log_gamma_1p_series(z);
  }
  if (x < 10.0) {
    double prod = 1.0;
    double y = x;
    while (y > 2.5) {
      y -= 1.0;
      prod *= y;
    }
    const double z = y - 2.0;
    return std::log(prod) + std::log1p(z) + detail::log_gamma_1p_series(z);
  }
  return detail::log_gamma_stirling(x);
}

/// psi(x) = Gamma'(x) / Gamma(x) for x > 0.
inline double digamma(double x) {
  if (!std::isfinite(x) || x <= 0.0) {
    throw domain_error("digamma: argument must be positive and finite, got " + std::to_string(x));
  }
  double shift = 0.0;
  while (x < 10.0) {
    shift -= 1.0 / x;
    x += 1.0;
  }
  const double inv2 = 1.0 / (x * x);
  double series = 0.0;
  double p = inv2;
  for (double c : detail::digamma_coefficients) {
    series += c * p;
    p *= inv2;
  }
  return shift + std::log(x) - 0.5 / x - series;
}

/// log |Gamma(x)| and the sign of Gamma(x) for real x off the poles.
struct SignedLogGamma {
  double log_abs;
  int sign;
};

inline SignedLogGamma signed_log_gamma(double x) {
  if (!std::isfinite(x) || detail::is_nonpositive_integer(x)) {
    throw domain_error("signed_log_gamma: pole or non-finite argument " + std::to_string(x));
  }
  if (x > 0.0) return {log_gamma(x), 1};
  // Reflection: Gamma(x) Gamma(1 - x) = pi / sin(pi x).
  const double s = std::sin(std::numbers::pi * (x - 2.0 * std::floor(x / 2.0)));
  return {std::log(std::numbers::pi / std::fabs(s)) - log_gamma(1.0 - x), s > 0.0 ? 1 : -1};
}

/// 1 / Gamma(x) for every real x, zero at the poles.
inline double reciprocal_gamma(double x) {
  if (detail::is_nonpositive_integer(x)) return 0.0;
  const auto g = signed_log_gamma(x);
  return g.sign * std::exp(-g.log_abs);
}

namespace detail {

inline double hypergeometric_series(double a, double b, double c, double z) {
  double term = 1.0;
  double sum = 1.0;
  int small_terms = 0;
  for (int k = 0; k < 20000; ++k) {
    term *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * z;
    sum += term;
    if (term == 0.0) return sum;
    if (std::fabs(term) <= 1e-17 * std::fabs(sum)) {
      if (++small_terms == 2) return sum;
    } else {
      small_terms = 0;
    }
  }
  throw accuracy_error("gauss_2f1: series did not converge", sum, std::fabs(term));
}

inline double terminating_hypergeometric(double n_neg, double b, double c, double z) {
  // n_neg is a non-positive integer; the polynomial has -n_neg + 1 terms.
  const int order = static_cast<int>(-n_neg);
  double term = 1.0;
  double sum = 1.0;
  for (int k = 0; k < order; ++k) {
    term *= (n_neg + k) * (b + k) / ((c + k) * (k + 1.0)) * z;
    sum += term;
  }
  return sum;
}

// Gamma(n1) Gamma(n2) / (Gamma(d1) Gamma(d2)) with zero for poles in the
// denominator. Numerator arguments must be off the poles.
inline double gamma_quotient(double n1, double n2, double d1, double d2) {
  if (is_nonpositive_integer(d1) || is_nonpositive_integer(d2)) return 0.0;
  const auto a = signed_log_gamma(n1);
  const auto b = signed_log_gamma(n2);
  const auto c = signed_log_gamma(d1);
  const auto d = signed_log_gamma(d2);
  const int sign = a.sign * b.sign * c.sign * d.sign;
  return sign * std::exp(a.log_abs + b.log_abs - c.log_abs - d.log_abs);
}

}  // namespace detail

/// Above this z the series is replaced by the z -> 1 - z connection formula.
inline constexpr double hypergeometric_switch = 0.7;

namespace detail {

// z and w = 1 - z are both passed so that neither loses digits to the other.
inline double gauss_2f1_zw(double a, double b, double c, double z, double w) {
  if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c) || is_nonpositive_integer(c)) {
    throw domain_error("gauss_2f1: c must not be a non-positive integer");
  }
  if (z == 0.0) return 1.0;
  if (b < a) std::swap(a, b);  // symmetric in a, b bit for bit
  if (is_nonpositive_integer(a)) return terminating_hypergeometric(a, b, c, z);
  if (is_nonpositive_integer(b)) return terminating_hypergeometric(b, a, c, z);
  if (z <= hypergeometric_switch) return hypergeometric_series(a, b, c, z);

  const double d = c - a - b;
  if (d == std::round(d)) {
    throw domain_error("gauss_2f1: transformation unavailable for integer c - a - b = " +
                       std::to_string(d) + " at z > " + std::to_string(hypergeometric_switch));
  }
  const double first_coef = gamma_quotient(c, d, c - a, c - b);
  const double second_coef = gamma_quotient(c, -d, a, b);
  double result = 0.0;
  if (first_coef != 0.0) result += first_coef * gauss_2f1_zw(a, b, 1.0 - d, w, z);
  if (second_coef != 0.0) result += second_coef * std::pow(w, d) * gauss_2f1_zw(c - a, c - b, 1.0 + d, w, z);
  return result;
}

}  // namespace detail

/// Gauss hypergeometric function 2F1(a, b; c; z) for z in [0, 1).
inline double gauss_2f1(double a, double b, double c, double z) {
  if (!(z >= 0.0 && z < 1.0)) {
    throw domain_error("gauss_2f1: z must lie in [0, 1), got " + std::to_string(z));
  }
  return detail::gauss_2f1_zw(a, b, c, z, 1.0 - z);
}

/// 2F1(a, b; c; 1 - w) for w in (0, 1], for when w is the accurate quantity.
inline double gauss_2f1_complement(double a, double b, double c, double w) {
  if (!(w > 0.0 && w <= 1.0)) {
    throw domain_error("gauss_2f1: 1 - z must lie in (0, 1], got " + std::to_string(w));
  }
  return detail::gauss_2f1_zw(a, b, c, 1.0 - w, w);
}

}  // namespace gammoments
