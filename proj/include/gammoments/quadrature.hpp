#pragma once

// Double-exponential quadrature. Finite intervals use the tanh-sinh map,
// half-lines the exp-sinh map and the whole line the sinh-sinh map. Each
// rule is refined by halving the step in the transformed variable; finite
// intervals that fail to converge are bisected.
//
// Integrable endpoint singularities are handled by the substitution itself,
// but a singular finite endpoint should sit at 0: nodes closer to a nonzero
// endpoint than its ulp are dropped.

#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <string>
#include <utility>

#include "gammoments/errors.hpp"

namespace gammoments {

struct QuadratureResult {
  double value = 0.0;
  double abs_error_estimate = 0.0;
  std::size_t evaluations = 0;
};

struct QuadratureOptions {
  double abs_tol = 1e-10;
  double rel_tol = 0.0;
  int min_level = 3;
  int max_level = 10;
  int max_depth = 10;
};

namespace detail {

struct Node {
  double x;
  double weight;
  bool valid;
};

struct TanhSinhMap {
  double lo, hi;
  Node operator()(double t) const {
    const double half = 0.5 * (hi - lo);
    const double u = 0.5 * std::numbers::pi * std::sinh(t);
    const double e = std::exp(-2.0 * std::fabs(u));
    const double dist = half * 2.0 * e / (1.0 + e);
    const double x = t < 0.0 ? lo + dist : hi - dist;
    const double w = half * 0.5 * std::numbers::pi * std::cosh(t) * 4.0 * e / ((1.0 + e) * (1.0 + e));
    const bool valid = dist > 0.0 && x > lo && x < hi && w > 0.0;
    return {x, w, valid};
  }
};

struct ExpSinhMap {
  double lo;
  Node operator()(double t) const {
    const double arg = 0.5 * std::numbers::pi * std::sinh(t);
    if (arg > 700.0 || arg < -740.0) return {0.0, 0.0, false};
    const double e = std::exp(arg);
    const double x = lo + e;
    const double w = 0.5 * std::numbers::pi * std::cosh(t) * e;
    return {x, w, e > 0.0 && x > lo && std::isfinite(w)};
  }
};

struct SinhSinhMap {
  Node operator()(double t) const {
    const double arg = 0.5 * std::numbers::pi * std::sinh(t);
    if (std::fabs(arg) > 700.0) return {0.0, 0.0, false};
    const double x = std::sinh(arg);
    const double w = 0.5 * std::numbers::pi * std::cosh(t) * std::cosh(arg);
    return {x, w, std::isfinite(w)};
  }
};

template <class F, class Map>
struct DoubleExponentialRule {
  F& f;
  Map map;
  std::size_t evaluations = 0;
  double abs_sum = 0.0;

  // Sum of weight * f over nodes t = offset + k * step, k >= 0, walking away
  // from zero in the given direction until the terms become negligible.
  double directional_sum(double offset, double step, double direction, double scale) {
    double sum = 0.0;
    int negligible = 0;
    for (int k = 0; k < 100000; ++k) {
      const double t = direction * (offset + k * step);
      if (std::fabs(t) > 7.0) break;
      const Node node = map(t);
      if (!node.valid) break;
      const double fx = f(node.x);
      ++evaluations;
      if (!std::isfinite(fx)) {
        // Nodes this far out sit within rounding of an endpoint or of
        // infinity; a non-finite value there is an artefact of the
        // integrand's formula (0/0, inf*0), so the walk stops.
        if (std::fabs(t) > 3.0) break;
        throw accuracy_error("integrate: integrand is not finite at x = " + std::to_string(node.x),
                             std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::infinity());
      }
      const double term = node.weight * fx;
      sum += term;
      abs_sum += std::fabs(term);
      const double ref = std::fabs(sum) + scale;
      if (std::fabs(term) <= 1e-20 * ref || term == 0.0) {
        if (++negligible >= 4) break;
      } else {
        negligible = 0;
      }
    }
    return sum;
  }

  // Returns (estimate, error) or signals non-convergence via error > target.
  QuadratureResult run(const QuadratureOptions& opts, bool& converged) {
    double step = 1.0;
    double estimate = 0.0;
    {
      const double right = directional_sum(0.0, 1.0, 1.0, 0.0);
      const double left = directional_sum(1.0, 1.0, -1.0, std::fabs(right));
      estimate = step * (right + left);
    }
    double error = std::numeric_limits<double>::infinity();
    converged = false;
    for (int level = 1; level <= opts.max_level; ++level) {
      step *= 0.5;
      const double scale = std::fabs(estimate) / (2.0 * step);
      const double fresh = directional_sum(step, 2.0 * step, 1.0, scale) +
                           directional_sum(step, 2.0 * step, -1.0, scale);
      const double next = 0.5 * estimate + step * fresh;
      error = std::fabs(next - estimate);
      estimate = next;
      const double target = std::max(opts.abs_tol, opts.rel_tol * std::fabs(estimate));
      const double roundoff = 64.0 * std::numeric_limits<double>::epsilon() * abs_sum * step;
      if (level >= opts.min_level && (error <= target || error <= roundoff)) {
        converged = true;
        break;
      }
    }
    return {estimate, error, evaluations};
  }
};

// Clears `ok` when some piece missed its tolerance at the depth limit; the
// returned value is then the best estimate over the whole interval.
template <class F>
QuadratureResult integrate_finite(F& f, double lo, double hi, const QuadratureOptions& opts, int depth, bool& ok) {
  DoubleExponentialRule<F, TanhSinhMap> rule{f, TanhSinhMap{lo, hi}};
  bool converged = false;
  QuadratureResult r = rule.run(opts, converged);
  if (converged) return r;
  if (depth >= opts.max_depth) {
    ok = false;
    return r;
  }
  const double mid = 0.5 * (lo + hi);
  QuadratureOptions half = opts;
  half.abs_tol = 0.5 * opts.abs_tol;
  const QuadratureResult left = integrate_finite(f, lo, mid, half, depth + 1, ok);
  const QuadratureResult right = integrate_finite(f, mid, hi, half, depth + 1, ok);
  return {left.value + right.value, left.abs_error_estimate + right.abs_error_estimate,
          r.evaluations + left.evaluations + right.evaluations};
}

template <class F>
QuadratureResult integrate_finite(F& f, double lo, double hi, const QuadratureOptions& opts) {
  bool ok = true;
  QuadratureResult r = integrate_finite(f, lo, hi, opts, 0, ok);
  if (!ok) {
    throw accuracy_error("integrate: no convergence on [" + std::to_string(lo) + ", " + std::to_string(hi) + "]",
                         r.value, r.abs_error_estimate);
  }
  return r;
}

template <class F, class Map>
QuadratureResult integrate_mapped(F& f, Map map, const QuadratureOptions& opts) {
  DoubleExponentialRule<F, Map> rule{f, map};
  bool converged = false;
  QuadratureResult r = rule.run(opts, converged);
  if (!converged) {
    throw accuracy_error("integrate: no convergence on an infinite domain", r.value, r.abs_error_estimate);
  }
  return r;
}

}  // namespace detail

/// Integral of f over [lo, hi]; either bound may be infinite.
template <class F>
QuadratureResult integrate(F&& f, double lo, double hi, const QuadratureOptions& opts) {
  if (std::isnan(lo) || std::isnan(hi)) throw domain_error("integrate: NaN bound");
  if (!(opts.abs_tol > 0.0) && !(opts.rel_tol > 0.0)) throw domain_error("integrate: tolerance must be positive");
  if (lo == hi) return {};
  if (lo > hi) {
    QuadratureResult r = integrate(f, hi, lo, opts);
    r.value = -r.value;
    return r;
  }
  const bool lo_inf = std::isinf(lo);
  const bool hi_inf = std::isinf(hi);
  if (!lo_inf && !hi_inf) return detail::integrate_finite(f, lo, hi, opts);
  if (lo_inf && hi_inf) return detail::integrate_mapped(f, detail::SinhSinhMap{}, opts);
  if (hi_inf) return detail::integrate_mapped(f, detail::ExpSinhMap{lo}, opts);
  auto reflected = [&f, hi](double y) { return f(hi - y); };
  return detail::integrate_mapped(reflected, detail::ExpSinhMap{0.0}, opts);
}

template <class F>
QuadratureResult integrate(F&& f, double lo, double hi, double abs_tol = 1e-10) {
  QuadratureOptions opts;
  opts.abs_tol = abs_tol;
  return integrate(std::forward<F>(f), lo, hi, opts);
}

}  // namespace gammoments
