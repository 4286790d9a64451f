#pragma once

// Infinite-divisibility probes through Hankel positivity, numeric checks of
// the Levy/Malmsten identities, the KP16 compact-support criterion and
// support endpoints.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gammoments/bernstein.hpp"
#include "gammoments/errors.hpp"
#include "gammoments/momentseq.hpp"
#include "gammoments/quadrature.hpp"
#include "gammoments/specfun.hpp"

namespace gammoments {

inline constexpr std::size_t max_hankel_size = 12;

struct HankelReport {
  int shift = 0;
  double power = 1.0;
  std::vector<std::size_t> sizes;
  std::vector<double> min_eigenvalues;      // of the scaled matrix
  std::vector<double> raw_min_eigenvalues;  // of H itself, NaN on overflow
  std::string normalization;
  std::vector<bool> psd;

  bool all_psd() const { return std::all_of(psd.begin(), psd.end(), [](bool b) { return b; }); }
};

namespace detail {

inline double min_eigenvalue(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw accuracy_error("hankel_psd: eigensolver failed", 0.0, 0.0);
  return es.eigenvalues()(0);
}

}  // namespace detail

/// H[i][j] = mu_{i+j+shift}. The verdict uses D H D with D = diag(H_ii)^{-1/2},
/// a congruence, so PSD-ness is unchanged and c^n rescaling cancels exactly.
inline HankelReport hankel_psd(const LogMomentSequence& seq, std::size_t max_size, int shift, double tol = 1e-9) {
  if (max_size < 1 || max_size > max_hankel_size) {
    throw domain_error("hankel_psd: max_size must lie in [1, 12]");
  }
  if (shift != 0 && shift != 1) throw domain_error("hankel_psd: shift must be 0 or 1");
  if (!(tol >= 0.0)) throw domain_error("hankel_psd: tol must be >= 0");
  const std::size_t top = 2 * (max_size - 1) + static_cast<std::size_t>(shift);
  std::vector<double> lm(top + 1);
  for (std::size_t n = 0; n <= top; ++n) {
    lm[n] = seq.eval(n);
    if (std::isnan(lm[n]) || lm[n] == std::numeric_limits<double>::infinity()) {
      throw domain_error("hankel_psd: log moment at n = " + std::to_string(n) + " is not usable");
    }
  }
  HankelReport r;
  r.shift = shift;
  r.normalization = "diagonal congruence: entries exp(L(i+j+s) - (L(2i+s) + L(2j+s))/2), unit diagonal";
  for (std::size_t k = 1; k <= max_size; ++k) {
    Eigen::MatrixXd scaled(k, k), raw(k, k);
    std::vector<double> half(k);
    for (std::size_t i = 0; i < k; ++i) {
      const double d = lm[2 * i + shift];
      half[i] = std::isfinite(d) ? 0.5 * d : 0.0;
    }
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = 0; j < k; ++j) {
        const double l = lm[i + j + shift];
        scaled(i, j) = std::exp(l - half[i] - half[j]);
        raw(i, j) = std::exp(l);
        if (!std::isfinite(scaled(i, j))) throw domain_error("hankel_psd: scaling error (overflow after normalization)");
      }
    }
    const double norm = scaled.diagonal().cwiseAbs().maxCoeff();
    const double e = detail::min_eigenvalue(scaled);
    r.sizes.push_back(k);
    r.min_eigenvalues.push_back(e);
    r.raw_min_eigenvalues.push_back(raw.allFinite() ? detail::min_eigenvalue(raw)
                                                    : std::numeric_limits<double>::quiet_NaN());
    r.psd.push_back(e >= -tol * std::max(norm, 1e-300));
  }
  return r;
}

/// Hankel probes of mu_n^t for each t and both shifts, ordered by t then shift.
inline std::vector<HankelReport> id_probe(const LogMomentSequence& seq, const std::vector<double>& t_grid,
                                          std::size_t max_size, double tol = 1e-9) {
  std::vector<double> ts = t_grid;
  std::sort(ts.begin(), ts.end());
  std::vector<HankelReport> out;
  for (double t : ts) {
    detail::require_positive(t, "t", "id_probe");
    const auto powered = combine_power(seq, t);
    for (int shift : {0, 1}) {
      auto r = hankel_psd(powered, max_size, shift, tol);
      r.power = t;
      out.push_back(std::move(r));
    }
  }
  return out;
}

inline bool id_probe_passes(const std::vector<HankelReport>& reports) {
  return std::all_of(reports.begin(), reports.end(), [](const HankelReport& r) { return r.all_psd(); });
}

// ---------------------------------------------------------------------------
// Identities

enum class LevyIdentity { malmsten_gamma, malmsten_beta, mt_exponent, logphi_repr };

inline LevyIdentity parse_identity(const std::string& s) {
  if (s == "malmsten_gamma") return LevyIdentity::malmsten_gamma;
  if (s == "malmsten_beta") return LevyIdentity::malmsten_beta;
  if (s == "mt_exponent") return LevyIdentity::mt_exponent;
  if (s == "logphi_repr") return LevyIdentity::logphi_repr;
  throw domain_error("unknown identity '" + s + "'");
}

namespace detail {

inline double param(const Params& p, const std::string& key, std::optional<double> fallback = std::nullopt) {
  const auto it = p.find(key);
  if (it != p.end()) return it->second;
  if (fallback) return *fallback;
  throw domain_error("missing parameter '" + key + "'");
}

inline QuadratureOptions identity_options(double tol) {
  QuadratureOptions o;
  o.abs_tol = tol;
  o.rel_tol = 0.0;
  o.max_level = 12;
  return o;
}

}  // namespace detail

/// |closed form - integral representation|. For malmsten_gamma and
/// mt_exponent `point` is s; for malmsten_beta it is lambda; for logphi_repr
/// it is x, with Phi(x) = (x + c)^alpha and kappa(t) = alpha e^{-ct}.
inline double levy_identity_check(LevyIdentity id, const Params& params, double point, double tol = 1e-12) {
  if (!std::isfinite(point)) throw domain_error("levy_identity_check: point must be finite");
  const auto o = detail::identity_options(tol);
  switch (id) {
    case LevyIdentity::malmsten_gamma: {
      const double s = point;
      if (!(s > -1.0)) throw domain_error("malmsten_gamma: requires s > -1");
      const auto r = detail::half_line(
          [s](double x) {
            if (x <= 1.0) return expm1_minus_linear(-s * x) / (x * std::expm1(x));
            return (std::exp(-(s + 1.0) * x) - (1.0 - s * x) * std::exp(-x)) / (x * -std::expm1(-x));
          },
          o);
      return std::fabs(log_gamma(1.0 + s) - (-euler_gamma * s + r.value));
    }
    case LevyIdentity::malmsten_beta: {
      const double a = detail::param(params, "a");
      const double b = detail::param(params, "b");
      const double s = detail::param(params, "s");
      detail::require_positive(a, "a", "malmsten_beta");
      detail::require_positive(b, "b", "malmsten_beta");
      detail::require_positive(s, "s", "malmsten_beta");
      const double lam = point;
      if (!(lam >= 0.0)) throw domain_error("malmsten_beta: requires lambda >= 0");
      const double closed =
          log_gamma(a + s * lam) + log_gamma(a + b) - log_gamma(a) - log_gamma(a + b + s * lam);
      const auto r = detail::half_line(
          [=](double x) {
            return std::expm1(-lam * x) * std::exp(-a * x / s) * -std::expm1(-b * x / s) / (x * -std::expm1(-x / s));
          },
          o);
      return std::fabs(closed - r.value);
    }
    case LevyIdentity::mt_exponent: {
      const double t = detail::param(params, "t");
      const double s = point;
      detail::require_positive(t, "t", "mt_exponent");
      detail::require_positive(s, "s", "mt_exponent");
      const double closed = t * log_gamma(1.0 + s) - log_gamma(1.0 + s * t);
      const auto r = detail::half_line(
          [t, s](double x) {
            return (t * expm1_minus_linear(-s * x) - expm1_minus_linear(-s * t * x)) / (x * std::expm1(x));
          },
          o);
      return std::fabs(closed - r.value);
    }
    case LevyIdentity::logphi_repr: {
      const double c = detail::param(params, "c", 0.0);
      const double alpha = detail::param(params, "alpha", 1.0);
      if (!(c >= 0.0)) throw domain_error("logphi_repr: requires c >= 0");
      if (!(alpha > 0.0 && alpha <= 1.0)) throw domain_error("logphi_repr: requires alpha in (0, 1]");
      return logphi_representation_check([c, alpha](double x) { return std::pow(x + c, alpha); },
                                         [c, alpha](double t) { return alpha * std::exp(-c * t); }, point);
    }
  }
  throw domain_error("levy_identity_check: unknown identity");
}

// ---------------------------------------------------------------------------
// KP16

struct KP16Report {
  bool sum_balanced = false;
  double kernel_min = 0.0;
  double kernel_argmin = 0.0;
  double limit_at_zero = 0.0;    // finite part when balanced
  int sign_at_infinity = 0;      // sign of the leading exponential
  double support_sup = 0.0;
  bool verdict = false;
};

inline double kp16_kernel(const GammaRatioSpec& spec, double x) {
  double v = 0.0;
  for (const auto& [a, A] : spec.numerators) v += std::exp(-a * x / A) / -std::expm1(-x / A);
  for (const auto& [b, B] : spec.denominators) v -= std::exp(-b * x / B) / -std::expm1(-x / B);
  return v;
}

inline std::vector<double> default_kp16_grid() {
  std::vector<double> g;
  for (int i = 0; i <= 240; ++i) g.push_back(1e-3 * std::pow(5e4, i / 240.0));
  return g;
}

inline KP16Report kp16_check(const GammaRatioSpec& spec, const std::vector<double>& grid = default_kp16_grid()) {
  validate(spec);
  if (grid.empty()) throw domain_error("kp16_check: empty grid");
  for (double x : grid) detail::require_positive(x, "grid point", "kp16_check");
  KP16Report r;
  double sa = 0.0, sb = 0.0, log_sup = 0.0;
  for (const auto& [a, A] : spec.numerators) {
    sa += A;
    log_sup += A * std::log(A);
  }
  for (const auto& [b, B] : spec.denominators) {
    sb += B;
    log_sup -= B * std::log(B);
  }
  r.sum_balanced = std::fabs(sa - sb) <= 1e-12;
  r.support_sup = std::exp(log_sup);

  r.kernel_min = std::numeric_limits<double>::infinity();
  for (double x : grid) {
    const double v = kp16_kernel(spec, x);
    if (v < r.kernel_min) {
      r.kernel_min = v;
      r.kernel_argmin = x;
    }
  }
  // x -> 0: e^{-ax/A}/(1 - e^{-x/A}) = A/x + 1/2 - a/A + O(x).
  if (r.sum_balanced) {
    for (const auto& [a, A] : spec.numerators) r.limit_at_zero += 0.5 - a / A;
    for (const auto& [b, B] : spec.denominators) r.limit_at_zero -= 0.5 - b / B;
    if (r.limit_at_zero < r.kernel_min) {
      r.kernel_min = r.limit_at_zero;
      r.kernel_argmin = 0.0;
    }
  } else {
    r.limit_at_zero = sa > sb ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
  }
  // x -> inf: expand each term as sum_k e^{-(a+k)x/A}; the first exponent with
  // a non-cancelling coefficient decides the sign.
  std::map<double, int> coef;
  auto add = [&](double a, double A, int sgn) {
    for (int k = 0; k < 8; ++k) {
      const double e = (a + k) / A;
      auto it = std::find_if(coef.begin(), coef.end(),
                             [e](const auto& kv) { return std::fabs(kv.first - e) <= 1e-12 * std::max(1.0, e); });
      if (it == coef.end()) {
        coef[e] = sgn;
      } else {
        it->second += sgn;
      }
    }
  };
  for (const auto& [a, A] : spec.numerators) add(a, A, 1);
  for (const auto& [b, B] : spec.denominators) add(b, B, -1);
  for (const auto& [e, c] : coef) {
    if (c != 0) {
      r.sign_at_infinity = c > 0 ? 1 : -1;
      break;
    }
  }
  r.verdict = r.sum_balanced && r.kernel_min >= -1e-10 && r.sign_at_infinity >= 0;
  return r;
}

// ---------------------------------------------------------------------------
// Support endpoint

/// Extrapolated lim exp(eval(n)/n) over dyadic n; +inf signals unbounded support.
inline double support_endpoint(const LogMomentSequence& seq, std::size_t n_max = 256) {
  if (n_max < 32) throw domain_error("support_endpoint: n_max must be at least 32");
  std::vector<double> ns, ys;
  for (std::size_t n = 2; n <= n_max; n *= 2) {
    const double v = seq.eval(n);
    if (!std::isfinite(v)) throw accuracy_error("support_endpoint: non-finite log moment", v, 0.0);
    ns.push_back(static_cast<double>(n));
    ys.push_back(v / static_cast<double>(n));
  }
  const std::size_t m = ys.size();
  const double d_last = ys[m - 1] - ys[m - 2];
  const double d_prev = ys[m - 2] - ys[m - 3];
  if (d_last > 1e-3 && d_last > 0.75 * d_prev) return std::numeric_limits<double>::infinity();
  static const std::vector<std::function<double(double)>> basis = {
      [](double) { return 1.0; }, [](double n) { return std::log(n) / n; }, [](double n) { return 1.0 / n; },
      [](double n) { return 1.0 / (n * n); }};
  return std::exp(detail::extrapolate(ns, ys, basis).intercept);
}

}  // namespace gammoments
