#pragma once

// Densities of L_t (Mellin transform Gamma(1+s)^t) and M_t by Mellin
// inversion, with the integral-equation residual and tail diagnostics.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "gammoments/errors.hpp"
#include "gammoments/momentseq.hpp"
#include "gammoments/quadrature.hpp"
#include "gammoments/specfun.hpp"

namespace gammoments {

using cplx = std::complex<double>;

enum class DensityTarget { L, M };

inline std::string to_string(DensityTarget t) { return t == DensityTarget::L ? "L_t" : "M_t"; }

inline DensityTarget parse_target(const std::string& s) {
  if (s == "L_t" || s == "L") return DensityTarget::L;
  if (s == "M_t" || s == "M") return DensityTarget::M;
  throw domain_error("unknown density target '" + s + "'");
}

namespace detail {

inline cplx log_gamma_shifted(cplx z) {
  cplx shift = 0.0;
  while (z.real() < 0.5 || std::abs(z) < 16.0) {
    shift += std::log(z);
    z += 1.0;
  }
  const cplx inv = 1.0 / z;
  const cplx inv2 = inv * inv;
  cplx series = 0.0;
  cplx p = inv;
  for (double c : stirling_coefficients) {
    series += c * p;
    p *= inv2;
  }
  return (z - 0.5) * std::log(z) - z + half_log_two_pi + series - shift;
}

}  // namespace detail

/// Continuous branch of log Gamma(z) for Re z > 0 or Im z != 0.
inline cplx log_gamma(cplx z) {
  if (z.imag() == 0.0 && z.real() > 0.0) return {log_gamma(z.real()), 0.0};
  if (z.imag() == 0.0) throw domain_error("log_gamma: complex argument on the non-positive real axis");
  if (z.imag() < 0.0) return std::conj(log_gamma(std::conj(z)));
  if (z.real() >= -8.0) return detail::log_gamma_shifted(z);
  // Reflection in the upper half plane, where
  // log sin(pi z) = -i pi z + log(i/2) + log(1 - e^{2 pi i z}).
  const cplx i(0.0, 1.0);
  const double pi = std::numbers::pi;
  const cplx log_sin = -i * pi * z + cplx(-std::log(2.0), 0.5 * pi) + std::log(1.0 - std::exp(2.0 * pi * i * z));
  return std::log(pi) - log_sin - detail::log_gamma_shifted(1.0 - z);
}

/// sup of the support of M_t.
inline double mt_endpoint(double t) { return t < 1.0 ? std::pow(t, -t) : std::pow(t, t); }

struct MellinSymbol {
  DensityTarget target;
  double t;

  MellinSymbol(DensityTarget target_, double t_) : target(target_), t(t_) {
    detail::require_positive(t, "t", "mellin symbol");
    if (target == DensityTarget::M && t == 1.0) throw domain_error("M_1 is the point mass at 1");
  }

  cplx log_m(cplx s) const {
    const cplx g = t * log_gamma(1.0 + s);
    if (target == DensityTarget::L) return g;
    const cplx h = log_gamma(1.0 + s * t);
    return t < 1.0 ? g - h : h - g;
  }

  double log_m(double s) const {
    const double g = t * gammoments::log_gamma(1.0 + s);
    if (target == DensityTarget::L) return g;
    const double h = gammoments::log_gamma(1.0 + s * t);
    return t < 1.0 ? g - h : h - g;
  }

  // The contour abscissa must exceed this.
  double strip_lo() const { return target == DensityTarget::L ? -1.0 : -std::min(1.0, 1.0 / t); }

  double endpoint() const {
    return target == DensityTarget::L ? std::numeric_limits<double>::infinity() : mt_endpoint(t);
  }
};

// Integrands M(s) x^{a-s} w(s): the density (a = -1, w = 1), the head moment
// int_0^x y^n f(y) dy (a = n, w = 1/(n-s)) and the tail moment (w = 1/(s-n)).
enum class MellinKernel { density, head, tail };

struct ContourResult {
  double value = 0.0;
  double log_value = -std::numeric_limits<double>::infinity();  // log of value when positive
  double error = 0.0;
  double c = 0.0;
  double truncation_u = 0.0;
};

namespace detail {

inline double golden_min(const std::function<double(double)>& f, double lo, double hi) {
  const double r = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo, b = hi;
  double x1 = b - r * (b - a), x2 = a + r * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int i = 0; i < 80 && b - a > 1e-6 * (1.0 + std::fabs(a)); ++i) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - r * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + r * (b - a);
      f2 = f(x2);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace detail

/// (1/2 pi i) int over a contour through c of M(s) x^{a-s} w(s) ds. Without
/// a fixed c the real saddle of the integrand is used. For M_t the contour
/// leans into the half plane where x^{-s} M(s) decays.
inline ContourResult mellin_contour(const MellinSymbol& m, double x, MellinKernel kernel, double n,
                                    std::optional<double> c_fixed, double tol) {
  detail::require_positive(x, "x", "mellin_contour");
  if (!(tol > 0.0)) throw domain_error("mellin_contour: tol must be positive");
  const double lx = std::log(x);
  const double a = kernel == MellinKernel::density ? -1.0 : n;
  double lo = m.strip_lo();
  double hi = std::numeric_limits<double>::infinity();
  if (kernel == MellinKernel::head) hi = n;
  if (kernel == MellinKernel::tail) lo = std::max(lo, n);
  if (!(hi > lo)) throw domain_error("mellin_contour: empty strip for the head moment");

  auto log_w = [&](cplx s) -> cplx {
    if (kernel == MellinKernel::head) return -std::log(n - s);
    if (kernel == MellinKernel::tail) return -std::log(s - n);
    return 0.0;
  };
  auto phi_real = [&](double s) {
    double v = m.log_m(s) + (a - s) * lx;
    if (kernel == MellinKernel::head) v -= std::log(n - s);
    if (kernel == MellinKernel::tail) v -= std::log(s - n);
    return v;
  };

  double c;
  if (c_fixed) {
    c = *c_fixed;
    if (!(c > lo && c < hi)) throw domain_error("mellin_contour: contour abscissa outside the admissible strip");
  } else {
    const double margin = m.target == DensityTarget::L ? 0.05 : 0.25 * std::fabs(m.strip_lo());
    const double left = lo + (kernel == MellinKernel::tail ? 0.05 : margin);
    // For L_t the saddle sits near x^{1/t}.
    const double reach = m.target == DensityTarget::L ? std::min(1e8, 50.0 + 4.0 * std::exp(std::max(0.0, lx) / m.t)) : 60.0;
    double right = std::isfinite(hi) ? hi - 0.05 : left + reach;
    if (kernel == MellinKernel::head && right <= left) right = 0.5 * (lo + hi);
    c = right > left ? detail::golden_min(phi_real, left, right) : 0.5 * (lo + hi);
  }

  double kappa = 0.0;
  if (m.target == DensityTarget::M) kappa = lx < std::log(m.endpoint()) ? 1.0 : -1.0;
  const cplx ds(-kappa, 1.0);
  const double log_g0 = phi_real(c);
  auto log_g = [&](double u) {
    const cplx s = cplx(c, 0.0) + u * ds;
    return m.log_m(s) + (a - s) * lx + log_w(s) - log_g0;
  };
  // Normalized so that the integrand is 1 at u = 0.
  auto integrand = [&](double u) { return (std::exp(log_g(u)) * ds).imag(); };

  double u_max = 1.0;
  const double cut = std::log(tol) - 4.0;
  while (!(log_g(u_max).real() < cut && log_g(2.0 * u_max).real() < cut)) {
    u_max *= 2.0;
    if (u_max > 1.4e5) {
      throw accuracy_error("mellin_density: truncation bound unreachable at tol", 0.0, 0.0);
    }
  }
  // Rough phase speed along the contour.
  const double freq = m.target == DensityTarget::L
                          ? 1.0 + std::fabs(lx) + std::max(1.0, m.t) * std::log(2.0 + u_max)
                          : 1.0 + 2.0 * std::fabs(lx - std::log(m.endpoint()));
  const double width = std::min(16.0, 4.0 * std::numbers::pi / freq);
  const auto panels = static_cast<std::size_t>(std::ceil(u_max / width));
  QuadratureOptions o;
  o.rel_tol = 0.0;
  o.max_level = 10;
  o.max_depth = 4;
  const double base_tol = std::max(tol / static_cast<double>(panels), 1e-15);
  double sum = 0.0, err = 0.0;
  for (std::size_t k = 0; k < panels; ++k) {
    const double u0 = u_max * static_cast<double>(k) / static_cast<double>(panels);
    const double u1 = u_max * static_cast<double>(k + 1) / static_cast<double>(panels);
    // Rounding floor: log M is known to about eps |s log s| absolute.
    const cplx s0 = cplx(c, 0.0) + u0 * ds;
    const double noise = 4e-16 * (2.0 + std::abs(s0) * (std::fabs(lx) + std::max(1.0, m.t) * std::log(2.0 + std::abs(s0))));
    const double peak = std::exp(std::max(log_g(u0).real(), log_g(u1).real()));
    o.abs_tol = std::max(base_tol, noise * peak * (u1 - u0));
    try {
      const auto r = integrate(integrand, u0, u1, o);
      sum += r.value;
      err += r.abs_error_estimate;
    } catch (const accuracy_error& e) {
      // Far along the contour log M is a difference of large terms; keep the
      // rounding-limited estimate and report its error.
      sum += e.best_estimate();
      err += e.error_estimate();
    }
  }
  const double scale = std::exp(log_g0) / std::numbers::pi;
  ContourResult out;
  out.value = scale * sum;
  if (sum > 0.0) out.log_value = log_g0 + std::log(sum / std::numbers::pi);
  out.error = scale * (err + std::exp(cut) * u_max);
  out.c = c;
  out.truncation_u = u_max;
  return out;
}

inline double survival(DensityTarget target, double t, double x, double tol = 1e-12) {
  const MellinSymbol m(target, t);
  if (x >= m.endpoint()) return 0.0;
  return mellin_contour(m, x, MellinKernel::tail, 0.0, std::nullopt, tol).value;
}

inline double cdf(DensityTarget target, double t, double x, double tol = 1e-12) {
  const MellinSymbol m(target, t);
  if (x >= m.endpoint()) return 1.0;
  return mellin_contour(m, x, MellinKernel::head, 0.0, std::nullopt, tol).value;
}

// ---------------------------------------------------------------------------
// Tables

struct DensityTable {
  double t = 1.0;
  DensityTarget target = DensityTarget::L;
  std::vector<double> grid;
  std::vector<double> values;
  std::vector<double> error_estimates;
  std::optional<double> contour_c;  // empty: saddle abscissa per point
  double truncation_u = 0.0;
  double head_mass = 0.0;  // P[X < grid.front()]
  double tail_mass = 0.0;  // P[X > grid.back()]
  bool full_support = false;
  bool clipped = false;
  double clipped_max = 0.0;
};

inline std::vector<double> geometric_grid(double lo, double hi, std::size_t count) {
  if (!(lo > 0.0 && hi > lo) || count < 2) throw domain_error("geometric_grid: need 0 < lo < hi and count >= 2");
  std::vector<double> g(count);
  const double step = std::log(hi / lo) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) g[i] = lo * std::exp(step * static_cast<double>(i));
  g.back() = hi;
  return g;
}

/// Grid uniform in log(x/(e - x)) between lo and e(1 - gap), e the endpoint.
inline std::vector<double> logit_grid(double lo, double endpoint, double gap, std::size_t count) {
  if (!(lo > 0.0 && lo < endpoint) || !(gap > 0.0 && gap < 1.0) || count < 2) {
    throw domain_error("logit_grid: need 0 < lo < endpoint, gap in (0, 1), count >= 2");
  }
  const double y0 = std::log(lo / (endpoint - lo));
  const double y1 = std::log((1.0 - gap) / gap);
  std::vector<double> g(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double y = y0 + (y1 - y0) * static_cast<double>(i) / static_cast<double>(count - 1);
    g[i] = endpoint / (1.0 + std::exp(-y));
  }
  return g;
}

/// From 1e-3: geometric up to where the survival drops below 1e-12 for L_t;
/// logit-uniform up to (1 - 1e-3) of the endpoint for M_t.
inline std::vector<double> default_density_grid(DensityTarget target, double t, std::size_t count = 400) {
  const MellinSymbol m(target, t);
  if (target == DensityTarget::M) return logit_grid(1e-3, m.endpoint(), 1e-3, count);
  double hi = std::max(2.0, std::pow(28.0 / t, t));
  for (int i = 0; i < 60 && survival(target, t, hi) >= 1e-12; ++i) hi *= 1.25;
  return geometric_grid(1e-3, hi, count);
}

inline DensityTable mellin_density(DensityTarget target, double t, const std::vector<double>& grid,
                                   std::optional<double> contour_c = std::nullopt, double tol = 1e-12,
                                   unsigned threads = 1) {
  const MellinSymbol m(target, t);
  if (grid.empty()) throw domain_error("mellin_density: empty grid");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0) || (i > 0 && !(grid[i] > grid[i - 1]))) {
      throw domain_error("mellin_density: grid must be positive and strictly increasing");
    }
  }
  if (contour_c && !(*contour_c > m.strip_lo())) {
    throw domain_error("mellin_density: contour_c must exceed " + std::to_string(m.strip_lo()));
  }
  DensityTable tab;
  tab.t = t;
  tab.target = target;
  tab.grid = grid;
  tab.contour_c = contour_c;
  std::vector<ContourResult> res(grid.size());
  auto work = [&](std::size_t first, std::size_t step) {
    for (std::size_t i = first; i < grid.size(); i += step) {
      if (grid[i] >= m.endpoint()) {
        res[i] = ContourResult{};
      } else {
        res[i] = mellin_contour(m, grid[i], MellinKernel::density, 0.0, contour_c, tol);
      }
    }
  };
  const std::size_t nt = std::max<std::size_t>(1, std::min<std::size_t>(threads, grid.size()));
  if (nt == 1) {
    work(0, 1);
  } else {
    std::vector<std::exception_ptr> errs(nt);
    std::vector<std::thread> pool;
    for (std::size_t k = 0; k < nt; ++k) {
      pool.emplace_back([&, k] {
        try {
          work(k, nt);
        } catch (...) {
          errs[k] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errs) {
      if (e) std::rethrow_exception(e);
    }
  }
  for (const auto& r : res) {
    double v = r.value;
    if (v < 0.0) {
      tab.clipped = true;
      tab.clipped_max = std::max(tab.clipped_max, -v);
      v = 0.0;
    }
    tab.values.push_back(v);
    tab.error_estimates.push_back(r.error);
    tab.truncation_u = std::max(tab.truncation_u, r.truncation_u);
  }
  tab.head_mass = cdf(target, t, grid.front());
  tab.tail_mass = survival(target, t, grid.back());
  tab.full_support = target == DensityTarget::M || tab.tail_mass <= 1e-8;
  return tab;
}

inline double mellin_density_at(DensityTarget target, double t, double x, std::optional<double> contour_c = std::nullopt,
                                 double tol = 1e-12) {
  const MellinSymbol m(target, t);
  if (x >= m.endpoint()) return 0.0;
  return mellin_contour(m, x, MellinKernel::density, 0.0, contour_c, tol).value;
}

namespace detail {

// Composite Simpson on an arbitrary increasing grid, the last interval
// handled by the three-point end formula when the count is odd.
inline double simpson(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n < 2) return 0.0;
  if (n == 2) return 0.5 * (x[1] - x[0]) * (y[0] + y[1]);
  const std::size_t intervals = n - 1;
  double s = 0.0;
  std::size_t i = 0;
  for (; i + 2 <= intervals - (intervals % 2); i += 2) {
    const double h0 = x[i + 1] - x[i], h1 = x[i + 2] - x[i + 1];
    s += (h0 + h1) / 6.0 *
         ((2.0 - h1 / h0) * y[i] + (h0 + h1) * (h0 + h1) / (h0 * h1) * y[i + 1] + (2.0 - h0 / h1) * y[i + 2]);
  }
  if (intervals % 2 == 1) {
    const double h0 = x[n - 2] - x[n - 3], h1 = x[n - 1] - x[n - 2];
    const double al = (2.0 * h1 * h1 + 3.0 * h0 * h1) / (6.0 * (h0 + h1));
    const double be = (h1 * h1 + 3.0 * h0 * h1) / (6.0 * h0);
    const double et = h1 * h1 * h1 / (6.0 * h0 * (h0 + h1));
    s += al * y[n - 1] + be * y[n - 2] - et * y[n - 3];
  }
  return s;
}

// int x^n f(x) dx over the table range, in the variable log x, or for M_t in
// log(x/(e - x)) which also absorbs the endpoint singularity.
inline double table_moment(const DensityTable& tab, int n) {
  const double e = tab.target == DensityTarget::M ? mt_endpoint(tab.t) : 0.0;
  std::vector<double> v(tab.grid.size()), y(tab.grid.size());
  for (std::size_t i = 0; i < tab.grid.size(); ++i) {
    const double x = tab.grid[i];
    const double jac = e > 0.0 ? x * (e - x) / e : x;
    v[i] = e > 0.0 ? std::log(x / (e - x)) : std::log(x);
    y[i] = std::pow(x, n) * jac * tab.values[i];
  }
  return simpson(v, y);
}

}  // namespace detail

/// max |f(x) - (1/Gamma(t)) int_x^inf f(y) log(y/x)^{t-1} dy| over interior points.
inline double integral_equation_residual(const DensityTable& tab, double t) {
  if (tab.target != DensityTarget::L) throw domain_error("integral_equation_residual: needs an L_t table");
  detail::require_positive(t, "t", "integral_equation_residual");
  if (!(tab.tail_mass <= 1e-8)) {
    throw domain_error("integral_equation_residual: insufficient tail coverage (mass beyond grid " +
                       std::to_string(tab.tail_mass) + ")");
  }
  const std::size_t n = tab.grid.size();
  if (n < 8) throw domain_error("integral_equation_residual: grid too short");
  std::vector<double> v(n), fy(n);
  for (std::size_t i = 0; i < n; ++i) {
    v[i] = std::log(tab.grid[i]);
    fy[i] = tab.values[i] * tab.grid[i];
  }
  const double inv_gamma = reciprocal_gamma(t);
  double worst = 0.0;
  for (std::size_t i = 1; i + 5 < n; ++i) {
    double rhs = 0.0;
    if (t >= 1.0) {
      std::vector<double> xs(v.begin() + static_cast<std::ptrdiff_t>(i), v.end()), ys;
      for (std::size_t j = i; j < n; ++j) ys.push_back(fy[j] * std::pow(v[j] - v[i], t - 1.0));
      rhs = detail::simpson(xs, ys);
    } else {
      // Linear interpolation of f(y) y against the weight (v - v_i)^{t-1}.
      for (std::size_t j = i; j + 1 < n; ++j) {
        const double p = v[j] - v[i], q = v[j + 1] - v[i], h = q - p;
        const double m0 = (std::pow(q, t) - std::pow(p, t)) / t;
        const double m1 = (std::pow(q, t + 1.0) - std::pow(p, t + 1.0)) / (t + 1.0) - p * m0;
        rhs += fy[j] * (m0 - m1 / h) + fy[j + 1] * m1 / h;
      }
    }
    rhs += tab.tail_mass * std::pow(v[n - 1] - v[i], t - 1.0);
    worst = std::max(worst, std::fabs(tab.values[i] - inv_gamma * rhs));
  }
  return worst;
}

struct DensityDiagnostics {
  double mass = 0.0;
  std::vector<double> moments;  // n = 0..4
  std::optional<double> tail_p;
  std::optional<double> tail_c;
  std::string tail_note;
  std::vector<double> log_derivative_x;
  std::vector<double> log_derivative;  // -x f'(x)/f(x)
};

inline DensityDiagnostics density_diagnostics(const DensityTable& tab) {
  if (!tab.full_support) throw domain_error("density_diagnostics: table is not full-support");
  const MellinSymbol m(tab.target, tab.t);
  DensityDiagnostics d;
  const double lo = tab.grid.front(), hi = tab.grid.back();
  for (int n = 0; n <= 4; ++n) {
    const double head = n == 0 ? tab.head_mass : mellin_contour(m, lo, MellinKernel::head, n, std::nullopt, 1e-12).value;
    double tail = 0.0;
    if (hi < m.endpoint()) {
      tail = n == 0 ? tab.tail_mass : mellin_contour(m, hi, MellinKernel::tail, n, std::nullopt, 1e-12).value;
    }
    d.moments.push_back(head + detail::table_moment(tab, n) + tail);
  }
  d.mass = d.moments[0];

  if (tab.target == DensityTarget::M) {
    d.tail_note = "compact support; no tail fit";
  } else {
    std::vector<double> xs, ls;
    for (std::size_t i = 0; i < tab.grid.size(); ++i) {
      if (tab.grid[i] < hi / 10.0) continue;
      const double l = mellin_contour(m, tab.grid[i], MellinKernel::tail, 0.0, std::nullopt, 1e-12).log_value;
      if (!(l < 0.0) || !std::isfinite(l) || !(tab.values[i] > 0.0)) {
        xs.clear();
        break;
      }
      xs.push_back(tab.grid[i]);
      ls.push_back(l);
    }
    if (xs.size() < 3) {
      d.tail_note = "non-positive values in the fit region; fit skipped";
    } else {
      // log S(x) = -c x^p by least squares; c is linear given p.
      auto best_c = [&](double p) {
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
          const double q = std::pow(xs[i], p);
          num -= ls[i] * q;
          den += q * q;
        }
        return num / den;
      };
      auto sse = [&](double p) {
        const double c = best_c(p);
        double s = 0.0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
          const double e = ls[i] + c * std::pow(xs[i], p);
          s += e * e;
        }
        return s;
      };
      const double p = detail::golden_min(sse, 0.02, 10.0);
      d.tail_p = p;
      d.tail_c = best_c(p);
      d.tail_note = "log P[X > x] ~ -c x^p fitted on the last decade of the grid";
    }
  }

  for (std::size_t i = 1; i + 1 < tab.grid.size(); ++i) {
    const double a = tab.values[i - 1], b = tab.values[i + 1];
    if (!(a > 0.0 && b > 0.0)) continue;
    d.log_derivative_x.push_back(tab.grid[i]);
    d.log_derivative.push_back(-(std::log(b) - std::log(a)) / (std::log(tab.grid[i + 1]) - std::log(tab.grid[i - 1])));
  }
  return d;
}

inline std::string format_double(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, r.ptr);
}

inline std::string to_csv(const DensityTable& tab) {
  std::string out = "x,f,err\n";
  for (std::size_t i = 0; i < tab.grid.size(); ++i) {
    out += format_double(tab.grid[i]) + "," + format_double(tab.values[i]) + "," +
           format_double(tab.error_estimates[i]) + "\n";
  }
  return out;
}

}  // namespace gammoments
