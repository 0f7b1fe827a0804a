#include "cclt/theory.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <stdexcept>

namespace cclt::theory {

namespace {

void check_probability(double z) {
  if (!(z >= 0.0 && z <= 1.0)) throw std::domain_error("binomial parameter z outside [0,1]");
}

void check_time(double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("time must be >= 0");
}

double choose(int d, int l) {
  if (d > 1000) {
    return std::exp(std::lgamma(d + 1.0) - std::lgamma(l + 1.0) - std::lgamma(d - l + 1.0));
  }
  l = std::min(l, d - l);
  double c = 1.0;
  for (int i = 1; i <= l; ++i) c = c * (d - l + i) / i;
  return c;
}

template <typename Fn>
double sum_inactive(const dist::Distribution& dist, Fn&& term) {
  double total = 0.0;
  for (const auto& a : dist.atoms) {
    if (a.threshold >= 1) total += a.mass * term(a);
  }
  return total;
}

// Inner integrals feed an outer quadrature; they are solved tighter so
// their subdivision noise stays below the outer tolerance.
constexpr double kInnerTolScale = 1e-3;

QuadratureValue delta_with_tol(double p, int d, int l, double t, double tol, int max_depth) {
  if (l > d || l <= 0 || p == 0.0 || t == 0.0) return {0.0, 0.0};
  const double two_l = 2.0 * l;
  const auto inner = adaptive_simpson(
      [&](double s) { return std::exp(two_l * s) * binom_tail(d, std::exp(-s), l); }, 0.0, t,
      tol, max_depth, tol);
  const double value =
      p * (1.0 - std::exp(two_l * t) * binom_tail(d, std::exp(-t), l) + two_l * inner.value);
  return {value, p * two_l * inner.error};
}

CurvePoint curve_point(const dist::Distribution& dist, double t, const QuadratureConfig& cfg) {
  const auto s2 = sigma2_a(dist, t, cfg);
  return {t, a_hat(dist, t), s2.value, s2.error, sigma2_binomial(dist, t)};
}

}  // namespace

void validate(const QuadratureConfig& cfg) {
  if (!(cfg.abs_tol > 0.0) || cfg.max_depth <= 0 || !(cfg.root_tol > 0.0) ||
      !(cfg.scan_step > 0.0) || !(cfg.t_max > 0.0)) {
    throw std::invalid_argument("quadrature config: all fields must be positive");
  }
}

double binom_pmf(int d, double z, int l) {
  check_probability(z);
  if (d < 0) throw std::domain_error("binomial size must be >= 0");
  if (l < 0 || l > d) return 0.0;
  if (z == 0.0) return l == 0 ? 1.0 : 0.0;
  if (z == 1.0) return l == d ? 1.0 : 0.0;
  return choose(d, l) * std::pow(z, l) * std::pow(1.0 - z, d - l);
}

double binom_tail(int d, double z, int l) {
  check_probability(z);
  if (l <= 0) return 1.0;
  if (l > d) return 0.0;
  double sum = 0.0;
  if (l > d * z) {
    for (int r = l; r <= d; ++r) sum += binom_pmf(d, z, r);
    return std::min(sum, 1.0);
  }
  for (int r = 0; r < l; ++r) sum += binom_pmf(d, z, r);
  return std::clamp(1.0 - sum, 0.0, 1.0);
}

double h_b(const dist::Distribution& dist, double z) {
  check_probability(z);
  return sum_inactive(dist, [&](const dist::Atom& a) {
    double s = 0.0;
    for (int l = std::max(survival_cutoff(a.degree, a.threshold), 1); l <= a.degree; ++l) {
      s += l * binom_pmf(a.degree, z, l);
    }
    return s;
  });
}

double phi(const dist::Distribution& dist, double z) {
  return dist::mean_degree(dist) * z * z - h_b(dist, z);
}

RootResult find_zhat(const dist::Distribution& dist, const QuadratureConfig& cfg) {
  validate(cfg);
  const auto f = [&](double z) { return phi(dist, z); };
  const double h = cfg.scan_step;
  const auto steps = static_cast<long>(std::ceil(1.0 / h));
  const auto grid = [&](long k) { return std::max(1.0 - static_cast<double>(k) * h, 0.0); };
  const auto same_sign = [](double a, double b) { return (a > 0 && b > 0) || (a < 0 && b < 0); };

  double hi = 1.0;
  double f_hi = f(hi);
  if (std::abs(f_hi) < cfg.root_tol) {
    return {1.0, same_sign(f(grid(1)), 1.0), grid(1), 1.0};
  }
  for (long k = 1; k <= steps; ++k) {
    const double lo = grid(k);
    const double f_lo = f(lo);
    if (std::abs(f_lo) < cfg.root_tol) {
      const bool tangent = lo > 0.0 && same_sign(f(grid(k + 1)), f_hi);
      return {lo, tangent, grid(k + 1), hi};
    }
    if (!same_sign(f_lo, f_hi)) {
      double a = lo;
      double b = hi;
      double f_a = f_lo;
      while (b - a > cfg.root_tol) {
        const double m = 0.5 * (a + b);
        const double f_m = f(m);
        if (f_m == 0.0) {
          a = b = m;
          break;
        }
        if (same_sign(f_m, f_a)) {
          a = m;
          f_a = f_m;
        } else {
          b = m;
        }
      }
      return {0.5 * (a + b), false, lo, hi};
    }
    hi = lo;
    f_hi = f_lo;
    if (lo == 0.0) break;
  }
  return {0.0, false, 0.0, 0.0};
}

double a_hat(const dist::Distribution& dist, double t) {
  check_time(t);
  const double z = std::exp(-t);
  // Seeds plus the activated part of every other class, so that t = 0
  // reproduces the seed fraction bit for bit.
  double total = 0.0;
  for (const auto& a : dist.atoms) {
    total += a.threshold == 0
                 ? a.mass
                 : a.mass * (1.0 - binom_tail(a.degree, z, survival_cutoff(a.degree, a.threshold)));
  }
  return total;
}

double a_hat_n(const dist::EmpiricalCounts& counts, double t) {
  check_time(t);
  if (counts.n <= 0) throw std::invalid_argument("a_hat_n: empty counts");
  const double z = std::exp(-t);
  double active = 0.0;
  for (const auto& [key, u] : counts.counts) {
    const auto [d, theta] = key;
    const double share = theta == 0 ? 1.0 : 1.0 - binom_tail(d, z, survival_cutoff(d, theta));
    active += static_cast<double>(u) * share;
  }
  return active / static_cast<double>(counts.n);
}

double a_hat_printed(const dist::Distribution& dist, double t) {
  check_time(t);
  const double z = std::exp(-t);
  double total = 0.0;
  for (const auto& a : dist.atoms) {
    if (a.threshold <= a.degree) total += a.mass * binom_tail(a.degree, 1.0 - z, a.threshold);
  }
  return 1.0 - total;
}

QuadratureValue delta(const dist::Distribution& dist, int d, int theta, int l, double t,
                      const QuadratureConfig& cfg) {
  check_time(t);
  validate(cfg);
  return delta_with_tol(dist.mass(d, theta), d, l, t, cfg.abs_tol, cfg.max_depth);
}

QuadratureValue sigma2_a(const dist::Distribution& dist, double t, const QuadratureConfig& cfg) {
  check_time(t);
  validate(cfg);
  QuadratureValue total;
  const double inner_tol = cfg.abs_tol * kInnerTolScale;
  const double e_t = std::exp(-t);
  for (const auto& a : dist.atoms) {
    if (a.threshold < 1 || a.threshold > a.degree) continue;
    const int d = a.degree;
    const int k = survival_cutoff(d, a.threshold);
    const auto lead = delta_with_tol(a.mass, d, k, t, cfg.abs_tol, cfg.max_depth);
    total.value += lead.value;
    total.error += lead.error;
    for (int l = k + 1; l <= d; ++l) {
      double inner_err = 0.0;
      const auto outer = adaptive_simpson(
          [&](double s) {
            const auto dl = delta_with_tol(a.mass, d, l, s, inner_tol, cfg.max_depth);
            inner_err = std::max(inner_err, dl.error);
            return std::pow(std::exp(-s) - e_t, l - k - 1) * std::exp(-s) * dl.value;
          },
          0.0, t, cfg.abs_tol, cfg.max_depth, cfg.abs_tol);
      const double weight = k * choose(l - 1, k);
      total.value += weight * outer.value;
      total.error += weight * (outer.error + t * inner_err);
    }
  }
  return total;
}

double sigma2_binomial(const dist::Distribution& dist, double t) {
  check_time(t);
  const double z = std::exp(-t);
  return sum_inactive(dist, [&](const dist::Atom& a) {
    if (a.threshold > a.degree) return 0.0;
    const double b = binom_tail(a.degree, z, survival_cutoff(a.degree, a.threshold));
    return b * (1.0 - b);
  });
}

std::vector<CurvePoint> curve_serial(const dist::Distribution& dist,
                                     std::span<const double> times,
                                     const QuadratureConfig& cfg) {
  std::vector<CurvePoint> out;
  out.reserve(times.size());
  for (double t : times) out.push_back(curve_point(dist, t, cfg));
  return out;
}

std::vector<CurvePoint> curve(const dist::Distribution& dist, std::span<const double> times,
                              const QuadratureConfig& cfg) {
  std::vector<CurvePoint> out(times.size());
  std::vector<std::exception_ptr> errors(times.size());
  const auto count = static_cast<std::ptrdiff_t>(times.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    const auto k = static_cast<std::size_t>(i);
    try {
      out[k] = curve_point(dist, times[k], cfg);
    } catch (...) {
      errors[k] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

TheoryResult solve(const dist::Distribution& dist, const QuadratureConfig& cfg) {
  validate(cfg);
  dist::require_valid(dist);
  TheoryResult r;
  r.lambda = dist::mean_degree(dist);
  r.root = find_zhat(dist, cfg);
  r.z_hat = r.root.z_hat;
  if (r.z_hat >= 1.0) {
    r.t_star = 0.0;
  } else if (r.z_hat > 0.0) {
    r.t_star = -std::log(r.z_hat);
  }
  r.t_eval = std::isfinite(r.t_star) ? r.t_star : cfg.t_max;
  if (!std::isfinite(r.t_star)) {
    r.warnings.push_back("z_hat = 0: t* is infinite; limits evaluated at t_max");
  }
  if (r.root.tangency) {
    r.clt_supported = false;
    r.warnings.push_back(
        "z_hat is a root without sign change (local minimum of phi); the Gaussian limit is "
        "not supported there");
  }
  r.a_hat_star = a_hat(dist, r.t_eval);
  r.a_hat_printed_star = a_hat_printed(dist, r.t_eval);
  const auto s2 = sigma2_a(dist, r.t_eval, cfg);
  r.sigma2_star = s2.value;
  r.sigma2_error = s2.error;
  r.sigma2_binomial_star = sigma2_binomial(dist, r.t_eval);
  return r;
}

}  // namespace cclt::theory
