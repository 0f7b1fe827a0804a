#pragma once

#include <limits>
#include <span>
#include <string>
#include <vector>

#include "cclt/dist.hpp"
#include "cclt/quadrature.hpp"

namespace cclt::theory {

struct QuadratureConfig {
  double abs_tol = 1e-9;
  int max_depth = 40;
  double root_tol = 1e-12;
  double scan_step = 1e-4;
  /// Evaluation horizon used in place of t* = +inf when z_hat = 0.
  double t_max = 20.0;
};

/// Throws std::invalid_argument unless every field is positive.
void validate(const QuadratureConfig& cfg);

/// P(Bin(d, z) = l).
double binom_pmf(int d, double z, int l);
/// P(Bin(d, z) >= l); 1 for l <= 0 and 0 for l > d.
double binom_tail(int d, double z, int l);

/// Fewest white balls a bin of degree d and threshold theta can keep and
/// still be inactive: it turns active once theta balls have died. Seeds
/// (theta = 0) get d + 1, i.e. never inactive; theta > d gives <= 0.
constexpr int survival_cutoff(int degree, int threshold) { return degree - threshold + 1; }

/// Limiting white-ball mass in inactive bins when each ball survives with
/// probability z: sum over theta >= 1 of p(d, theta) sum_{l >= cutoff} l b(d, z, l).
double h_b(const dist::Distribution& dist, double z);

/// lambda z^2 - h_B(z).
double phi(const dist::Distribution& dist, double z);

struct RootResult {
  double z_hat = 0.0;
  /// Root with no sign change (a local minimum of phi); the CLT does not
  /// cover this case.
  bool tangency = false;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
};

/// Largest zero of phi on [0, 1]: downward grid scan from 1, refined by
/// bisection. Falls back to 0, which is always a root.
RootResult find_zhat(const dist::Distribution& dist, const QuadratureConfig& cfg = {});

/// Limiting active fraction 1 - sum_{theta>=1} p(d,theta) beta(d, e^-t, cutoff),
/// summed as seeds + sum p (1 - beta).
double a_hat(const dist::Distribution& dist, double t);
/// Same with the empirical fractions u_n(d, theta) / n.
double a_hat_n(const dist::EmpiricalCounts& counts, double t);
/// The curve in its printed form 1 - sum_{theta<=d} p beta(d, 1 - e^-t, theta).
/// Kept for diagnostics only: it starts at 1 - (seed fraction).
double a_hat_printed(const dist::Distribution& dist, double t);

/// Delta_{d,theta,l}(t) = p(d,theta) (1 - e^{2lt} beta(d,e^-t,l)
///                        + 2l int_0^t e^{2ls} beta(d,e^-s,l) ds), zero for l > d.
QuadratureValue delta(const dist::Distribution& dist, int d, int theta, int l, double t,
                      const QuadratureConfig& cfg = {});

/// Gaussian-limit variance in the Delta-integral form: for every atom with
/// 1 <= theta <= d and k = cutoff, Delta_{d,theta,k}(t) plus
/// sum_{l=k+1}^{d} k C(l-1,k) int_0^t (e^-s - e^-t)^{l-k-1} e^-s Delta_{d,theta,l}(s) ds.
QuadratureValue sigma2_a(const dist::Distribution& dist, double t,
                         const QuadratureConfig& cfg = {});

/// Variance of the scaled inactive-bin count before the stop: each inactive
/// bin survives independently, so it is sum p beta (1 - beta) at the cutoff.
double sigma2_binomial(const dist::Distribution& dist, double t);

struct CurvePoint {
  double t = 0.0;
  double a_hat = 0.0;
  double sigma2 = 0.0;
  double sigma2_error = 0.0;
  double sigma2_binomial = 0.0;
};

/// (t, a_hat, sigma2) on a grid, OpenMP-parallel over the points.
std::vector<CurvePoint> curve(const dist::Distribution& dist, std::span<const double> times,
                              const QuadratureConfig& cfg = {});
/// Serial reference for curve().
std::vector<CurvePoint> curve_serial(const dist::Distribution& dist,
                                     std::span<const double> times,
                                     const QuadratureConfig& cfg = {});

struct TheoryResult {
  double lambda = 0.0;
  double z_hat = 0.0;
  /// -ln z_hat; +inf when z_hat = 0.
  double t_star = std::numeric_limits<double>::infinity();
  /// Time at which a_hat and sigma2 are evaluated: t_star, or t_max if infinite.
  double t_eval = 0.0;
  double a_hat_star = 0.0;
  double sigma2_star = 0.0;
  double sigma2_error = 0.0;
  /// Diagnostics.
  double sigma2_binomial_star = 0.0;
  double a_hat_printed_star = 0.0;
  RootResult root;
  /// False when tangency is flagged: sigma2 is reported but the CLT does not apply.
  bool clt_supported = true;
  std::vector<std::string> warnings;
};

TheoryResult solve(const dist::Distribution& dist, const QuadratureConfig& cfg = {});

}  // namespace cclt::theory
