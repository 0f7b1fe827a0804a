#pragma once
// Independent reference computations for the tests. Nothing here calls the
// library routine it is used to check.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <utility>
#include <vector>

#include "cclt/cgm.hpp"

namespace oracle {

/// Exact binomial coefficient for small arguments.
inline long double choose(int n, int k) {
  if (k < 0 || k > n) return 0.0L;
  long double c = 1.0L;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c;
}

/// P(Bin(d, z) >= l) by direct long-double summation of every term.
inline double binom_tail(int d, double z, int l) {
  long double s = 0.0L;
  for (int r = std::max(l, 0); r <= d; ++r) {
    s += choose(d, r) * std::pow(static_cast<long double>(z), r) *
         std::pow(1.0L - static_cast<long double>(z), d - r);
  }
  return static_cast<double>(s);
}

/// Delta_{d,theta,l}(t) / p in closed form. beta(d, e^-s, l) expands to
/// sum_{r>=l} sum_j C(d,r) C(d-r,j) (-1)^j e^{-(r+j)s}, so the integrand
/// e^{2ls} beta is a finite sum of exponentials with exact antiderivatives.
inline double delta_closed(int d, int l, double t) {
  if (l > d || l <= 0) return 0.0;
  long double integral = 0.0L;
  for (int r = l; r <= d; ++r) {
    for (int j = 0; j <= d - r; ++j) {
      const long double c = choose(d, r) * choose(d - r, j) * (j % 2 == 0 ? 1.0L : -1.0L);
      const int a = 2 * l - (r + j);
      integral += a == 0 ? c * t : c * std::expm1(static_cast<long double>(a) * t) / a;
    }
  }
  const long double e2lt = std::exp(2.0L * l * t);
  return static_cast<double>(1.0L - e2lt * binom_tail(d, std::exp(-t), l) + 2.0L * l * integral);
}

/// Gauss-Legendre nodes/weights on [-1, 1] by Newton iteration on P_n.
inline std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n) {
  std::vector<double> x(n), w(n);
  for (int i = 0; i < n; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      const double dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    double p0 = 1.0, p1 = z;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    const double dp = n * (z * p1 - p0) / (z * z - 1.0);
    x[i] = z;
    w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
  return {x, w};
}

struct Atom {
  int d, theta;
  double p;
};

/// sigma_A^2(t) with the closed-form Delta and fixed Gauss-Legendre outer
/// integrals, cutoff k = d - theta + 1.
inline double sigma2(const std::vector<Atom>& atoms, double t) {
  const auto [x, w] = gauss_legendre(40);
  double total = 0.0;
  for (const auto& a : atoms) {
    if (a.theta < 1 || a.theta > a.d) continue;
    const int k = a.d - a.theta + 1;
    total += a.p * delta_closed(a.d, k, t);
    for (int l = k + 1; l <= a.d; ++l) {
      double outer = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) {
        const double s = 0.5 * t * (x[i] + 1.0);
        outer += w[i] * std::pow(std::exp(-s) - std::exp(-t), l - k - 1) * std::exp(-s) *
                 delta_closed(a.d, l, s);
      }
      total += a.p * static_cast<double>(k * choose(l - 1, k)) * 0.5 * t * outer;
    }
  }
  return total;
}

/// Eq. (1) by naive sweeps to the fixed point: every sweep recounts, for each
/// inactive node, the half-edges leading to active nodes.
inline std::vector<std::uint8_t> naive_cascade(const cclt::cgm::Multigraph& mg,
                                               const std::vector<int>& theta) {
  const std::size_t n = mg.num_nodes();
  std::vector<std::uint8_t> active(n, 0);
  for (std::size_t i = 0; i < n; ++i) active[i] = theta[i] == 0;
  for (bool changed = true; changed;) {
    changed = false;
    std::vector<std::uint8_t> next = active;
    for (std::size_t i = 0; i < n; ++i) {
      if (active[i]) continue;
      int exposure = 0;
      for (auto h = mg.offsets[i]; h < mg.offsets[i + 1]; ++h) {
        exposure += active[mg.owner[mg.mate[h]]];
      }
      if (exposure >= theta[i]) {
        next[i] = 1;
        changed = true;
      }
    }
    active.swap(next);
  }
  return active;
}

/// Membership mask of the k-core by repeated peeling of nodes whose
/// remaining multigraph degree (loops count twice) is below k.
inline std::vector<std::uint8_t> kcore(const cclt::cgm::Multigraph& mg, int k) {
  const std::size_t n = mg.num_nodes();
  std::vector<std::uint8_t> in(n, 1);
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      if (!in[i]) continue;
      int deg = 0;
      for (auto h = mg.offsets[i]; h < mg.offsets[i + 1]; ++h) deg += in[mg.owner[mg.mate[h]]];
      if (deg < k) {
        in[i] = 0;
        changed = true;
      }
    }
  }
  return in;
}

/// Normal draws from the standard library (independent of cclt::Rng).
inline std::vector<double> normal_draws(std::size_t count, double mean, double sd,
                                        unsigned seed) {
  std::mt19937_64 eng(seed);
  std::normal_distribution<double> nd(mean, sd);
  std::vector<double> out(count);
  for (auto& v : out) v = nd(eng);
  return out;
}

/// DKW half-width for the empirical CDF of m samples at confidence 1 - alpha.
inline double dkw(double m, double alpha) { return std::sqrt(std::log(2.0 / alpha) / (2.0 * m)); }

}  // namespace oracle
