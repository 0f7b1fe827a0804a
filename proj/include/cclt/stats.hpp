#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>

namespace cclt::stats {

/// Reference law for the KS test. Parameters come from theory, never from
/// the sample, so the plain Kolmogorov distribution applies.
struct NormalRef {
  double mean = 0.0;
  double sd = 1.0;
};

struct SummaryStats {
  std::int64_t count = 0;
  double mean = 0.0;
  /// Unbiased; absent for count < 2.
  std::optional<double> variance;
  /// Moment ratios m3/m2^1.5 and m4/m2^2 - 3; absent for count < 8 or m2 == 0.
  std::optional<double> skewness;
  std::optional<double> excess_kurtosis;
  /// Present only when a reference law was supplied.
  std::optional<double> ks_stat;
  std::optional<double> ks_pvalue;
};

/// Throws std::invalid_argument on an empty sample or a reference with sd <= 0.
SummaryStats summarize(std::span<const double> samples,
                       std::optional<NormalRef> reference = std::nullopt);

double normal_cdf(double x, double mean = 0.0, double sd = 1.0);

/// sup |F_N - F| for a continuous F.
double ks_statistic(std::span<const double> samples, const std::function<double(double)>& cdf);

/// P(K > x) for the Kolmogorov limit law, the asymptotic p-value of sqrt(N) D.
double kolmogorov_survival(double x);

}  // namespace cclt::stats
