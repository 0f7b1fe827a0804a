#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "cclt/dist.hpp"
#include "cclt/stats.hpp"
#include "cclt/theory.hpp"

namespace cclt::mc {

struct TrialRecord {
  std::int64_t trial = 0;
  std::uint64_t seed = 0;
  std::int64_t n = 0;
  std::int64_t final_size = 0;
  double tau = 0.0;
  /// Empirical a_hat_n(t ^ tau) from the realization's own counts.
  double a_hat_n_stop = 0.0;
  /// A_n(t ^ tau).
  std::int64_t a_at_t = 0;
  /// n^-1/2 (A_at_t - n a_hat_n_stop).
  double xi = 0.0;
  /// B_n(tau); kept for the conservation check, not written to CSV.
  std::int64_t b_at_tau = 0;

  friend bool operator==(const TrialRecord&, const TrialRecord&) = default;
};

struct BatchSpec {
  dist::Distribution dist;
  std::int64_t n = 0;
  std::int64_t trials = 0;
  std::uint64_t root_seed = 0;
  double eval_time = 0.0;
};

/// A trial threw; the batch is aborted and this names the lowest failing index.
class TrialError : public std::runtime_error {
 public:
  TrialError(std::int64_t trial, const std::string& what);
  std::int64_t trial() const noexcept { return trial_; }

 private:
  std::int64_t trial_;
};

/// Trial k of a batch. Seeds: trial = mix_seed(root, k); realize_sampled,
/// build_multigraph and run_continuous get mix_seed(trial, 0 / 1 / 2).
TrialRecord run_trial(const dist::Distribution& dist, std::int64_t n, std::int64_t k,
                      std::uint64_t root_seed, double eval_time);

/// Serial reference: trials in index order, stops at the first failure.
std::vector<TrialRecord> run_trials_serial(const BatchSpec& spec);

/// OpenMP over trials; output equals run_trials_serial for any worker count.
std::vector<TrialRecord> run_trials(const BatchSpec& spec, int workers);

/// t* + 1, or the quadrature horizon when t* is infinite.
double default_eval_time(const theory::TheoryResult& result);

void write_results_csv(std::ostream& os, const std::vector<TrialRecord>& records);
/// Inverse of write_results_csv (b_at_tau is not stored and reads back as n - final_size).
std::vector<TrialRecord> read_results_csv(std::istream& is);

std::vector<double> xi_samples(const std::vector<TrialRecord>& records);

struct HbCheck {
  double max_deviation = 0.0;
  double tau = 0.0;
  std::vector<double> grid;
  std::vector<double> empirical;
  std::vector<double> theory;
};

/// One continuous run on realize_rounded(dist, n); sup over a uniform
/// `points`-point grid on [0, tau] of |H_B(t)/n - h_B(e^-t)|. Empty grid when tau = 0.
HbCheck hb_empirical_check(const dist::Distribution& dist, std::int64_t n, std::uint64_t seed,
                           int points);

struct TauConcentration {
  double mean_tau = 0.0;
  double sd_tau = 0.0;
  /// +inf marks the skipped z_hat = 0 case.
  double t_star = 0.0;
  bool skipped = false;
  bool pass = false;
};

TauConcentration tau_concentration(const std::vector<TrialRecord>& records, double t_star,
                                   double tolerance);

struct SweepRow {
  std::int64_t n = 0;
  std::int64_t trials = 0;
  double mean_fraction = 0.0;
  std::optional<double> var_xi;
  double mean_tau = 0.0;
};

/// One batch per n (n_list nonempty, strictly increasing).
std::vector<SweepRow> convergence_sweep(const dist::Distribution& dist,
                                        const std::vector<std::int64_t>& n_list,
                                        std::int64_t trials, std::uint64_t root_seed,
                                        double eval_time, int workers);

/// Columns n,trials,mean_fraction,var_xi,mean_tau; absent variance is an empty field.
void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows);

}  // namespace cclt::mc
