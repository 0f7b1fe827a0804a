#include "cclt/mc.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cclt/cascade.hpp"
#include "cclt/cgm.hpp"
#include "cclt/rng.hpp"

namespace cclt::mc {

TrialError::TrialError(std::int64_t trial, const std::string& what)
    : std::runtime_error("trial " + std::to_string(trial) + ": " + what), trial_(trial) {}

TrialRecord run_trial(const dist::Distribution& dist, std::int64_t n, std::int64_t k,
                      std::uint64_t root_seed, double eval_time) {
  if (!(eval_time >= 0.0)) throw std::invalid_argument("eval_time must be >= 0");
  TrialRecord rec;
  rec.trial = k;
  rec.seed = mix_seed(root_seed, static_cast<std::uint64_t>(k));
  rec.n = n;

  const auto seq = dist::realize_sampled(dist, n, mix_seed(rec.seed, 0));
  const auto mg = cgm::build_multigraph(seq, mix_seed(rec.seed, 1));
  cascade::ContinuousOptions options;
  options.snapshot_points = 0;
  const auto run = cascade::run_continuous(mg, seq.thresholds, mix_seed(rec.seed, 2), options);

  const auto& traj = run.trajectory;
  const double t = std::min(eval_time, traj.tau);
  rec.final_size = run.cascade.final_size;
  rec.tau = traj.tau;
  rec.b_at_tau = traj.terminal.b_n;
  rec.a_hat_n_stop = theory::a_hat_n(dist::count(seq), t);
  rec.a_at_t = cascade::evaluate_at(traj, t).a_n;
  const double nd = static_cast<double>(n);
  rec.xi = (static_cast<double>(rec.a_at_t) - nd * rec.a_hat_n_stop) / std::sqrt(nd);
  return rec;
}

double default_eval_time(const theory::TheoryResult& result) {
  return std::isfinite(result.t_star) ? result.t_star + 1.0 : result.t_eval;
}

void write_results_csv(std::ostream& os, const std::vector<TrialRecord>& records) {
  const auto old_precision = os.precision(17);
  os << "trial,seed,n,final_size,tau,a_hat_n_stop,A_at_t,xi\n";
  for (const auto& r : records) {
    os << r.trial << ',' << r.seed << ',' << r.n << ',' << r.final_size << ',' << r.tau << ','
       << r.a_hat_n_stop << ',' << r.a_at_t << ',' << r.xi << '\n';
  }
  os.precision(old_precision);
}

std::vector<TrialRecord> read_results_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != "trial,seed,n,final_size,tau,a_hat_n_stop,A_at_t,xi") {
    throw std::runtime_error("results csv: bad header");
  }
  std::vector<TrialRecord> out;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    TrialRecord r;
    if (!(row >> r.trial >> r.seed >> r.n >> r.final_size >> r.tau >> r.a_hat_n_stop >>
          r.a_at_t >> r.xi)) {
      throw std::runtime_error("results csv: malformed row " + std::to_string(out.size() + 1));
    }
    r.b_at_tau = r.n - r.final_size;
    out.push_back(r);
  }
  return out;
}

std::vector<double> xi_samples(const std::vector<TrialRecord>& records) {
  std::vector<double> xs;
  xs.reserve(records.size());
  for (const auto& r : records) xs.push_back(r.xi);
  return xs;
}

HbCheck hb_empirical_check(const dist::Distribution& dist, std::int64_t n, std::uint64_t seed,
                           int points) {
  if (points < 2) throw std::invalid_argument("hb_empirical_check: need at least 2 grid points");
  const auto seq = dist::realize_rounded(dist, n);
  const auto mg = cgm::build_multigraph(seq, mix_seed(seed, 1));
  cascade::ContinuousOptions options;
  options.snapshot_points = 0;
  const auto run = cascade::run_continuous(mg, seq.thresholds, mix_seed(seed, 2), options);

  HbCheck out;
  out.tau = run.trajectory.tau;
  if (out.tau == 0.0) return out;
  const double nd = static_cast<double>(n);
  for (int j = 0; j < points; ++j) {
    const double t = j + 1 == points ? out.tau : out.tau * j / (points - 1);
    const double emp = static_cast<double>(cascade::evaluate_at(run.trajectory, t).h_b) / nd;
    const double th = theory::h_b(dist, std::exp(-t));
    out.grid.push_back(t);
    out.empirical.push_back(emp);
    out.theory.push_back(th);
    out.max_deviation = std::max(out.max_deviation, std::abs(emp - th));
  }
  return out;
}

TauConcentration tau_concentration(const std::vector<TrialRecord>& records, double t_star,
                                   double tolerance) {
  TauConcentration out;
  out.t_star = t_star;
  if (records.empty()) throw std::invalid_argument("tau_concentration: no records");
  std::vector<double> taus;
  for (const auto& r : records) taus.push_back(r.tau);
  const auto s = stats::summarize(taus);
  out.mean_tau = s.mean;
  out.sd_tau = s.variance ? std::sqrt(*s.variance) : 0.0;
  if (!std::isfinite(t_star)) {
    out.skipped = true;
    return out;
  }
  out.pass = std::abs(out.mean_tau - t_star) < tolerance;
  return out;
}

std::vector<SweepRow> convergence_sweep(const dist::Distribution& dist,
                                        const std::vector<std::int64_t>& n_list,
                                        std::int64_t trials, std::uint64_t root_seed,
                                        double eval_time, int workers) {
  if (n_list.empty()) throw std::invalid_argument("convergence_sweep: empty n list");
  if (!std::is_sorted(n_list.begin(), n_list.end(), std::less_equal<>())) {
    throw std::invalid_argument("convergence_sweep: n list must be strictly increasing");
  }
  std::vector<SweepRow> rows;
  for (std::int64_t n : n_list) {
    const auto records = run_trials({dist, n, trials, root_seed, eval_time}, workers);
    std::vector<double> fractions;
    std::vector<double> taus;
    for (const auto& r : records) {
      fractions.push_back(static_cast<double>(r.final_size) / static_cast<double>(n));
      taus.push_back(r.tau);
    }
    SweepRow row;
    row.n = n;
    row.trials = trials;
    row.mean_fraction = stats::summarize(fractions).mean;
    row.var_xi = stats::summarize(xi_samples(records)).variance;
    row.mean_tau = stats::summarize(taus).mean;
    rows.push_back(row);
  }
  return rows;
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  const auto old_precision = os.precision(17);
  os << "n,trials,mean_fraction,var_xi,mean_tau\n";
  for (const auto& r : rows) {
    os << r.n << ',' << r.trials << ',' << r.mean_fraction << ',';
    if (r.var_xi) os << *r.var_xi;
    os << ',' << r.mean_tau << '\n';
  }
  os.precision(old_precision);
}

}  // namespace cclt::mc
