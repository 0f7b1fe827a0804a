#include "cclt/verify.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "cclt/cascade.hpp"
#include "cclt/cgm.hpp"
#include "cclt/io.hpp"
#include "cclt/mc.hpp"
#include "cclt/rng.hpp"
#include "cclt/stats.hpp"

namespace cclt::verify {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

dist::Distribution example_dist() { return {{{3, 0, 0.1}, {3, 2, 0.9}}}; }

dist::Distribution kcore_dist() {
  return dist::preset_kcore({{2, 0.2}, {3, 0.3}, {4, 0.3}, {5, 0.2}}, 2);
}

dist::Distribution no_seed_dist() { return {{{1, 1, 1.0}}}; }

std::string fmt(double x) {
  std::ostringstream os;
  os << std::setprecision(6) << x;
  return os.str();
}

json opt(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json stats_json(const stats::SummaryStats& s) {
  return {{"count", s.count},
          {"mean", s.mean},
          {"variance", opt(s.variance)},
          {"skewness", opt(s.skewness)},
          {"excess_kurtosis", opt(s.excess_kurtosis)},
          {"ks_stat", opt(s.ks_stat)},
          {"ks_pvalue", opt(s.ks_pvalue)}};
}

std::string results_csv(const std::vector<mc::TrialRecord>& records) {
  std::ostringstream os;
  mc::write_results_csv(os, records);
  return os.str();
}

void write_text(const fs::path& path, const std::string& text) {
  io::write_atomic(path, [&](std::ostream& os) { os << text; });
}

double mean_fraction(const std::vector<mc::TrialRecord>& records) {
  double sum = 0.0;
  for (const auto& r : records) sum += static_cast<double>(r.final_size) / static_cast<double>(r.n);
  return sum / static_cast<double>(records.size());
}

/// Continuous vs discrete final sets on random instances.
json criterion1(const Scale& sc, std::uint64_t seed, int workers, Check& check) {
  const dist::Distribution laws[2] = {example_dist(), kcore_dist()};
  std::vector<int> mismatches(static_cast<std::size_t>(sc.c1_instances), 0);
#pragma omp parallel for schedule(dynamic) num_threads(workers)
  for (int i = 0; i < sc.c1_instances; ++i) {
    const std::uint64_t inst = mix_seed(seed, static_cast<std::uint64_t>(i));
    Rng rng(inst);
    const auto n = static_cast<std::int64_t>(10 + rng.below(191));
    const auto& law = laws[i % 2];
    for (std::uint64_t j = 0; j < 3; ++j) {
      const std::uint64_t s = mix_seed(inst, j + 1);
      const auto seq = dist::realize_sampled(law, n, mix_seed(s, 0));
      const auto mg = cgm::build_multigraph(seq, mix_seed(s, 1));
      cascade::ContinuousOptions options;
      options.snapshot_points = 0;
      const auto cont = cascade::run_continuous(mg, seq.thresholds, mix_seed(s, 2), options);
      const auto disc = cascade::run_discrete(mg, seq.thresholds);
      if (cont.cascade.final_active != disc.final_active) ++mismatches[static_cast<std::size_t>(i)];
    }
  }
  int total = 0;
  for (int m : mismatches) total += m;
  check.pass = total == 0;
  check.detail = std::to_string(sc.c1_instances) + " instances x 3 seeds, " +
                 std::to_string(total) + " mismatches";
  return {{"instances", sc.c1_instances}, {"runs", 3 * sc.c1_instances}, {"mismatches", total}};
}

json criterion2(const Scale& sc, std::uint64_t seed, int workers, Check& check) {
  std::vector<double> sups(static_cast<std::size_t>(sc.c2_reps));
#pragma omp parallel for schedule(dynamic) num_threads(workers)
  for (int r = 0; r < sc.c2_reps; ++r) {
    sups[static_cast<std::size_t>(r)] =
        cascade::death_process_reference(sc.c2_balls, mix_seed(seed, static_cast<std::uint64_t>(r)));
  }
  const auto good = std::count_if(sups.begin(), sups.end(), [](double s) { return s < 0.02; });
  check.pass = good >= sc.c2_required;
  check.detail = std::to_string(good) + "/" + std::to_string(sc.c2_reps) +
                 " repetitions with sup deviation < 0.02, max " +
                 fmt(*std::max_element(sups.begin(), sups.end()));
  return {{"balls", sc.c2_balls},
          {"repetitions", sc.c2_reps},
          {"below_0_02", good},
          {"required", sc.c2_required},
          {"max_sup", *std::max_element(sups.begin(), sups.end())}};
}

}  // namespace

Scale quick_scale() {
  Scale s;
  s.c1_instances = 100;
  s.c2_balls = 10000;
  s.c2_reps = 20;
  s.c2_required = 20;
  s.c3_n = 10000;
  s.c3_trials = 40;
  s.c4_trials = 100;
  s.c5_n = 10000;
  s.c5_trials = 200;
  s.c6_n = 10000;
  return s;
}

std::vector<std::string> output_files() {
  return {"summary.json", "c3_trials.csv", "c4_trials.csv", "c5_trials.csv", "c6_hb.csv"};
}

Report run(const Options& opt) {
  const Scale sc = opt.quick ? quick_scale() : Scale{};
  const auto say = [&](const std::string& msg) {
    if (opt.progress) opt.progress(msg);
  };
  const auto ex = example_dist();
  const auto th = theory::solve(ex, opt.quadrature);
  const double sigma2 = opt.sigma2_override.value_or(th.sigma2_star);
  const double eval_time = mc::default_eval_time(th);

  Report rep;
  rep.criteria.resize(8);
  const char* names[8] = {"oracle equivalence",     "death process law",
                          "stopping time",          "law of large numbers",
                          "CLT",                    "H_B trajectory limit",
                          "analytic sanity suite",  "determinism"};
  for (int i = 0; i < 8; ++i) {
    rep.criteria[static_cast<std::size_t>(i)].id = std::to_string(i + 1);
    rep.criteria[static_cast<std::size_t>(i)].name = names[i];
  }
  json crit = json::array();
  json info = json::array();
  const auto add_info = [&](const std::string& id, const std::string& name, bool pass,
                            const std::string& detail, json data) {
    rep.info.push_back({id, name, pass, detail});
    data["id"] = id;
    data["name"] = name;
    data["pass"] = pass;
    info.push_back(std::move(data));
  };
  const auto record = [&](int k, json data) {
    auto& c = rep.criteria[static_cast<std::size_t>(k - 1)];
    data["id"] = k;
    data["name"] = c.name;
    data["pass"] = c.pass;
    crit.push_back(std::move(data));
    say("criterion " + c.id + " (" + c.name + "): " + (c.pass ? "pass" : "FAIL") + ", " +
        c.detail);
  };

  say("criterion 1: running");
  record(1, criterion1(sc, mix_seed(opt.seed, 1), opt.workers, rep.criteria[0]));

  say("criterion 2: running");
  record(2, criterion2(sc, mix_seed(opt.seed, 2), opt.workers, rep.criteria[1]));

  say("criterion 3: running");
  {
    const auto recs =
        mc::run_trials({ex, sc.c3_n, sc.c3_trials, mix_seed(opt.seed, 3), eval_time}, opt.workers);
    write_text(opt.output_dir / "c3_trials.csv", results_csv(recs));
    const auto target = mc::tau_concentration(recs, kTargetTstar, 0.03);
    const bool z_ok = std::abs(th.z_hat - kTargetZhat) < 1e-9;
    auto& c = rep.criteria[2];
    c.pass = z_ok && target.pass;
    c.detail = "z_hat " + fmt(th.z_hat) + " vs " + fmt(kTargetZhat) + (z_ok ? " ok" : " off") +
               "; mean tau " + fmt(target.mean_tau) + " vs " + fmt(kTargetTstar) +
               (target.pass ? " ok" : " off");
    record(3, {{"z_hat", th.z_hat},
               {"z_hat_target", kTargetZhat},
               {"z_hat_pass", z_ok},
               {"mean_tau", target.mean_tau},
               {"sd_tau", target.sd_tau},
               {"t_star_target", kTargetTstar},
               {"tau_pass", target.pass},
               {"n", sc.c3_n},
               {"trials", sc.c3_trials}});
    const auto model = mc::tau_concentration(recs, th.t_star, 0.03);
    add_info("3m", "mean tau vs computed t*", model.pass,
             "mean tau " + fmt(model.mean_tau) + " vs t* " + fmt(th.t_star),
             {{"mean_tau", model.mean_tau}, {"t_star", th.t_star}, {"tolerance", 0.03}});
  }

  say("criterion 4: running");
  std::vector<mc::TrialRecord> c4;
  const mc::BatchSpec c4_spec{ex, sc.c4_n, sc.c4_trials, mix_seed(opt.seed, 4), eval_time};
  {
    c4 = mc::run_trials(c4_spec, opt.workers);
    write_text(opt.output_dir / "c4_trials.csv", results_csv(c4));
    const double mf = mean_fraction(c4);
    auto& c = rep.criteria[3];
    c.pass = std::abs(mf - kTargetAhat) < 0.005;
    c.detail = "mean final fraction " + fmt(mf) + " vs " + fmt(kTargetAhat);
    record(4, {{"mean_fraction", mf},
               {"target", kTargetAhat},
               {"tolerance", 0.005},
               {"n", sc.c4_n},
               {"trials", sc.c4_trials}});
    const bool model_ok = std::abs(mf - th.a_hat_star) < 0.005;
    add_info("4m", "mean final fraction vs computed a_hat(t*)", model_ok,
             "mean " + fmt(mf) + " vs a_hat " + fmt(th.a_hat_star),
             {{"mean_fraction", mf}, {"a_hat_star", th.a_hat_star}, {"tolerance", 0.005}});
  }

  say("criterion 5: running");
  {
    const auto recs = mc::run_trials({ex, sc.c5_n, sc.c5_trials, mix_seed(opt.seed, 5), eval_time},
                                     opt.workers);
    write_text(opt.output_dir / "c5_trials.csv", results_csv(recs));
    const auto xs = mc::xi_samples(recs);
    auto& c = rep.criteria[4];
    json data{{"n", sc.c5_n},
              {"trials", sc.c5_trials},
              {"eval_time", eval_time},
              {"sigma2", sigma2},
              {"sigma2_source", opt.sigma2_override ? "override" : "theory"}};
    if (sigma2 > 0.0) {
      const auto s = stats::summarize(xs, stats::NormalRef{0.0, std::sqrt(sigma2)});
      const double ratio = s.variance.value_or(0.0) / sigma2;
      const bool skew_ok = s.skewness && std::abs(*s.skewness) < 0.25;
      const bool kurt_ok = s.excess_kurtosis && std::abs(*s.excess_kurtosis) < 0.6;
      const bool ratio_ok = ratio >= 0.80 && ratio <= 1.25;
      const bool ks_ok = s.ks_pvalue && *s.ks_pvalue > 0.01;
      c.pass = skew_ok && kurt_ok && ratio_ok && ks_ok;
      c.detail = "skew " + fmt(s.skewness.value_or(NAN)) + ", kurt " +
                 fmt(s.excess_kurtosis.value_or(NAN)) + ", var/sigma2 " + fmt(ratio) +
                 " (sigma2 " + fmt(sigma2) + "), KS p " + fmt(s.ks_pvalue.value_or(NAN));
      data["stats"] = stats_json(s);
      data["variance_ratio"] = ratio;
      data["skewness_pass"] = skew_ok;
      data["kurtosis_pass"] = kurt_ok;
      data["variance_ratio_pass"] = ratio_ok;
      data["ks_pass"] = ks_ok;
    } else {
      c.pass = false;
      c.detail = "sigma2 " + fmt(sigma2) + " is not positive";
    }
    record(5, std::move(data));

    const double s2b = th.sigma2_binomial_star;
    const auto sb = stats::summarize(xs, stats::NormalRef{0.0, std::sqrt(s2b)});
    const double rb = sb.variance.value_or(0.0) / s2b;
    const bool ok = rb >= 0.80 && rb <= 1.25 && sb.ks_pvalue && *sb.ks_pvalue > 0.01;
    add_info("5m", "xi against exact binomial variance", ok,
             "var/sigma2_binomial " + fmt(rb) + " (sigma2_binomial " + fmt(s2b) + "), KS p " +
                 fmt(sb.ks_pvalue.value_or(NAN)),
             {{"sigma2_binomial", s2b}, {"variance_ratio", rb}, {"stats", stats_json(sb)}});
  }

  say("criterion 6: running");
  {
    const auto hb = mc::hb_empirical_check(ex, sc.c6_n, mix_seed(opt.seed, 6), sc.c6_points);
    io::write_atomic(opt.output_dir / "c6_hb.csv", [&](std::ostream& os) {
      os.precision(17);
      os << "t,H_B_over_n,h_B\n";
      for (std::size_t j = 0; j < hb.grid.size(); ++j) {
        os << hb.grid[j] << ',' << hb.empirical[j] << ',' << hb.theory[j] << '\n';
      }
    });
    auto& c = rep.criteria[5];
    c.pass = hb.max_deviation < 0.02;
    c.detail = "sup deviation " + fmt(hb.max_deviation) + " over " +
               std::to_string(hb.grid.size()) + " points, tau " + fmt(hb.tau);
    record(6, {{"n", sc.c6_n},
               {"points", hb.grid.size()},
               {"tau", hb.tau},
               {"max_deviation", hb.max_deviation}});
  }

  say("criterion 7: running");
  {
    std::vector<std::string> failed;
    const auto& q = opt.quadrature;
    if (theory::sigma2_a(ex, 0.0, q).value != 0.0) failed.push_back("sigma2(0)");

    bool delta_zero = true;
    for (const auto& a : ex.atoms) {
      for (int l = a.degree + 1; l <= a.degree + 3; ++l) {
        for (double t : {0.0, 0.5, 1.0, 2.0}) {
          delta_zero = delta_zero && theory::delta(ex, a.degree, a.threshold, l, t, q).value == 0.0;
        }
      }
    }
    if (!delta_zero) failed.push_back("Delta(l>d)");

    const dist::Distribution one{{{1, 1, 1.0}}};
    double delta_err = 0.0;
    for (int j = 0; j <= 200; ++j) {
      const double t = 2.0 * j / 200.0;
      const double v = theory::delta(one, 1, 1, 1, t, q).value;
      delta_err = std::max(delta_err, std::abs(v - std::expm1(t)));
    }
    if (!(delta_err <= 1e-8)) failed.push_back("Delta(1,1,1,t)");

    for (const auto& law : {ex, kcore_dist()}) {
      if (theory::a_hat(law, 0.0) != law.seed_fraction()) failed.push_back("a_hat(0)");
    }

    if (theory::h_b(ex, 0.0) != 0.0) failed.push_back("h_B(0)");
    double prev = theory::h_b(ex, 0.0);
    for (int j = 1; j <= 1000; ++j) {
      const double cur = theory::h_b(ex, j / 1000.0);
      if (cur < prev) {
        failed.push_back("h_B monotone");
        break;
      }
      prev = cur;
    }

    const auto ns = theory::solve(no_seed_dist(), q);
    const auto ns_trial = mc::run_trial(no_seed_dist(), 1000, 0, mix_seed(opt.seed, 7), 0.0);
    if (ns.z_hat != 1.0 || ns.t_star != 0.0 || ns_trial.final_size != 0) {
      failed.push_back("no-seed (z_hat, t*, final size)");
    }

    auto& c = rep.criteria[6];
    c.pass = failed.empty();
    std::string list;
    for (const auto& f : failed) list += (list.empty() ? "" : ", ") + f;
    c.detail = failed.empty() ? "all items hold, max |Delta(1,1,1,t) - (e^t - 1)| " + fmt(delta_err)
                              : "failed: " + list;
    record(7, {{"failed", failed}, {"delta_closed_form_max_error", delta_err}});
  }

  say("criterion 8: running");
  {
    const auto serial = mc::run_trials_serial(c4_spec);
    const bool same = serial == c4 && results_csv(serial) == results_csv(c4);
    auto& c = rep.criteria[7];
    c.pass = same;
    c.detail = same ? "serial reference reproduces the parallel batch byte for byte"
                    : "serial and parallel batches differ";
    record(8, {{"serial_matches_parallel", same}});
  }

  rep.all_pass = std::all_of(rep.criteria.begin(), rep.criteria.end(),
                             [](const Check& c) { return c.pass; });
  rep.summary = {{"quick", opt.quick},
                 {"seed", opt.seed},
                 {"theory",
                  {{"lambda", th.lambda},
                   {"z_hat", th.z_hat},
                   {"t_star", th.t_star},
                   {"a_hat_star", th.a_hat_star},
                   {"sigma2_star", th.sigma2_star},
                   {"sigma2_binomial_star", th.sigma2_binomial_star}}},
                 {"criteria", crit},
                 {"info", info},
                 {"all_pass", rep.all_pass}};
  io::write_json(opt.output_dir / "summary.json", rep.summary);
  return rep;
}

}  // namespace cclt::verify
