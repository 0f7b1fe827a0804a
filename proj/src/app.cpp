#include "cclt/app.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "CLI11.hpp"
#include "cclt/cascade.hpp"
#include "cclt/cgm.hpp"
#include "cclt/config.hpp"
#include "cclt/errors.hpp"
#include "cclt/io.hpp"
#include "cclt/mc.hpp"
#include "cclt/rng.hpp"
#include "cclt/theory.hpp"
#include "cclt/verify.hpp"

namespace cclt {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Flags {
  std::optional<std::string> config_file;
  config::Overrides over;
  bool quick = false;
  std::optional<double> inject_sigma2;
};

void add_common(CLI::App* sub, Flags& f, bool with_dist = true) {
  sub->add_option("--config", f.config_file, "JSON config file; flags override its values")
      ->check(CLI::ExistingFile);
  if (with_dist) {
    sub->add_option("--dist", f.over.dist_inline, "Inline distribution d:theta:p,d:theta:p,...");
    sub->add_option("--dist-file", f.over.dist_file,
                    "Distribution JSON file: array of {\"d\",\"theta\",\"p\"}");
  }
  sub->add_option("--output-dir", f.over.output_dir, "Directory for output files")
      ->default_str("out");
}

void add_quadrature(CLI::App* sub, Flags& f) {
  sub->add_option("--abs-tol", f.over.abs_tol, "Quadrature absolute tolerance")
      ->default_str("1e-09");
  sub->add_option("--max-depth", f.over.max_depth, "Quadrature recursion limit")
      ->default_str("40");
  sub->add_option("--root-tol", f.over.root_tol, "Bisection tolerance for z_hat")
      ->default_str("1e-12");
  sub->add_option("--scan-step", f.over.scan_step, "Grid step of the z_hat scan")
      ->default_str("0.0001");
  sub->add_option("--t-max", f.over.t_max, "Evaluation horizon when t* is infinite")
      ->default_str("20");
}

void add_seed(CLI::App* sub, Flags& f) {
  sub->add_option("--seed", f.over.seed, "Root seed")->default_str("0");
}

void add_workers(CLI::App* sub, Flags& f) {
  sub->add_option("--workers", f.over.workers,
                  std::string("Worker threads (fallback: ") + config::kWorkersEnv +
                      ", then available parallelism)");
}

json theory_json(const theory::TheoryResult& r, const config::RunConfig& cfg) {
  const bool finite = std::isfinite(r.t_star);
  return {{"distribution", dist::to_json(cfg.distribution)},
          {"lambda", r.lambda},
          {"z_hat", r.z_hat},
          {"t_star", finite ? json(r.t_star) : json(nullptr)},
          {"t_star_infinite", !finite},
          {"t_eval", r.t_eval},
          {"a_hat_star", r.a_hat_star},
          {"sigma2_star", r.sigma2_star},
          {"sigma2_error", r.sigma2_error},
          {"sigma2_binomial_star", r.sigma2_binomial_star},
          {"a_hat_printed_star", r.a_hat_printed_star},
          {"root",
           {{"z_hat", r.root.z_hat},
            {"tangency", r.root.tangency},
            {"bracket_lo", r.root.bracket_lo},
            {"bracket_hi", r.root.bracket_hi}}},
          {"clt_supported", r.clt_supported},
          {"warnings", r.warnings},
          {"quadrature",
           {{"abs_tol", cfg.quadrature.abs_tol},
            {"max_depth", cfg.quadrature.max_depth},
            {"root_tol", cfg.quadrature.root_tol},
            {"scan_step", cfg.quadrature.scan_step},
            {"t_max", cfg.quadrature.t_max}}}};
}

int cmd_theory(const config::RunConfig& cfg, std::ostream& out) {
  const auto r = theory::solve(cfg.distribution, cfg.quadrature);
  const double t_end = cfg.curve_t_end.value_or(r.t_eval + 1.0);
  std::vector<double> times;
  for (int j = 0; j < cfg.curve_points; ++j) {
    times.push_back(t_end * j / (cfg.curve_points - 1));
  }
  times.back() = t_end;
  const auto points = theory::curve(cfg.distribution, times, cfg.quadrature);

  io::write_json(cfg.output_dir / "theory.json", theory_json(r, cfg));
  io::write_atomic(cfg.output_dir / "theory_curve.csv", [&](std::ostream& os) {
    os.precision(17);
    os << "t,a_hat,sigma2\n";
    for (const auto& p : points) os << p.t << ',' << p.a_hat << ',' << p.sigma2 << '\n';
  });
  out << "z_hat = " << r.z_hat << ", t* = " << r.t_star << ", a_hat(t*) = " << r.a_hat_star
      << ", sigma2(t*) = " << r.sigma2_star << '\n';
  for (const auto& w : r.warnings) out << "warning: " << w << '\n';
  out << "wrote " << (cfg.output_dir / "theory.json").string() << " and "
      << (cfg.output_dir / "theory_curve.csv").string() << '\n';
  return kOk;
}

struct Realization {
  dist::NodeSequence seq;
  cgm::Multigraph mg;
  std::uint64_t trial_seed = 0;
};

/// Same seed path as mc::run_trial, so simulate/graph replay trial `cfg.trial`.
Realization realize(const config::RunConfig& cfg) {
  Realization r;
  r.trial_seed = mix_seed(cfg.seed, static_cast<std::uint64_t>(cfg.trial));
  r.seq = dist::realize_sampled(cfg.distribution, cfg.n, mix_seed(r.trial_seed, 0));
  r.mg = cgm::build_multigraph(r.seq, mix_seed(r.trial_seed, 1));
  return r;
}

int cmd_simulate(const config::RunConfig& cfg, std::ostream& out) {
  const auto r = realize(cfg);
  cascade::ContinuousOptions options;
  options.snapshot_points = cfg.snapshots;
  const auto run =
      cascade::run_continuous(r.mg, r.seq.thresholds, mix_seed(r.trial_seed, 2), options);
  const auto& traj = run.trajectory;

  io::write_atomic(cfg.output_dir / "trajectory.csv",
                   [&](std::ostream& os) { cascade::write_trajectory_csv(os, traj); });
  if (cfg.snapshots > 0) {
    io::write_atomic(cfg.output_dir / "snapshots.csv",
                     [&](std::ostream& os) { cascade::write_snapshots_csv(os, traj); });
  }
  json meta{{"n", cfg.n},
            {"seed", cfg.seed},
            {"trial", cfg.trial},
            {"trial_seed", r.trial_seed},
            {"tau", traj.tau},
            {"final_size", run.cascade.final_size},
            {"events", traj.times.size()},
            {"parity_fixed_node", r.seq.parity_fixed_node
                                      ? json(*r.seq.parity_fixed_node)
                                      : json(nullptr)}};
  io::write_json(cfg.output_dir / "simulate.json", meta);
  out << "tau = " << traj.tau << ", final size = " << run.cascade.final_size << " of " << cfg.n
      << '\n';
  out << "wrote " << (cfg.output_dir / "trajectory.csv").string() << '\n';
  return kOk;
}

int cmd_graph(const config::RunConfig& cfg, std::ostream& out) {
  auto r = realize(cfg);
  int attempts = 1;
  if (cfg.graph_mode != config::GraphMode::kMultigraph) {
    const auto mode = cfg.graph_mode == config::GraphMode::kReject ? cgm::SimpleMode::kReject
                                                                   : cgm::SimpleMode::kErase;
    auto simple = cgm::to_simple(r.mg, mode, cfg.max_retries, mix_seed(r.trial_seed, 1));
    r.mg = std::move(simple.graph);
    attempts = simple.attempts;
  }
  io::write_atomic(cfg.output_dir / "edges.csv",
                   [&](std::ostream& os) { cgm::write_edge_csv(os, r.mg); });
  out << r.mg.num_nodes() << " nodes, " << r.mg.num_edges() << " edges, " << attempts
      << " attempt(s)\n";
  out << "wrote " << (cfg.output_dir / "edges.csv").string() << '\n';
  return kOk;
}

int cmd_sweep(const config::RunConfig& cfg, std::ostream& out) {
  const auto th = theory::solve(cfg.distribution, cfg.quadrature);
  const double t = cfg.eval_time.value_or(mc::default_eval_time(th));
  const auto rows =
      mc::convergence_sweep(cfg.distribution, cfg.n_list, cfg.trials, cfg.seed, t, cfg.workers);
  io::write_atomic(cfg.output_dir / "sweep.csv",
                   [&](std::ostream& os) { mc::write_sweep_csv(os, rows); });
  for (const auto& row : rows) {
    out << "n = " << row.n << ": mean fraction " << row.mean_fraction << ", mean tau "
        << row.mean_tau << '\n';
  }
  out << "wrote " << (cfg.output_dir / "sweep.csv").string() << '\n';
  return kOk;
}

int cmd_verify(const config::RunConfig& cfg, const Flags& f, std::ostream& out) {
  verify::Options opt;
  opt.quick = f.quick;
  opt.workers = cfg.workers;
  opt.seed = cfg.seed;
  opt.sigma2_override = f.inject_sigma2;
  opt.quadrature = cfg.quadrature;
  opt.output_dir = cfg.output_dir;
  opt.progress = [&out](const std::string& msg) { out << msg << std::endl; };
  const auto rep = verify::run(opt);
  for (const auto& c : rep.criteria) {
    out << "criterion " << c.id << " (" << c.name << "): " << (c.pass ? "pass" : "FAIL") << ", "
        << c.detail << '\n';
  }
  for (const auto& c : rep.info) {
    out << "info " << c.id << " (" << c.name << "): " << (c.pass ? "pass" : "FAIL") << ", "
        << c.detail << '\n';
  }
  out << (rep.all_pass ? "all criteria pass" : "verification failed") << '\n';
  return rep.all_pass ? kOk : kVerifyFailed;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Threshold cascades on configuration-model graphs: simulation, limits, CLT checks",
               "cascade_clt"};
  app.require_subcommand(1);
  Flags f;

  auto* theory_cmd = app.add_subcommand("theory", "Solve for z_hat, t*, a_hat and sigma2; write "
                                                  "theory.json and theory_curve.csv");
  add_common(theory_cmd, f);
  add_quadrature(theory_cmd, f);
  theory_cmd->add_option("--curve-points", f.over.curve_points, "Points on the curve grid")
      ->default_str("101");
  theory_cmd->add_option("--curve-t-end", f.over.curve_t_end, "Curve grid end (default t_eval + 1)");

  auto* simulate_cmd = app.add_subcommand(
      "simulate", "One continuous-time run; write trajectory.csv, snapshots.csv, simulate.json");
  add_common(simulate_cmd, f);
  simulate_cmd->add_option("--n", f.over.n, "Number of nodes")->default_str("10000");
  add_seed(simulate_cmd, f);
  simulate_cmd->add_option("--trial", f.over.trial, "Trial index whose seeds are replayed")
      ->default_str("0");
  simulate_cmd->add_option("--snapshots", f.over.snapshots,
                           "Occupancy snapshot grid size on [0, tau] (0 disables)")
      ->default_str("64");

  auto* verify_cmd = app.add_subcommand(
      "verify", "Run acceptance criteria 1-8; write summary.json and per-criterion CSVs");
  add_common(verify_cmd, f, false);
  add_seed(verify_cmd, f);
  add_workers(verify_cmd, f);
  add_quadrature(verify_cmd, f);
  verify_cmd->add_flag("--quick", f.quick, "Reduced sizes for smoke runs (same thresholds)");
  verify_cmd->add_option("--inject-sigma2", f.inject_sigma2)->group("");

  auto* sweep_cmd = app.add_subcommand("sweep", "Convergence table over n; write sweep.csv");
  add_common(sweep_cmd, f);
  sweep_cmd->add_option("--n-list", f.over.n_list, "Comma-separated increasing n values")
      ->default_str("1000,10000,100000");
  sweep_cmd->add_option("--trials", f.over.trials, "Trials per n")->default_str("500");
  add_seed(sweep_cmd, f);
  sweep_cmd->add_option("--eval-time", f.over.eval_time, "Evaluation time t (default t* + 1)");
  add_workers(sweep_cmd, f);
  add_quadrature(sweep_cmd, f);

  auto* graph_cmd = app.add_subcommand("graph", "Build one configuration-model graph; write edges.csv");
  add_common(graph_cmd, f);
  graph_cmd->add_option("--n", f.over.n, "Number of nodes")->default_str("10000");
  add_seed(graph_cmd, f);
  graph_cmd->add_option("--trial", f.over.trial, "Trial index whose seeds are replayed")
      ->default_str("0");
  graph_cmd->add_option("--graph-mode", f.over.graph_mode, "multigraph, reject or erase")
      ->default_str("multigraph");
  graph_cmd->add_option("--max-retries", f.over.max_retries, "Pairing attempts in reject mode")
      ->default_str("100");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kConfigError;
  }

  try {
    const bool is_verify = verify_cmd->parsed();
    std::optional<fs::path> file;
    if (f.config_file) file = *f.config_file;
    const auto cfg =
        config::parse_config(file, f.over, std::getenv(config::kWorkersEnv), !is_verify);
    if (is_verify) {
      if (f.inject_sigma2 && !(*f.inject_sigma2 > 0.0)) {
        throw ConfigError({"--inject-sigma2 must be > 0"});
      }
      return cmd_verify(cfg, f, out);
    }
    if (theory_cmd->parsed()) return cmd_theory(cfg, out);
    if (simulate_cmd->parsed()) return cmd_simulate(cfg, out);
    if (sweep_cmd->parsed()) return cmd_sweep(cfg, out);
    return cmd_graph(cfg, out);
  } catch (const ConfigError& e) {
    for (const auto& p : e.problems()) err << "config error: " << p << '\n';
    return kConfigError;
  } catch (const dist::InvalidDistribution& e) {
    for (const auto& v : e.violations()) err << "config error: " << v.message << '\n';
    return kConfigError;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kNumericalError;
  }
}

}  // namespace cclt
