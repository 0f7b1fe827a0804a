#include "cclt/cascade.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <tuple>

#include "cclt/rng.hpp"

namespace cclt::cascade {

using cgm::HalfEdgeId;
using cgm::Multigraph;
using cgm::NodeId;

namespace {

void check_lengths(const Multigraph& mg, std::span<const int> thresholds) {
  if (thresholds.size() != mg.num_nodes()) {
    throw std::invalid_argument("thresholds length does not match node count");
  }
}

enum BallStatus : std::uint8_t { kWhite = 0, kDead = 1, kRed = 2 };

/// One exploration run. Snapshot times must be sorted.
class Exploration {
 public:
  Exploration(const Multigraph& mg, std::span<const int> thresholds, std::uint64_t seed,
              bool record_events, std::span<const double> snapshot_times)
      : mg_(mg),
        thresholds_(thresholds),
        rng_(seed),
        record_events_(record_events),
        snapshot_times_(snapshot_times),
        active_(mg.num_nodes(), 0),
        white_(mg.num_nodes(), 0),
        status_(mg.num_half_edges(), kWhite),
        pool_pos_(mg.num_half_edges(), kNotPooled) {}

  ContinuousRun run() {
    ContinuousRun out;
    Trajectory& traj = out.trajectory;

    for (NodeId i = 0; i < mg_.num_nodes(); ++i) {
      white_[i] = mg_.degree(i);
      if (thresholds_[i] == 0) {
        active_[i] = 1;
        ++state_.a_n;
        pool_bin(i);
      } else {
        ++state_.b_n;
        state_.h_b += white_[i];
      }
    }
    state_.h_a = static_cast<std::int64_t>(pool_.size());
    traj.initial = state_;

    double t = 0.0;
    if (pool_.empty()) {
      state_.h_a = -1;
      finish(traj, out.cascade, t);
      return out;
    }

    HalfEdgeId pending = take_random_pooled();
    record(traj, t, EventKind::kRedRecolor, pending);

    for (;;) {
      const std::int64_t white_count = state_.h_a + state_.h_b;
      t += rng_.exponential(static_cast<double>(white_count));
      take_snapshots_before(traj, t);

      const HalfEdgeId victim = mg_.mate[pending];
      kill(victim);
      record(traj, t, EventKind::kWhiteDeath, victim);

      if (pool_.empty()) {
        state_.h_a = -1;
        record(traj, t, EventKind::kStop, victim);
        break;
      }
      pending = take_random_pooled();
      record(traj, t, EventKind::kRedRecolor, pending);
    }
    finish(traj, out.cascade, t);
    return out;
  }

 private:
  static constexpr std::uint32_t kNotPooled = std::numeric_limits<std::uint32_t>::max();

  void pool_bin(NodeId i) {
    for (auto h = mg_.offsets[i]; h < mg_.offsets[i + 1]; ++h) {
      if (status_[h] == kWhite) {
        pool_pos_[h] = static_cast<std::uint32_t>(pool_.size());
        pool_.push_back(static_cast<HalfEdgeId>(h));
      }
    }
  }

  void unpool(HalfEdgeId h) {
    const std::uint32_t at = pool_pos_[h];
    const HalfEdgeId last = pool_.back();
    pool_[at] = last;
    pool_pos_[last] = at;
    pool_.pop_back();
    pool_pos_[h] = kNotPooled;
  }

  HalfEdgeId take_random_pooled() {
    const HalfEdgeId h = pool_[rng_.below(pool_.size())];
    unpool(h);
    status_[h] = kRed;
    --white_[mg_.owner[h]];
    --state_.h_a;
    return h;
  }

  void kill(HalfEdgeId h) {
    const NodeId bin = mg_.owner[h];
    status_[h] = kDead;
    --white_[bin];
    if (active_[bin]) {
      unpool(h);
      --state_.h_a;
      return;
    }
    --state_.h_b;
    // theta balls dead <=> at most d - theta white balls left.
    if (white_[bin] <= mg_.degree(bin) - thresholds_[bin]) {
      active_[bin] = 1;
      ++state_.a_n;
      --state_.b_n;
      state_.h_b -= white_[bin];
      state_.h_a += white_[bin];
      pool_bin(bin);
    }
  }

  void record(Trajectory& traj, double t, EventKind kind, HalfEdgeId ball) {
    traj.times.push_back(t);
    traj.kinds.push_back(kind);
    traj.states.push_back(state_);
    if (record_events_) traj.events.push_back({t, kind, ball, mg_.owner[ball]});
  }

  void take_snapshots_before(Trajectory& traj, double t) {
    while (next_snapshot_ < snapshot_times_.size() && snapshot_times_[next_snapshot_] < t) {
      traj.snapshots.push_back(occupancy(snapshot_times_[next_snapshot_++]));
    }
  }

  OccupancySnapshot occupancy(double t) const {
    std::map<std::tuple<int, int, int>, std::int64_t> table;
    for (NodeId i = 0; i < mg_.num_nodes(); ++i) {
      if (!active_[i]) ++table[{mg_.degree(i), thresholds_[i], white_[i]}];
    }
    OccupancySnapshot snap{t, {}};
    snap.entries.reserve(table.size());
    for (const auto& [key, bins] : table) {
      snap.entries.push_back({std::get<0>(key), std::get<1>(key), std::get<2>(key), bins});
    }
    return snap;
  }

  void finish(Trajectory& traj, CascadeResult& result, double t) {
    traj.tau = t;
    traj.terminal = state_;
    take_snapshots_before(traj, std::numeric_limits<double>::infinity());
    result.final_active = active_;
    result.final_size = state_.a_n;
  }

  const Multigraph& mg_;
  std::span<const int> thresholds_;
  Rng rng_;
  bool record_events_;
  std::span<const double> snapshot_times_;
  std::size_t next_snapshot_ = 0;

  std::vector<std::uint8_t> active_;
  std::vector<int> white_;
  std::vector<std::uint8_t> status_;
  std::vector<HalfEdgeId> pool_;
  std::vector<std::uint32_t> pool_pos_;
  State state_;
};

}  // namespace

CascadeResult run_discrete(const Multigraph& mg, std::span<const int> thresholds) {
  check_lengths(mg, thresholds);
  const std::size_t n = mg.num_nodes();
  CascadeResult out;
  out.final_active.assign(n, 0);
  std::vector<int> exposure(n, 0);
  std::vector<std::size_t> stamp(n, std::numeric_limits<std::size_t>::max());

  std::vector<NodeId> frontier;
  for (NodeId i = 0; i < n; ++i) {
    if (thresholds[i] == 0) {
      out.final_active[i] = 1;
      frontier.push_back(i);
    }
  }
  out.rounds.push_back(static_cast<std::int64_t>(frontier.size()));

  std::vector<NodeId> touched;
  std::vector<NodeId> next;
  for (std::size_t round = 1;; ++round) {
    touched.clear();
    for (NodeId u : frontier) {
      for (auto h = mg.offsets[u]; h < mg.offsets[u + 1]; ++h) {
        const NodeId v = mg.owner[mg.mate[h]];
        if (out.final_active[v]) continue;
        ++exposure[v];
        if (stamp[v] != round) {
          stamp[v] = round;
          touched.push_back(v);
        }
      }
    }
    next.clear();
    for (NodeId v : touched) {
      if (exposure[v] >= thresholds[v]) next.push_back(v);
    }
    for (NodeId v : next) out.final_active[v] = 1;
    out.rounds.push_back(out.rounds.back() + static_cast<std::int64_t>(next.size()));
    if (next.empty()) break;
    frontier.swap(next);
  }
  out.final_size = out.rounds.back();
  return out;
}

const char* to_string(EventKind kind) {
  switch (kind) {
    case EventKind::kWhiteDeath:
      return "white-death";
    case EventKind::kRedRecolor:
      return "red-recolor";
    case EventKind::kStop:
      return "stop";
  }
  return "?";
}

ContinuousRun run_continuous(const Multigraph& mg, std::span<const int> thresholds,
                             std::uint64_t seed, const ContinuousOptions& options) {
  check_lengths(mg, thresholds);

  std::vector<double> explicit_times = options.snapshot_times;
  std::sort(explicit_times.begin(), explicit_times.end());
  ContinuousRun run =
      Exploration(mg, thresholds, seed, options.record_events, explicit_times).run();

  if (options.snapshot_points > 0) {
    const double tau = run.trajectory.tau;
    std::vector<double> grid;
    if (tau == 0.0) {
      grid.push_back(0.0);
    } else {
      const int points = std::max(options.snapshot_points, 2);
      for (int j = 0; j < points; ++j) grid.push_back(tau * j / (points - 1));
      grid.back() = tau;
    }
    // Same seed, same draws: the replay reproduces the run exactly.
    ContinuousRun replay = Exploration(mg, thresholds, seed, false, grid).run();
    auto& snaps = run.trajectory.snapshots;
    snaps.insert(snaps.end(), replay.trajectory.snapshots.begin(),
                 replay.trajectory.snapshots.end());
    std::stable_sort(snaps.begin(), snaps.end(),
                     [](const auto& a, const auto& b) { return a.time < b.time; });
  }
  return run;
}

State evaluate_at(const Trajectory& traj, double t) {
  if (t < 0.0) throw std::invalid_argument("evaluate_at: t must be >= 0");
  if (t >= traj.tau) return traj.terminal;
  const auto it = std::upper_bound(traj.times.begin(), traj.times.end(), t);
  if (it == traj.times.begin()) return traj.initial;
  return traj.states[static_cast<std::size_t>(it - traj.times.begin()) - 1];
}

double death_process_reference(std::int64_t n_balls, std::uint64_t seed) {
  if (n_balls < 1) throw std::invalid_argument("death_process_reference: n_balls must be >= 1");
  Rng rng(seed);
  const double n = static_cast<double>(n_balls);
  double t = 0.0;
  double sup = 0.0;
  for (std::int64_t alive = n_balls; alive > 0; --alive) {
    t += rng.exponential(static_cast<double>(alive));
    const double curve = std::exp(-t);
    sup = std::max({sup, std::abs(static_cast<double>(alive) / n - curve),
                    std::abs(static_cast<double>(alive - 1) / n - curve)});
  }
  return sup;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  const auto old_precision = os.precision(17);
  os << "time,event_kind,H_A,H_B,A_n,B_n\n";
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    const State& s = traj.states[k];
    os << traj.times[k] << ',' << to_string(traj.kinds[k]) << ',' << s.h_a << ',' << s.h_b
       << ',' << s.a_n << ',' << s.b_n << '\n';
  }
  const State& s = traj.terminal;
  os << traj.tau << ",terminal," << s.h_a << ',' << s.h_b << ',' << s.a_n << ',' << s.b_n
     << '\n';
  os.precision(old_precision);
}

void write_snapshots_csv(std::ostream& os, const Trajectory& traj) {
  const auto old_precision = os.precision(17);
  os << "time,d,theta,l,bins\n";
  for (const auto& snap : traj.snapshots) {
    for (const auto& e : snap.entries) {
      os << snap.time << ',' << e.degree << ',' << e.threshold << ',' << e.white << ','
         << e.bins << '\n';
    }
  }
  os.precision(old_precision);
}

}  // namespace cclt::cascade
