#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include "cclt/cgm.hpp"

namespace cclt::cascade {

struct CascadeResult {
  std::vector<std::uint8_t> final_active;
  std::int64_t final_size = 0;
  /// |A_t| for t = 0, 1, 2, ...; ends with a repeated entry at the fixed
  /// point. Only the discrete engine fills this.
  std::vector<std::int64_t> rounds;
};

/// Synchronous rounds: A_0 = {theta == 0}, then a node is active once at
/// least theta of its neighbour half-edges lead to active nodes.
CascadeResult run_discrete(const cgm::Multigraph& mg, std::span<const int> thresholds);

enum class EventKind : std::uint8_t { kWhiteDeath, kRedRecolor, kStop };

const char* to_string(EventKind kind);

struct Event {
  double time = 0.0;
  EventKind kind = EventKind::kStop;
  cgm::HalfEdgeId ball = 0;
  cgm::NodeId bin = 0;
};

/// White A-balls, white B-balls, A-bins, B-bins. h_a is -1 once stopped.
struct State {
  std::int64_t h_a = 0;
  std::int64_t h_b = 0;
  std::int64_t a_n = 0;
  std::int64_t b_n = 0;

  friend bool operator==(const State&, const State&) = default;
};

struct OccupancyEntry {
  int degree = 0;
  int threshold = 0;
  int white = 0;
  std::int64_t bins = 0;
};

/// B-bins grouped by (d, theta, white balls left) at one time.
struct OccupancySnapshot {
  double time = 0.0;
  std::vector<OccupancyEntry> entries;
};

struct Trajectory {
  /// State at t = 0 before the initial A-ball removal.
  State initial;
  /// Step functions: states[k] (after event k, of kind kinds[k]) holds on
  /// [times[k], times[k+1]). Paired steps share one time stamp.
  std::vector<double> times;
  std::vector<EventKind> kinds;
  std::vector<State> states;
  /// Ball and bin of every event; filled only with record_events.
  std::vector<Event> events;
  double tau = 0.0;
  /// Stopped state, h_a == -1.
  State terminal;
  std::vector<OccupancySnapshot> snapshots;
};

struct ContinuousOptions {
  bool record_events = false;
  /// Uniform snapshot grid of this many points on [0, tau]; needs a replay
  /// of the run since tau is only known at the end. Zero disables it.
  int snapshot_points = 64;
  /// Explicit snapshot times, taken in the same pass.
  std::vector<double> snapshot_times;
};

struct ContinuousRun {
  Trajectory trajectory;
  CascadeResult cascade;
};

/// White/red balls-and-bins exploration in continuous time on a fixed
/// pairing. A B-bin with d balls and threshold theta turns A once theta of
/// its balls have died. The recolored A-ball is uniform among white A-balls;
/// the next ball to die is its mate in mg, which for a uniform pairing is a
/// uniform white ball, after an Exponential(white count) gap. Stops at the
/// first recolor demand with no white A-ball left.
ContinuousRun run_continuous(const cgm::Multigraph& mg, std::span<const int> thresholds,
                             std::uint64_t seed, const ContinuousOptions& options = {});

/// Right-continuous evaluation; frozen terminal state for t >= tau.
State evaluate_at(const Trajectory& traj, double t);

/// sup_t |N(t)/n - exp(-t)| for a pure rate-1 death process started at n.
double death_process_reference(std::int64_t n_balls, std::uint64_t seed);

/// Columns time,event_kind,H_A,H_B,A_n,B_n: one row per paired step and a
/// final "terminal" row at tau whose A_n is the final size.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);

/// Columns time,d,theta,l,bins.
void write_snapshots_csv(std::ostream& os, const Trajectory& traj);

}  // namespace cclt::cascade
