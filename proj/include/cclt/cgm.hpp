#pragma once

#include <cstdint>
#include <ostream>
#include <span>
#include <stdexcept>
#include <vector>

#include "cclt/dist.hpp"

namespace cclt::cgm {

using NodeId = std::uint32_t;
using HalfEdgeId = std::uint32_t;

/// Configuration-model multigraph stored as a perfect matching on half-edges.
/// Half-edges of node i occupy [offsets[i], offsets[i+1]).
struct Multigraph {
  std::vector<std::uint64_t> offsets{0};
  std::vector<NodeId> owner;
  std::vector<HalfEdgeId> mate;

  std::size_t num_nodes() const { return offsets.size() - 1; }
  std::size_t num_half_edges() const { return owner.size(); }
  std::size_t num_edges() const { return owner.size() / 2; }
  int degree(NodeId i) const { return static_cast<int>(offsets[i + 1] - offsets[i]); }
  std::vector<int> degrees() const;

  friend bool operator==(const Multigraph&, const Multigraph&) = default;
};

class GraphError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Thrown by to_simple in reject mode once max_retries pairings were tried.
class RetryLimitExceeded : public GraphError {
 public:
  explicit RetryLimitExceeded(int attempts);
  int attempts() const noexcept { return attempts_; }

 private:
  int attempts_;
};

/// Uniform perfect matching: Fisher-Yates shuffle of the half-edges, then
/// consecutive entries are paired.
Multigraph build_multigraph(std::span<const int> degrees, std::uint64_t seed);
Multigraph build_multigraph(const dist::NodeSequence& seq, std::uint64_t seed);

/// Builds the multigraph with exactly the given edges (u, v); loops allowed.
Multigraph from_edges(std::size_t num_nodes,
                      const std::vector<std::pair<NodeId, NodeId>>& edges);

bool is_simple(const Multigraph& mg);

enum class SimpleMode { kReject, kErase };

struct SimpleResult {
  Multigraph graph;
  int attempts = 1;
};

/// kReject re-pairs with fresh randomness until simple (uniform over simple
/// graphs with the degree sequence). kErase drops loops and collapses
/// multi-edges, so degrees can shrink.
SimpleResult to_simple(const Multigraph& mg, SimpleMode mode, int max_retries,
                       std::uint64_t seed);

/// Owners of the mates of i's half-edges. A loop at i yields i twice.
std::vector<NodeId> neighbors(const Multigraph& mg, NodeId i);

/// Edge pairs (u, v) with u the owner of the lower half-edge id.
std::vector<std::pair<NodeId, NodeId>> edge_list(const Multigraph& mg);

/// CSV with header "u,v"; loops appear as (i,i) and multi-edges repeat.
void write_edge_csv(std::ostream& os, const Multigraph& mg);

}  // namespace cclt::cgm
