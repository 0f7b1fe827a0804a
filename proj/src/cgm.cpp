#include "cclt/cgm.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>

#include "cclt/rng.hpp"

namespace cclt::cgm {

namespace {

Multigraph skeleton(std::span<const int> degrees) {
  Multigraph mg;
  mg.offsets.assign(degrees.size() + 1, 0);
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < degrees.size(); ++i) {
    if (degrees[i] < 0) throw GraphError("negative degree at node " + std::to_string(i));
    total += static_cast<std::uint64_t>(degrees[i]);
    mg.offsets[i + 1] = total;
  }
  if (total % 2 != 0) throw GraphError("odd half-edge count");
  if (total > std::numeric_limits<HalfEdgeId>::max()) throw GraphError("too many half-edges");
  mg.owner.resize(total);
  for (std::size_t i = 0; i < degrees.size(); ++i) {
    std::fill(mg.owner.begin() + static_cast<std::ptrdiff_t>(mg.offsets[i]),
              mg.owner.begin() + static_cast<std::ptrdiff_t>(mg.offsets[i + 1]),
              static_cast<NodeId>(i));
  }
  mg.mate.resize(total);
  return mg;
}

void pair_uniformly(Multigraph& mg, Rng& rng) {
  std::vector<HalfEdgeId> perm(mg.num_half_edges());
  std::iota(perm.begin(), perm.end(), HalfEdgeId{0});
  for (std::size_t i = perm.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.below(i));
    std::swap(perm[i - 1], perm[j]);
  }
  for (std::size_t k = 0; k + 1 < perm.size(); k += 2) {
    mg.mate[perm[k]] = perm[k + 1];
    mg.mate[perm[k + 1]] = perm[k];
  }
}

}  // namespace

RetryLimitExceeded::RetryLimitExceeded(int attempts)
    : GraphError("no simple graph after " + std::to_string(attempts) + " attempts"),
      attempts_(attempts) {}

std::vector<int> Multigraph::degrees() const {
  std::vector<int> out(num_nodes());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = degree(static_cast<NodeId>(i));
  return out;
}

Multigraph build_multigraph(std::span<const int> degrees, std::uint64_t seed) {
  Multigraph mg = skeleton(degrees);
  Rng rng(seed);
  pair_uniformly(mg, rng);
  return mg;
}

Multigraph build_multigraph(const dist::NodeSequence& seq, std::uint64_t seed) {
  return build_multigraph(std::span<const int>(seq.degrees), seed);
}

Multigraph from_edges(std::size_t num_nodes,
                      const std::vector<std::pair<NodeId, NodeId>>& edges) {
  std::vector<int> degrees(num_nodes, 0);
  for (const auto& [u, v] : edges) {
    if (u >= num_nodes || v >= num_nodes) throw GraphError("edge endpoint out of range");
    ++degrees[u];
    ++degrees[v];
  }
  Multigraph mg = skeleton(degrees);
  std::vector<std::uint64_t> cursor(mg.offsets.begin(), mg.offsets.end() - 1);
  for (const auto& [u, v] : edges) {
    const auto hu = static_cast<HalfEdgeId>(cursor[u]++);
    const auto hv = static_cast<HalfEdgeId>(cursor[v]++);
    mg.mate[hu] = hv;
    mg.mate[hv] = hu;
  }
  return mg;
}

bool is_simple(const Multigraph& mg) {
  std::vector<std::uint64_t> stamp(mg.num_nodes(), std::numeric_limits<std::uint64_t>::max());
  for (NodeId i = 0; i < mg.num_nodes(); ++i) {
    for (auto h = mg.offsets[i]; h < mg.offsets[i + 1]; ++h) {
      const NodeId j = mg.owner[mg.mate[h]];
      if (j == i || stamp[j] == i) return false;
      stamp[j] = i;
    }
  }
  return true;
}

SimpleResult to_simple(const Multigraph& mg, SimpleMode mode, int max_retries,
                       std::uint64_t seed) {
  if (is_simple(mg)) return {mg, 1};

  if (mode == SimpleMode::kErase) {
    auto edges = edge_list(mg);
    for (auto& [u, v] : edges) {
      if (u > v) std::swap(u, v);
    }
    std::erase_if(edges, [](const auto& e) { return e.first == e.second; });
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    return {from_edges(mg.num_nodes(), edges), 1};
  }

  const auto degrees = mg.degrees();
  Multigraph candidate = skeleton(degrees);
  for (int attempt = 2; attempt <= max_retries; ++attempt) {
    Rng rng(mix_seed(seed, static_cast<std::uint64_t>(attempt)));
    pair_uniformly(candidate, rng);
    if (is_simple(candidate)) return {std::move(candidate), attempt};
  }
  throw RetryLimitExceeded(std::max(max_retries, 1));
}

std::vector<NodeId> neighbors(const Multigraph& mg, NodeId i) {
  if (i >= mg.num_nodes()) throw std::out_of_range("node index out of range");
  std::vector<NodeId> out;
  out.reserve(static_cast<std::size_t>(mg.degree(i)));
  for (auto h = mg.offsets[i]; h < mg.offsets[i + 1]; ++h) out.push_back(mg.owner[mg.mate[h]]);
  return out;
}

std::vector<std::pair<NodeId, NodeId>> edge_list(const Multigraph& mg) {
  std::vector<std::pair<NodeId, NodeId>> out;
  out.reserve(mg.num_edges());
  for (HalfEdgeId h = 0; h < mg.num_half_edges(); ++h) {
    if (h < mg.mate[h]) out.emplace_back(mg.owner[h], mg.owner[mg.mate[h]]);
  }
  return out;
}

void write_edge_csv(std::ostream& os, const Multigraph& mg) {
  os << "u,v\n";
  for (const auto& [u, v] : edge_list(mg)) os << u << ',' << v << '\n';
}

}  // namespace cclt::cgm
