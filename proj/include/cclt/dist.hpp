#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace cclt::dist {

/// One point mass of the joint degree/threshold law.
struct Atom {
  int degree = 0;
  int threshold = 0;
  double mass = 0.0;

  friend bool operator==(const Atom&, const Atom&) = default;
};

/// Finite-support joint law p(d, theta). Holds whatever atoms it was given;
/// use validate() before handing it to anything that assumes a proper law.
struct Distribution {
  std::vector<Atom> atoms;

  int max_degree() const;
  /// p(d, theta), zero when the pair is not in the support.
  double mass(int degree, int threshold) const;
  /// Total mass on threshold-zero atoms.
  double seed_fraction() const;

  friend bool operator==(const Distribution&, const Distribution&) = default;
};

/// Marginal degree law q(d), input to the presets.
struct DegreeMass {
  int degree = 0;
  double mass = 0.0;
};

enum class ViolationKind {
  kEmpty,
  kNegativeValue,
  kNonPositiveMass,
  kMassAboveOne,
  kDuplicateAtom,
  kMassSum,
  kIsolatedMass,
};

struct Violation {
  ViolationKind kind;
  std::string message;
  std::vector<Atom> atoms;
};

/// Every violated invariant; empty means the law is valid.
std::vector<Violation> validate(const Distribution& dist);

/// Throws InvalidDistribution listing the violations, if any.
void require_valid(const Distribution& dist);

class InvalidDistribution : public std::invalid_argument {
 public:
  explicit InvalidDistribution(std::vector<Violation> violations);
  const std::vector<Violation>& violations() const noexcept { return violations_; }

 private:
  std::vector<Violation> violations_;
};

/// lambda = sum d p(d, theta). Throws std::domain_error when it is zero.
double mean_degree(const Distribution& dist);

struct NodeSequence {
  std::vector<int> degrees;
  std::vector<int> thresholds;
  /// Node whose degree was bumped by one to make the degree sum even.
  std::optional<std::size_t> parity_fixed_node;

  std::size_t size() const { return degrees.size(); }
  std::int64_t degree_sum() const;
};

/// u_n(d, theta) for one realization.
struct EmpiricalCounts {
  std::map<std::pair<int, int>, std::int64_t> counts;
  std::int64_t n = 0;
};

EmpiricalCounts count(const NodeSequence& seq);

/// Deterministic largest-remainder apportionment of n p(d, theta), nodes
/// grouped by (d, theta) in lexicographic order, then the parity repair.
NodeSequence realize_rounded(const Distribution& dist, std::int64_t n);

/// Node types drawn i.i.d. from dist, then the parity repair.
NodeSequence realize_sampled(const Distribution& dist, std::int64_t n, std::uint64_t seed);

/// Bootstrap percolation: a fraction alpha of every degree class are seeds,
/// the rest need `threshold` active neighbours.
Distribution preset_bootstrap(const std::vector<DegreeMass>& degree_law, int threshold,
                              double alpha);

/// Thresholds (d - k)+. Under at-least-theta activation the never-activated
/// set is the (k+1)-core of the multigraph.
Distribution preset_kcore(const std::vector<DegreeMass>& degree_law, int k);

/// JSON array of {"d", "theta", "p"} objects; unknown keys are rejected.
Distribution from_json(const nlohmann::json& doc);
nlohmann::json to_json(const Distribution& dist);
Distribution load(const std::filesystem::path& path);

/// "d:theta:p,d:theta:p,..." as accepted on the command line.
Distribution parse_inline(const std::string& text);

}  // namespace cclt::dist
