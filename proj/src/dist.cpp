#include "cclt/dist.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include "cclt/errors.hpp"
#include "cclt/rng.hpp"

namespace cclt::dist {

namespace {

constexpr double kMassSumTolerance = 1e-12;

std::string describe(const Atom& a) {
  std::ostringstream os;
  os << "(d=" << a.degree << ", theta=" << a.threshold << ", p=" << a.mass << ")";
  return os.str();
}

std::vector<Atom> sorted_atoms(const Distribution& dist) {
  std::vector<Atom> atoms = dist.atoms;
  std::sort(atoms.begin(), atoms.end(), [](const Atom& a, const Atom& b) {
    return std::pair(a.degree, a.threshold) < std::pair(b.degree, b.threshold);
  });
  return atoms;
}

void repair_parity(NodeSequence& seq) {
  if (seq.degree_sum() % 2 == 0) return;
  const auto max_it = std::max_element(seq.degrees.begin(), seq.degrees.end());
  std::size_t last = 0;
  for (std::size_t i = 0; i < seq.degrees.size(); ++i) {
    if (seq.degrees[i] == *max_it) last = i;
  }
  seq.degrees[last] += 1;
  seq.parity_fixed_node = last;
}

}  // namespace

int Distribution::max_degree() const {
  int best = 0;
  for (const auto& a : atoms) best = std::max(best, a.degree);
  return best;
}

double Distribution::mass(int degree, int threshold) const {
  for (const auto& a : atoms) {
    if (a.degree == degree && a.threshold == threshold) return a.mass;
  }
  return 0.0;
}

double Distribution::seed_fraction() const {
  double total = 0.0;
  for (const auto& a : atoms) {
    if (a.threshold == 0) total += a.mass;
  }
  return total;
}

InvalidDistribution::InvalidDistribution(std::vector<Violation> violations)
    : std::invalid_argument([&] {
        std::string msg = "invalid distribution:";
        for (const auto& v : violations) msg += " " + v.message + ";";
        return msg;
      }()),
      violations_(std::move(violations)) {}

std::vector<Violation> validate(const Distribution& dist) {
  std::vector<Violation> out;
  if (dist.atoms.empty()) {
    out.push_back({ViolationKind::kEmpty, "distribution has no atoms", {}});
    return out;
  }

  double total = 0.0;
  double isolated = 0.0;
  std::set<std::pair<int, int>> seen;
  std::set<std::pair<int, int>> reported;
  for (const auto& a : dist.atoms) {
    if (a.degree < 0 || a.threshold < 0) {
      out.push_back({ViolationKind::kNegativeValue,
                     "negative degree or threshold " + describe(a), {a}});
    }
    if (!(a.mass > 0.0)) {
      out.push_back({ViolationKind::kNonPositiveMass, "non-positive mass " + describe(a), {a}});
    } else if (a.mass > 1.0) {
      out.push_back({ViolationKind::kMassAboveOne, "mass above 1 " + describe(a), {a}});
    }
    const std::pair key{a.degree, a.threshold};
    if (!seen.insert(key).second && reported.insert(key).second) {
      std::vector<Atom> dups;
      std::copy_if(dist.atoms.begin(), dist.atoms.end(), std::back_inserter(dups),
                   [&](const Atom& b) { return b.degree == a.degree && b.threshold == a.threshold; });
      out.push_back({ViolationKind::kDuplicateAtom, "duplicate atom " + describe(a), dups});
    }
    total += a.mass;
    if (a.degree == 0) isolated += a.mass;
  }

  if (std::abs(total - 1.0) > kMassSumTolerance || !std::isfinite(total)) {
    std::ostringstream os;
    os.precision(17);
    os << "masses sum to " << total << ", expected 1";
    out.push_back({ViolationKind::kMassSum, os.str(), dist.atoms});
  }
  if (isolated >= 1.0 - kMassSumTolerance) {
    std::vector<Atom> zeros;
    std::copy_if(dist.atoms.begin(), dist.atoms.end(), std::back_inserter(zeros),
                 [](const Atom& a) { return a.degree == 0; });
    out.push_back({ViolationKind::kIsolatedMass, "sum_theta p(0,theta) >= 1", zeros});
  }
  return out;
}

void require_valid(const Distribution& dist) {
  auto violations = validate(dist);
  if (!violations.empty()) throw InvalidDistribution(std::move(violations));
}

double mean_degree(const Distribution& dist) {
  double lambda = 0.0;
  for (const auto& a : dist.atoms) lambda += a.degree * a.mass;
  if (!(lambda > 0.0)) throw std::domain_error("degenerate degree law: mean degree is 0");
  return lambda;
}

std::int64_t NodeSequence::degree_sum() const {
  return std::accumulate(degrees.begin(), degrees.end(), std::int64_t{0});
}

EmpiricalCounts count(const NodeSequence& seq) {
  EmpiricalCounts out;
  out.n = static_cast<std::int64_t>(seq.size());
  for (std::size_t i = 0; i < seq.size(); ++i) {
    ++out.counts[{seq.degrees[i], seq.thresholds[i]}];
  }
  return out;
}

NodeSequence realize_rounded(const Distribution& dist, std::int64_t n) {
  require_valid(dist);
  if (n < 1) throw std::invalid_argument("realize_rounded: n must be >= 1");

  const auto atoms = sorted_atoms(dist);
  const std::size_t k = atoms.size();
  std::vector<std::int64_t> quota(k);
  std::vector<double> remainder(k);
  std::int64_t assigned = 0;
  for (std::size_t i = 0; i < k; ++i) {
    const double exact = static_cast<double>(n) * atoms[i].mass;
    quota[i] = static_cast<std::int64_t>(std::floor(exact));
    remainder[i] = exact - static_cast<double>(quota[i]);
    assigned += quota[i];
  }

  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
  for (std::int64_t left = n - assigned, i = 0; left > 0; --left, ++i) {
    ++quota[order[static_cast<std::size_t>(i) % k]];
  }
  // Masses summing to slightly above one can over-assign by a unit.
  for (std::int64_t over = assigned - n, i = static_cast<std::int64_t>(k) - 1; over > 0; --i) {
    auto& q = quota[order[static_cast<std::size_t>(i)]];
    if (q > 0) {
      --q;
      --over;
    }
  }

  NodeSequence seq;
  seq.degrees.reserve(static_cast<std::size_t>(n));
  seq.thresholds.reserve(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < k; ++i) {
    seq.degrees.insert(seq.degrees.end(), static_cast<std::size_t>(quota[i]), atoms[i].degree);
    seq.thresholds.insert(seq.thresholds.end(), static_cast<std::size_t>(quota[i]),
                          atoms[i].threshold);
  }
  repair_parity(seq);
  return seq;
}

NodeSequence realize_sampled(const Distribution& dist, std::int64_t n, std::uint64_t seed) {
  require_valid(dist);
  if (n < 1) throw std::invalid_argument("realize_sampled: n must be >= 1");

  const auto atoms = sorted_atoms(dist);
  std::vector<double> cumulative(atoms.size());
  double running = 0.0;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    running += atoms[i].mass;
    cumulative[i] = running;
  }

  Rng rng(seed);
  NodeSequence seq;
  seq.degrees.resize(static_cast<std::size_t>(n));
  seq.thresholds.resize(static_cast<std::size_t>(n));
  for (std::size_t v = 0; v < seq.size(); ++v) {
    const double u = rng.uniform() * running;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    const auto idx = std::min<std::size_t>(static_cast<std::size_t>(it - cumulative.begin()),
                                           atoms.size() - 1);
    seq.degrees[v] = atoms[idx].degree;
    seq.thresholds[v] = atoms[idx].threshold;
  }
  repair_parity(seq);
  return seq;
}

Distribution preset_bootstrap(const std::vector<DegreeMass>& degree_law, int threshold,
                              double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("preset_bootstrap: seed fraction must lie in (0,1)");
  }
  if (threshold < 1) throw std::invalid_argument("preset_bootstrap: threshold must be >= 1");
  Distribution out;
  for (const auto& q : degree_law) {
    out.atoms.push_back({q.degree, 0, alpha * q.mass});
    out.atoms.push_back({q.degree, threshold, (1.0 - alpha) * q.mass});
  }
  return out;
}

Distribution preset_kcore(const std::vector<DegreeMass>& degree_law, int k) {
  if (k < 1) throw std::invalid_argument("preset_kcore: k must be >= 1");
  Distribution out;
  for (const auto& q : degree_law) {
    out.atoms.push_back({q.degree, std::max(q.degree - k, 0), q.mass});
  }
  return out;
}

Distribution from_json(const nlohmann::json& doc) {
  std::vector<std::string> problems;
  Distribution out;
  if (!doc.is_array()) throw ConfigError({"distribution: expected an array of atoms"});
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const auto& item = doc[i];
    const std::string where = "distribution[" + std::to_string(i) + "]";
    if (!item.is_object()) {
      problems.push_back(where + ": expected an object");
      continue;
    }
    for (const auto& [key, value] : item.items()) {
      if (key != "d" && key != "theta" && key != "p") {
        problems.push_back(where + ": unknown key \"" + key + "\"");
      }
    }
    Atom atom;
    bool ok = true;
    for (const char* key : {"d", "theta"}) {
      if (!item.contains(key)) {
        problems.push_back(where + ": missing \"" + key + "\"");
        ok = false;
      } else if (!item[key].is_number_integer()) {
        problems.push_back(where + "." + key + ": expected an integer");
        ok = false;
      }
    }
    if (!item.contains("p")) {
      problems.push_back(where + ": missing \"p\"");
      ok = false;
    } else if (!item["p"].is_number()) {
      problems.push_back(where + ".p: expected a number");
      ok = false;
    }
    if (!ok) continue;
    atom.degree = item["d"].get<int>();
    atom.threshold = item["theta"].get<int>();
    atom.mass = item["p"].get<double>();
    out.atoms.push_back(atom);
  }
  if (!problems.empty()) throw ConfigError(std::move(problems));
  return out;
}

nlohmann::json to_json(const Distribution& dist) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& a : dist.atoms) {
    arr.push_back({{"d", a.degree}, {"theta", a.threshold}, {"p", a.mass}});
  }
  return arr;
}

Distribution load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({"cannot open distribution file " + path.string()});
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError({path.string() + ": " + e.what()});
  }
  return from_json(doc);
}

Distribution parse_inline(const std::string& text) {
  Distribution out;
  std::vector<std::string> problems;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    int d = 0;
    int theta = 0;
    double p = 0.0;
    char c1 = 0;
    char c2 = 0;
    std::istringstream is(item);
    if (!(is >> d >> c1 >> theta >> c2 >> p) || c1 != ':' || c2 != ':' || !(is >> std::ws).eof()) {
      problems.push_back("malformed atom \"" + item + "\" (expected d:theta:p)");
      continue;
    }
    out.atoms.push_back({d, theta, p});
  }
  if (out.atoms.empty() && problems.empty()) problems.push_back("empty distribution");
  if (!problems.empty()) throw ConfigError(std::move(problems));
  return out;
}

}  // namespace cclt::dist
