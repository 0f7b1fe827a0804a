#include "cclt/config.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <sstream>
#include <thread>

#include "cclt/errors.hpp"
#include "cclt/io.hpp"

namespace cclt::config {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::vector<std::string> kTopKeys = {"distribution", "n",          "trials",  "seed",
                                           "eval_time",    "snapshots",  "quadrature",
                                           "output_dir",   "curve",      "n_list",  "trial",
                                           "graph"};
const std::vector<std::string> kQuadratureKeys = {"abs_tol", "max_depth", "root_tol",
                                                  "scan_step", "t_max"};
const std::vector<std::string> kCurveKeys = {"points", "t_end"};
const std::vector<std::string> kGraphKeys = {"mode", "max_retries"};

class Reader {
 public:
  explicit Reader(std::vector<std::string>& problems) : problems_(problems) {}

  void check_keys(const json& obj, const std::vector<std::string>& allowed,
                  const std::string& where) {
    for (const auto& [key, value] : obj.items()) {
      if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
        problems_.push_back(where + "unknown key \"" + key + "\"");
      }
    }
  }

  template <typename Int>
  void integer(const json& obj, const char* key, const std::string& field, Int& out) {
    if (!obj.contains(key)) return;
    const json& v = obj.at(key);
    if (!v.is_number_integer()) {
      problems_.push_back("field '" + field + "': expected an integer, got " + v.dump());
      return;
    }
    if constexpr (std::is_unsigned_v<Int>) {
      if (!v.is_number_unsigned()) {
        problems_.push_back("field '" + field + "': expected a non-negative integer");
        return;
      }
      out = v.get<Int>();
    } else {
      const auto x = v.get<std::int64_t>();
      if (x < std::numeric_limits<Int>::min() || x > std::numeric_limits<Int>::max()) {
        problems_.push_back("field '" + field + "': out of range");
        return;
      }
      out = static_cast<Int>(x);
    }
  }

  void real(const json& obj, const char* key, const std::string& field, double& out) {
    if (!obj.contains(key)) return;
    const json& v = obj.at(key);
    if (!v.is_number()) {
      problems_.push_back("field '" + field + "': expected a number, got " + v.dump());
      return;
    }
    out = v.get<double>();
  }

  void real(const json& obj, const char* key, const std::string& field,
            std::optional<double>& out) {
    if (!obj.contains(key)) return;
    double x = 0.0;
    const auto before = problems_.size();
    real(obj, key, field, x);
    if (problems_.size() == before) out = x;
  }

  void string(const json& obj, const char* key, const std::string& field, std::string& out) {
    if (!obj.contains(key)) return;
    const json& v = obj.at(key);
    if (!v.is_string()) {
      problems_.push_back("field '" + field + "': expected a string");
      return;
    }
    out = v.get<std::string>();
  }

  const json* object(const json& obj, const char* key) {
    if (!obj.contains(key)) return nullptr;
    if (!obj.at(key).is_object()) {
      problems_.push_back(std::string("field '") + key + "': expected an object");
      return nullptr;
    }
    return &obj.at(key);
  }

 private:
  std::vector<std::string>& problems_;
};

void absorb(std::vector<std::string>& problems, const ConfigError& e, const std::string& prefix) {
  for (const auto& p : e.problems()) problems.push_back(prefix + p);
}

std::optional<GraphMode> graph_mode_from(const std::string& s) {
  if (s == "multigraph") return GraphMode::kMultigraph;
  if (s == "reject") return GraphMode::kReject;
  if (s == "erase") return GraphMode::kErase;
  return std::nullopt;
}

void load_distribution(RunConfig& cfg, const json* doc_dist, const fs::path& base,
                       const Overrides& flags, std::vector<std::string>& problems) {
  try {
    if (flags.dist_inline) {
      cfg.distribution = dist::parse_inline(*flags.dist_inline);
      cfg.distribution_source = "inline:" + *flags.dist_inline;
    } else if (flags.dist_file) {
      if (!fs::exists(*flags.dist_file)) {
        problems.push_back("distribution file not found: " + *flags.dist_file);
        return;
      }
      cfg.distribution = dist::load(*flags.dist_file);
      cfg.distribution_source = *flags.dist_file;
    } else if (doc_dist != nullptr) {
      if (doc_dist->is_string()) {
        const fs::path p = base / doc_dist->get<std::string>();
        if (!fs::exists(p)) {
          problems.push_back("distribution file not found: " + p.string());
          return;
        }
        cfg.distribution = dist::load(p);
        cfg.distribution_source = p.string();
      } else {
        cfg.distribution = dist::from_json(*doc_dist);
        cfg.distribution_source = "config";
      }
    } else {
      problems.push_back("no distribution given (use --dist, --dist-file or \"distribution\")");
      return;
    }
  } catch (const ConfigError& e) {
    absorb(problems, e, "distribution: ");
    return;
  }
  for (const auto& v : dist::validate(cfg.distribution)) {
    problems.push_back("distribution: " + v.message);
  }
}

}  // namespace

int available_parallelism() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

std::vector<std::int64_t> parse_n_list(const std::string& text) {
  std::vector<std::int64_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::int64_t v = 0;
    const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (ec != std::errc() || ptr != item.data() + item.size()) {
      throw ConfigError({"n_list: malformed number \"" + item + "\""});
    }
    out.push_back(v);
  }
  if (out.empty()) throw ConfigError({"n_list: empty list"});
  return out;
}

RunConfig parse_config(const std::optional<fs::path>& file, const Overrides& flags,
                       const char* env_workers, bool require_distribution) {
  RunConfig cfg;
  std::vector<std::string> problems;
  Reader rd(problems);
  json doc = json::object();
  fs::path base = ".";

  if (file) {
    base = file->has_parent_path() ? file->parent_path() : fs::path(".");
    if (!fs::exists(*file)) {
      throw ConfigError({"config file not found: " + file->string()});
    }
    try {
      doc = json::parse(io::read_text(*file));
    } catch (const json::parse_error& e) {
      throw ConfigError({file->string() + ": " + e.what()});
    }
    if (!doc.is_object()) throw ConfigError({file->string() + ": expected a JSON object"});
  }

  rd.check_keys(doc, kTopKeys, "");
  rd.integer(doc, "n", "n", cfg.n);
  rd.integer(doc, "trials", "trials", cfg.trials);
  rd.integer(doc, "seed", "seed", cfg.seed);
  rd.real(doc, "eval_time", "eval_time", cfg.eval_time);
  rd.integer(doc, "snapshots", "snapshots", cfg.snapshots);
  rd.integer(doc, "trial", "trial", cfg.trial);
  std::string output_dir = cfg.output_dir.string();
  rd.string(doc, "output_dir", "output_dir", output_dir);
  cfg.output_dir = output_dir;
  if (const json* q = rd.object(doc, "quadrature")) {
    rd.check_keys(*q, kQuadratureKeys, "quadrature: ");
    rd.real(*q, "abs_tol", "quadrature.abs_tol", cfg.quadrature.abs_tol);
    rd.integer(*q, "max_depth", "quadrature.max_depth", cfg.quadrature.max_depth);
    rd.real(*q, "root_tol", "quadrature.root_tol", cfg.quadrature.root_tol);
    rd.real(*q, "scan_step", "quadrature.scan_step", cfg.quadrature.scan_step);
    rd.real(*q, "t_max", "quadrature.t_max", cfg.quadrature.t_max);
  }
  if (const json* c = rd.object(doc, "curve")) {
    rd.check_keys(*c, kCurveKeys, "curve: ");
    rd.integer(*c, "points", "curve.points", cfg.curve_points);
    rd.real(*c, "t_end", "curve.t_end", cfg.curve_t_end);
  }
  if (const json* g = rd.object(doc, "graph")) {
    rd.check_keys(*g, kGraphKeys, "graph: ");
    std::string mode = "multigraph";
    rd.string(*g, "mode", "graph.mode", mode);
    if (auto m = graph_mode_from(mode)) {
      cfg.graph_mode = *m;
    } else {
      problems.push_back("field 'graph.mode': expected multigraph, reject or erase");
    }
    rd.integer(*g, "max_retries", "graph.max_retries", cfg.max_retries);
  }
  if (doc.contains("n_list")) {
    const json& v = doc.at("n_list");
    if (!v.is_array() || !std::all_of(v.begin(), v.end(),
                                      [](const json& x) { return x.is_number_integer(); })) {
      problems.push_back("field 'n_list': expected an array of integers");
    } else {
      cfg.n_list = v.get<std::vector<std::int64_t>>();
    }
  }

  if (flags.n) cfg.n = *flags.n;
  if (flags.trials) cfg.trials = *flags.trials;
  if (flags.seed) cfg.seed = *flags.seed;
  if (flags.eval_time) cfg.eval_time = *flags.eval_time;
  if (flags.snapshots) cfg.snapshots = *flags.snapshots;
  if (flags.abs_tol) cfg.quadrature.abs_tol = *flags.abs_tol;
  if (flags.max_depth) cfg.quadrature.max_depth = *flags.max_depth;
  if (flags.root_tol) cfg.quadrature.root_tol = *flags.root_tol;
  if (flags.scan_step) cfg.quadrature.scan_step = *flags.scan_step;
  if (flags.t_max) cfg.quadrature.t_max = *flags.t_max;
  if (flags.output_dir) cfg.output_dir = *flags.output_dir;
  if (flags.curve_points) cfg.curve_points = *flags.curve_points;
  if (flags.curve_t_end) cfg.curve_t_end = *flags.curve_t_end;
  if (flags.trial) cfg.trial = *flags.trial;
  if (flags.max_retries) cfg.max_retries = *flags.max_retries;
  if (flags.graph_mode) {
    if (auto m = graph_mode_from(*flags.graph_mode)) {
      cfg.graph_mode = *m;
    } else {
      problems.push_back("--graph-mode: expected multigraph, reject or erase");
    }
  }
  if (flags.n_list) {
    try {
      cfg.n_list = parse_n_list(*flags.n_list);
    } catch (const ConfigError& e) {
      absorb(problems, e, "");
    }
  }

  if (flags.workers) {
    cfg.workers = *flags.workers;
  } else if (env_workers != nullptr && *env_workers != '\0') {
    const std::string s(env_workers);
    int w = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), w);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
      problems.push_back(std::string(kWorkersEnv) + ": malformed number \"" + s + "\"");
    } else {
      cfg.workers = w;
    }
  } else {
    cfg.workers = available_parallelism();
  }

  if (cfg.n < 1) problems.push_back("n must be >= 1");
  if (cfg.trials < 1) problems.push_back("trials must be >= 1");
  if (cfg.eval_time && !(*cfg.eval_time >= 0.0)) problems.push_back("eval_time must be >= 0");
  if (cfg.snapshots < 0) problems.push_back("snapshots must be >= 0");
  if (cfg.workers < 1) problems.push_back("workers must be >= 1");
  if (cfg.curve_points < 2) problems.push_back("curve points must be >= 2");
  if (cfg.curve_t_end && !(*cfg.curve_t_end > 0.0)) problems.push_back("curve t_end must be > 0");
  if (cfg.trial < 0) problems.push_back("trial must be >= 0");
  if (cfg.max_retries < 1) problems.push_back("max_retries must be >= 1");
  if (cfg.output_dir.empty()) problems.push_back("output_dir must not be empty");
  if (cfg.n_list.empty()) problems.push_back("n_list must not be empty");
  for (std::size_t i = 0; i < cfg.n_list.size(); ++i) {
    if (cfg.n_list[i] < 1 || (i > 0 && cfg.n_list[i] <= cfg.n_list[i - 1])) {
      problems.push_back("n_list must be positive and strictly increasing");
      break;
    }
  }
  try {
    theory::validate(cfg.quadrature);
  } catch (const std::invalid_argument& e) {
    problems.push_back(e.what());
  }

  const json* doc_dist = doc.contains("distribution") ? &doc.at("distribution") : nullptr;
  if (require_distribution || flags.dist_inline || flags.dist_file || doc_dist != nullptr) {
    load_distribution(cfg, doc_dist, base, flags, problems);
  }

  if (!problems.empty()) throw ConfigError(std::move(problems));
  return cfg;
}

}  // namespace cclt::config
