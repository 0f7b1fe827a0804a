#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "cclt/dist.hpp"
#include "cclt/theory.hpp"

namespace cclt::config {

enum class GraphMode { kMultigraph, kReject, kErase };

struct RunConfig {
  dist::Distribution distribution;
  /// Where the law came from, echoed into outputs.
  std::string distribution_source;
  std::int64_t n = 10000;
  std::int64_t trials = 500;
  std::uint64_t seed = 0;
  /// Unset means t* + 1.
  std::optional<double> eval_time;
  int snapshots = 64;
  theory::QuadratureConfig quadrature;
  std::filesystem::path output_dir = "out";
  int workers = 1;

  int curve_points = 101;
  /// Unset means t_eval + 1.
  std::optional<double> curve_t_end;
  std::vector<std::int64_t> n_list{1000, 10000, 100000};
  /// Trial index replayed by `simulate`.
  std::int64_t trial = 0;
  GraphMode graph_mode = GraphMode::kMultigraph;
  int max_retries = 100;
};

/// Command-line values; each set field overrides the config file.
struct Overrides {
  std::optional<std::string> dist_inline;
  std::optional<std::string> dist_file;
  std::optional<std::int64_t> n;
  std::optional<std::int64_t> trials;
  std::optional<std::uint64_t> seed;
  std::optional<double> eval_time;
  std::optional<int> snapshots;
  std::optional<double> abs_tol;
  std::optional<int> max_depth;
  std::optional<double> root_tol;
  std::optional<double> scan_step;
  std::optional<double> t_max;
  std::optional<std::string> output_dir;
  std::optional<int> workers;
  std::optional<int> curve_points;
  std::optional<double> curve_t_end;
  std::optional<std::string> n_list;
  std::optional<std::int64_t> trial;
  std::optional<std::string> graph_mode;
  std::optional<int> max_retries;
};

/// Environment variable consulted when --workers is absent.
inline constexpr const char* kWorkersEnv = "CASCADE_CLT_WORKERS";

/// Merges defaults < config file < flags. Workers: flag, else the env value
/// (pass nullptr when unset), else available parallelism. Collects every
/// problem and throws ConfigError listing them. The distribution is
/// required unless require_distribution is false.
RunConfig parse_config(const std::optional<std::filesystem::path>& file, const Overrides& flags,
                       const char* env_workers, bool require_distribution = true);

/// "1000,10000" -> {1000, 10000}; throws ConfigError.
std::vector<std::int64_t> parse_n_list(const std::string& text);

int available_parallelism();

}  // namespace cclt::config
