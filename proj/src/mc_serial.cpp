#include "cclt/mc.hpp"

namespace cclt::mc {

std::vector<TrialRecord> run_trials_serial(const BatchSpec& spec) {
  if (spec.trials < 1) throw std::invalid_argument("trials must be >= 1");
  std::vector<TrialRecord> out;
  out.reserve(static_cast<std::size_t>(spec.trials));
  for (std::int64_t k = 0; k < spec.trials; ++k) {
    try {
      out.push_back(run_trial(spec.dist, spec.n, k, spec.root_seed, spec.eval_time));
    } catch (const std::exception& e) {
      throw TrialError(k, e.what());
    }
  }
  return out;
}

}  // namespace cclt::mc
