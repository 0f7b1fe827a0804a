#include <atomic>
#include <exception>
#include <string>

#include "cclt/mc.hpp"

namespace cclt::mc {

std::vector<TrialRecord> run_trials(const BatchSpec& spec, int workers) {
  if (spec.trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (workers < 1) throw std::invalid_argument("workers must be >= 1");
  std::vector<TrialRecord> out(static_cast<std::size_t>(spec.trials));
  std::vector<std::string> errors(out.size());
  // Lowest failing index so far. Trials above it are skipped; trials below
  // still run, so the reported failure matches the serial reference.
  std::atomic<std::int64_t> first_failure{spec.trials};

#pragma omp parallel for schedule(dynamic) num_threads(workers)
  for (std::int64_t k = 0; k < spec.trials; ++k) {
    if (k > first_failure.load(std::memory_order_relaxed)) continue;
    const auto slot = static_cast<std::size_t>(k);
    try {
      out[slot] = run_trial(spec.dist, spec.n, k, spec.root_seed, spec.eval_time);
    } catch (const std::exception& e) {
      errors[slot] = e.what();
      std::int64_t seen = first_failure.load();
      while (k < seen && !first_failure.compare_exchange_weak(seen, k)) {
      }
    }
  }

  const std::int64_t failed = first_failure.load();
  if (failed < spec.trials) throw TrialError(failed, errors[static_cast<std::size_t>(failed)]);
  return out;
}

}  // namespace cclt::mc
