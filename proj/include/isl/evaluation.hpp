#pragma once

#include "isl/policy.hpp"
#include "isl/problems.hpp"
#include "isl/rng.hpp"
#include "isl/types.hpp"

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace isl {

struct EpisodeResult {
  double fitness = 0.0; // undiscounted return; -inf marks an aborted episode
  std::uint64_t steps = 0;
};

struct EvalOptions {
  bool deterministic = false; // act with the distribution mean, no sampling
  std::ostream* trace = nullptr; // per-step CSV trace: step,obs,action,reward

  bool operator==(const EvalOptions&) const = default;
};

// Roll one episode with an explicit environment seed. Policy noise comes
// from policy_rng; a non-finite reward aborts the episode with a -inf
// fitness sentinel. Direct problems evaluate the flat vector in one step.
EpisodeResult evaluate_episode(const Problem& problem, const PolicySpec& spec,
                               const ParameterSet& params,
                               std::uint64_t env_seed, Rng& policy_rng,
                               const EvalOptions& opts = {});

// Same, with the environment seed drawn from rng first.
EpisodeResult evaluate(const Problem& problem, const PolicySpec& spec,
                       const ParameterSet& params, Rng& rng,
                       const EvalOptions& opts = {});

struct TestStats {
  double mean = 0.0;
  double stddev = 0.0; // population standard deviation; 0 for one episode
};

// Re-test an agent over test_num episodes seeded seed_base + k. These
// episodes never count toward an optimizer's step budget.
TestStats test_statistics(const Problem& problem, const PolicySpec& spec,
                          const ParameterSet& params, int test_num,
                          std::uint64_t seed_base, const EvalOptions& opts = {});

double test_average(const Problem& problem, const PolicySpec& spec,
                    const ParameterSet& params, int test_num,
                    std::uint64_t seed_base, const EvalOptions& opts = {});

// Evaluate every agent, fanning out across up to `workers` threads. Agent i
// draws from a stream derived from (root_seed, i), so the result list is a
// pure function of the inputs regardless of worker count. A throwing agent
// yields the -inf sentinel in its own slot.
std::vector<EpisodeResult> evaluate_population(
    const Problem& problem, const PolicySpec& spec,
    const std::vector<ParameterSet>& population, std::uint64_t root_seed,
    int workers, const EvalOptions& opts = {});

} // namespace isl
