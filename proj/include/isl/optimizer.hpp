#pragma once

#include "isl/evaluation.hpp"
#include "isl/policy.hpp"
#include "isl/problems.hpp"
#include "isl/styles.hpp"
#include "isl/types.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace isl {

struct RunConfig {
  int pop_learn = 5;    // cohort stepping away from the best via heavy tails
  int pop_imitate = 3;  // cohort perturbing the best multiplicatively
  int pop_selfstudy = 2; // cohort resampling the best's per-layer statistics
  int sampling_num = 3; // leading generations of fresh Normal(0,1) agents
  int test_num = 5;     // budget-free re-test episodes per generation
  std::uint64_t max_step = 100000;
  std::uint64_t seed = 0;
  int workers = 1;
  double alpha_min = 0.01;
  double alpha_max = 0.1;
  PolicySpec policy; // ignored by direct problems
  StyleConfig style;
  EvalOptions eval;

  int pop_num() const { return pop_learn + pop_imitate + pop_selfstudy; }
  void validate() const;

  bool operator==(const RunConfig&) const = default;
};

struct ArchiveEntry {
  ParameterSet params;
  double test_fitness = 0.0;
  int generation = 0;
};

struct GenerationRecord {
  int generation = 0;
  std::uint64_t cumulative_steps = 0; // training steps only, end of generation
  double best_fitness = 0.0;          // raw fitness of the generation's best
  double test_fitness_mean = 0.0;     // re-test stats of that agent
  double test_fitness_std = 0.0;
  double wall_time_s = 0.0;
  char best_style = '-'; // S sampled, A learn, B imitate, C selfstudy
};

struct RunReport {
  std::vector<GenerationRecord> records;
  std::vector<ArchiveEntry> archive; // one entry per non-degenerate generation
  ArchiveEntry best;
  std::uint64_t total_steps = 0;
};

// Index of the maximum finite fitness (ties to the lowest index); empty when
// every agent hit the failure sentinel.
std::optional<std::size_t> select_best(const std::vector<double>& fitness);

// Entry with the highest test_fitness; ties resolve to the earliest
// generation. The archive must be non-empty.
const ArchiveEntry& archive_best(const std::vector<ArchiveEntry>& archive);

// The full optimization loop: sampling generations seed the archive, style
// generations draw the three cohorts around the archive best, and the run
// stops once cumulative training steps reach max_step.
RunReport run(const RunConfig& cfg, const Problem& problem);

// Equality up to wall-clock fields, for determinism checks.
bool reports_equal_ignoring_time(const RunReport& a, const RunReport& b);

} // namespace isl
