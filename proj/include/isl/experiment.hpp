#pragma once

#include "isl/config.hpp"
#include "isl/params_io.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace isl {

struct RunOutcome {
  std::uint64_t seed = 0;
  bool ok = false;
  std::string error; // set when !ok
  RunReport report;  // valid when ok
  double wall_time_s = 0.0;
};

struct ExperimentSummary {
  std::vector<RunOutcome> runs;
  int failed = 0;
  double best_test_mean = 0.0; // across-seed stats of per-run best test_fitness
  double best_test_std = 0.0;
  double total_wall_s = 0.0;
};

// CSV schemas, exposed so tests can pin them.
extern const char* const kRunCsvHeader;
extern const char* const kAggregateCsvHeader;

void write_run_csv(std::ostream& out, const std::string& optimizer,
                   const std::string& problem, std::uint64_t seed,
                   const RunReport& report, bool timing);
void write_aggregate_csv(std::ostream& out,
                         const std::vector<const RunReport*>& reports,
                         bool timing);

// Execute the seeded batch: one run per seed (seed + 0 .. seed + n - 1),
// writing config.txt, run_seed<seed>.csv, best_seed<seed>.params, and
// aggregate.csv under out_dir. Per-run failures are recorded and the batch
// continues. Progress and the final table go to `log`.
ExperimentSummary run_experiment(const ExperimentConfig& cfg,
                                 std::ostream& log);

struct ReplayResult {
  std::vector<double> fitness;
  double mean = 0.0;
};

// Roll a stored controller for a number of episodes (seeds seed + k) and
// report each episode's fitness. Dimensions are checked against the problem.
ReplayResult replay(const StoredPolicy& stored, const std::string& problem_name,
                    const ProblemOptions& opts, int episodes,
                    std::uint64_t seed, const EvalOptions& eval = {});

} // namespace isl
