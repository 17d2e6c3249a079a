#pragma once

#include "isl/baselines.hpp"
#include "isl/optimizer.hpp"
#include "isl/problems.hpp"

#include <iosfwd>
#include <stdexcept>
#include <string>

namespace isl {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One experiment: an optimizer, a problem, and a batch of seeded runs.
// Loaded from a flat key = value file; unknown keys are rejected.
struct ExperimentConfig {
  std::string optimizer; // isl | ga | random
  std::string problem;
  Index problem_dim = 10; // direct problems only; ignored for environments
  int num_seeds = 5;
  std::uint64_t seed = 0;
  std::string out_dir = "results";
  bool timing = false;        // write real wall times into the CSVs
  bool parallel_runs = false; // run seeds concurrently, splitting the workers
  bool debug_trace = false;   // stream per-step traces during evaluation
  int pop_num = 10;
  RunConfig run;
  GaConfig ga;
  PickPlaceConfig pickplace;

  void validate() const;
  Problem resolved_problem() const;
  // Per-seed run config with policy dimensions filled in from the problem.
  RunConfig resolved_run(std::uint64_t run_seed) const;

  bool operator==(const ExperimentConfig&) const = default;
};

ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config(std::istream& in, const std::string& origin);
void save_config(const ExperimentConfig& cfg, std::ostream& out);
void save_config_file(const ExperimentConfig& cfg, const std::string& path);

} // namespace isl
