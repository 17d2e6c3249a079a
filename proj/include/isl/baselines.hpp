#pragma once

#include "isl/optimizer.hpp"

namespace isl {

struct GaConfig {
  double elite_frac = 0.2;     // top fraction copied unchanged
  int tournament = 3;          // parents drawn per selection, with replacement
  double mutation_prob = 0.9;  // per-gene chance of a Gaussian nudge
  double mutation_scale = 0.1; // standard deviation of that nudge

  void validate() const;

  bool operator==(const GaConfig&) const = default;
};

// Generational GA over flattened parameter sets: elitism, tournament
// selection, Gaussian mutation, no crossover. Shares the evaluation path
// and report shape with the main optimizer so budgets are comparable.
RunReport ga_run(const RunConfig& cfg, const GaConfig& ga,
                 const Problem& problem);

// Control baseline: every generation is a fresh batch of Normal(0,1)
// parameter sets; the archive keeps the best seen.
RunReport random_search_run(const RunConfig& cfg, const Problem& problem);

} // namespace isl
