#pragma once

// Internal generation loop shared by the main optimizer and the baselines,
// so budget accounting, re-testing, and reporting are identical across them.

#include "isl/optimizer.hpp"

#include <functional>

namespace isl::detail {

struct LoopHooks {
  // Produce generation g's population and label each agent's origin style.
  std::function<std::vector<ParameterSet>(
      int g, const std::vector<ArchiveEntry>& archive,
      std::uint64_t steps_so_far, std::vector<char>& styles)>
      next_population;
  // Optional look at the evaluated generation (baselines keep parents here).
  std::function<void(const std::vector<ParameterSet>& population,
                     const std::vector<EpisodeResult>& results)>
      observe;
};

RunReport run_loop(const RunConfig& cfg, const Problem& problem,
                   const LoopHooks& hooks);

} // namespace isl::detail
