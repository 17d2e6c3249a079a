#include "isl/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "isl/rng.hpp"
#include "run_loop.hpp"

namespace isl {

void GaConfig::validate() const {
  if (!(elite_frac > 0.0 && elite_frac < 1.0))
    throw std::invalid_argument("GaConfig: elite_frac must be in (0, 1)");
  if (tournament < 2)
    throw std::invalid_argument("GaConfig: tournament must be >= 2");
  if (!(mutation_prob >= 0.0 && mutation_prob <= 1.0))
    throw std::invalid_argument("GaConfig: mutation_prob must be in [0, 1]");
  if (!(mutation_scale >= 0.0))
    throw std::invalid_argument("GaConfig: mutation_scale must be >= 0");
}

RunReport ga_run(const RunConfig& cfg, const GaConfig& ga,
                 const Problem& problem) {
  cfg.validate();
  ga.validate();
  const std::vector<LayerShape> shapes = param_shapes(problem, cfg.policy);
  const std::size_t pop_num = static_cast<std::size_t>(cfg.pop_num());
  const std::size_t elite_n = std::clamp<std::size_t>(
      static_cast<std::size_t>(
          std::llround(ga.elite_frac * static_cast<double>(pop_num))),
      1, pop_num);

  std::vector<ParameterSet> parents;
  std::vector<double> parent_fitness;

  detail::LoopHooks hooks;
  hooks.next_population = [&](int g, const std::vector<ArchiveEntry>&,
                              std::uint64_t, std::vector<char>& styles) {
    styles.assign(pop_num, '-');
    std::vector<ParameterSet> pop;
    pop.reserve(pop_num);
    if (g == 0) {
      Rng rng = make_stream(cfg.seed, {stream::init, 0});
      for (std::size_t i = 0; i < pop_num; ++i)
        pop.push_back(init_params(shapes, rng));
      return pop;
    }

    // Rank parents best-first; stable so fitness ties keep the lower index.
    std::vector<std::size_t> order(parents.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return parent_fitness[a] > parent_fitness[b];
    });

    for (std::size_t i = 0; i < elite_n; ++i) pop.push_back(parents[order[i]]);

    std::uniform_int_distribution<std::size_t> pick(0, parents.size() - 1);
    for (std::size_t i = elite_n; i < pop_num; ++i) {
      Rng rng = make_stream(cfg.seed, {stream::style,
                                       static_cast<std::uint64_t>(g),
                                       static_cast<std::uint64_t>(i)});
      std::size_t winner = pick(rng);
      for (int t = 1; t < ga.tournament; ++t) {
        const std::size_t challenger = pick(rng);
        if (parent_fitness[challenger] > parent_fitness[winner])
          winner = challenger;
      }
      Vector genes = flatten(parents[winner]);
      if (ga.mutation_scale > 0.0) {
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        std::normal_distribution<double> nudge(0.0, ga.mutation_scale);
        for (Index k = 0; k < genes.size(); ++k)
          if (unit(rng) < ga.mutation_prob) genes(k) += nudge(rng);
      }
      pop.push_back(unflatten_like(parents[winner], genes));
    }
    return pop;
  };
  hooks.observe = [&](const std::vector<ParameterSet>& population,
                      const std::vector<EpisodeResult>& results) {
    parents = population;
    parent_fitness.resize(results.size());
    for (std::size_t i = 0; i < results.size(); ++i)
      parent_fitness[i] = results[i].fitness;
  };

  return detail::run_loop(cfg, problem, hooks);
}

RunReport random_search_run(const RunConfig& cfg, const Problem& problem) {
  cfg.validate();
  const std::vector<LayerShape> shapes = param_shapes(problem, cfg.policy);
  const std::size_t pop_num = static_cast<std::size_t>(cfg.pop_num());

  detail::LoopHooks hooks;
  hooks.next_population = [&](int g, const std::vector<ArchiveEntry>&,
                              std::uint64_t, std::vector<char>& styles) {
    styles.assign(pop_num, '-');
    Rng rng =
        make_stream(cfg.seed, {stream::init, static_cast<std::uint64_t>(g)});
    std::vector<ParameterSet> pop;
    pop.reserve(pop_num);
    for (std::size_t i = 0; i < pop_num; ++i)
      pop.push_back(init_params(shapes, rng));
    return pop;
  };

  return detail::run_loop(cfg, problem, hooks);
}

} // namespace isl
