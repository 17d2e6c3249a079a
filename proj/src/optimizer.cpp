#include "isl/optimizer.hpp"

#include <chrono>
#include <cmath>
#include <iostream>
#include <limits>
#include <stdexcept>

#include "isl/levy.hpp"
#include "isl/rng.hpp"
#include "run_loop.hpp"

namespace isl {

void RunConfig::validate() const {
  if (pop_learn < 1 || pop_imitate < 1 || pop_selfstudy < 1)
    throw std::invalid_argument("RunConfig: every cohort needs at least one agent");
  if (sampling_num < 1)
    throw std::invalid_argument("RunConfig: sampling_num must be >= 1");
  if (test_num < 1)
    throw std::invalid_argument("RunConfig: test_num must be >= 1");
  if (max_step < 1)
    throw std::invalid_argument("RunConfig: max_step must be >= 1");
  if (workers < 1)
    throw std::invalid_argument("RunConfig: workers must be >= 1");
  if (!(alpha_min > 0.0 && alpha_min <= alpha_max))
    throw std::invalid_argument("RunConfig: need 0 < alpha_min <= alpha_max");
  policy.validate();
  style.validate();
}

std::optional<std::size_t> select_best(const std::vector<double>& fitness) {
  if (fitness.empty())
    throw std::invalid_argument("select_best: empty fitness list");
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < fitness.size(); ++i) {
    if (!std::isfinite(fitness[i])) continue;
    if (!best || fitness[i] > fitness[*best]) best = i;
  }
  return best;
}

const ArchiveEntry& archive_best(const std::vector<ArchiveEntry>& archive) {
  if (archive.empty())
    throw std::invalid_argument("archive_best: empty archive");
  std::size_t best = 0;
  for (std::size_t i = 1; i < archive.size(); ++i)
    if (archive[i].test_fitness > archive[best].test_fitness) best = i;
  return archive[best];
}

namespace detail {

RunReport run_loop(const RunConfig& cfg, const Problem& problem,
                   const LoopHooks& hooks) {
  cfg.validate();
  constexpr double kFailure = -std::numeric_limits<double>::infinity();

  RunReport report;
  std::uint64_t cumulative = 0;
  int g = 0;
  while (true) {
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<char> styles;
    std::vector<ParameterSet> pop =
        hooks.next_population(g, report.archive, cumulative, styles);

    const std::vector<EpisodeResult> results = evaluate_population(
        problem, cfg.policy, pop,
        derive_seed(cfg.seed, {stream::eval, static_cast<std::uint64_t>(g)}),
        cfg.workers, cfg.eval);
    std::vector<double> fitness(results.size());
    for (std::size_t i = 0; i < results.size(); ++i) {
      cumulative += results[i].steps;
      fitness[i] = results[i].fitness;
    }

    GenerationRecord rec;
    rec.generation = g;
    rec.cumulative_steps = cumulative;
    if (const auto best = select_best(fitness)) {
      const std::size_t i = *best;
      const TestStats stats = test_statistics(
          problem, cfg.policy, pop[i], cfg.test_num,
          derive_seed(cfg.seed, {stream::test, static_cast<std::uint64_t>(g)}),
          cfg.eval);
      report.archive.push_back({pop[i], stats.mean, g});
      rec.best_fitness = results[i].fitness;
      rec.test_fitness_mean = stats.mean;
      rec.test_fitness_std = stats.stddev;
      rec.best_style = i < styles.size() ? styles[i] : '-';
    } else {
      // Every agent failed; keep reporting against the previous elite and
      // never archive sentinels.
      std::cerr << "warning: generation " << g
                << " produced no finite fitness\n";
      rec.best_fitness = kFailure;
      rec.test_fitness_mean =
          report.archive.empty() ? kFailure
                                 : archive_best(report.archive).test_fitness;
      rec.test_fitness_std = 0.0;
    }
    rec.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    report.records.push_back(rec);
    if (hooks.observe) hooks.observe(pop, results);

    ++g;
    if (cumulative >= cfg.max_step) break;
  }

  if (report.records.size() == 1 && cumulative > cfg.max_step)
    std::cerr << "warning: step budget is smaller than one generation; "
                 "ran a single generation\n";
  if (report.archive.empty())
    throw std::runtime_error("run: every generation failed, nothing archived");
  report.best = archive_best(report.archive);
  report.total_steps = cumulative;
  return report;
}

} // namespace detail

RunReport run(const RunConfig& cfg, const Problem& problem) {
  cfg.validate();
  const std::vector<LayerShape> shapes = param_shapes(problem, cfg.policy);
  const AlphaSchedule schedule{cfg.alpha_min, cfg.alpha_max, cfg.max_step};
  schedule.validate();

  std::vector<ParameterSet> learners; // cohort A state, persists across gens

  detail::LoopHooks hooks;
  hooks.next_population = [&](int g, const std::vector<ArchiveEntry>& archive,
                              std::uint64_t steps_so_far,
                              std::vector<char>& styles) {
    const std::size_t pop_num = static_cast<std::size_t>(cfg.pop_num());
    std::vector<ParameterSet> pop;
    pop.reserve(pop_num);

    if (g < cfg.sampling_num) {
      Rng rng = make_stream(cfg.seed,
                            {stream::init, static_cast<std::uint64_t>(g)});
      for (std::size_t i = 0; i < pop_num; ++i)
        pop.push_back(init_params(shapes, rng));
      styles.assign(pop_num, 'S');
    } else {
      if (archive.empty())
        throw std::runtime_error("run: sampling phase archived nothing");
      const ParameterSet& best = archive_best(archive).params;
      const BestBounds interval = clamp_interval(
          bounds_of(best), cfg.style.clamp_factor, cfg.style.clamp_rule);
      const double alpha = alpha_at(schedule, steps_so_far);

      styles.clear();
      auto agent_rng = [&](std::size_t i) {
        return make_stream(cfg.seed, {stream::style,
                                      static_cast<std::uint64_t>(g),
                                      static_cast<std::uint64_t>(i)});
      };
      for (int i = 0; i < cfg.pop_learn; ++i) {
        Rng rng = agent_rng(pop.size());
        ParameterSet cand = learn_update(
            learners[static_cast<std::size_t>(i)], best, alpha,
            cfg.style.levy, rng);
        clamp_params(cand, interval);
        pop.push_back(std::move(cand));
        styles.push_back('A');
      }
      for (int j = 0; j < cfg.pop_imitate; ++j) {
        Rng rng = agent_rng(pop.size());
        ParameterSet cand = imitate_update(best, cfg.style, rng);
        clamp_params(cand, interval);
        pop.push_back(std::move(cand));
        styles.push_back('B');
      }
      for (int k = 0; k < cfg.pop_selfstudy; ++k) {
        Rng rng = agent_rng(pop.size());
        ParameterSet cand = selfstudy_update(best, rng);
        clamp_params(cand, interval);
        pop.push_back(std::move(cand));
        styles.push_back('C');
      }
    }

    // Cohort A carries its position into the next generation; during the
    // sampling phase it tracks the most recent sampled agents.
    learners.assign(pop.begin(), pop.begin() + cfg.pop_learn);
    return pop;
  };

  return detail::run_loop(cfg, problem, hooks);
}

bool reports_equal_ignoring_time(const RunReport& a, const RunReport& b) {
  auto params_equal = [](const ParameterSet& x, const ParameterSet& y) {
    if (x.layers.size() != y.layers.size()) return false;
    const Vector fx = flatten(x);
    const Vector fy = flatten(y);
    return fx.size() == fy.size() && (fx.array() == fy.array()).all();
  };
  auto entries_equal = [&](const ArchiveEntry& x, const ArchiveEntry& y) {
    return x.generation == y.generation && x.test_fitness == y.test_fitness &&
           params_equal(x.params, y.params);
  };

  if (a.total_steps != b.total_steps) return false;
  if (a.records.size() != b.records.size()) return false;
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    const GenerationRecord& x = a.records[i];
    const GenerationRecord& y = b.records[i];
    if (x.generation != y.generation ||
        x.cumulative_steps != y.cumulative_steps ||
        x.best_fitness != y.best_fitness ||
        x.test_fitness_mean != y.test_fitness_mean ||
        x.test_fitness_std != y.test_fitness_std ||
        x.best_style != y.best_style)
      return false;
  }
  if (a.archive.size() != b.archive.size()) return false;
  for (std::size_t i = 0; i < a.archive.size(); ++i)
    if (!entries_equal(a.archive[i], b.archive[i])) return false;
  return entries_equal(a.best, b.best);
}

} // namespace isl
