#include "isl/evaluation.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <thread>

namespace isl {

namespace {

constexpr double kFailure = -std::numeric_limits<double>::infinity();

void trace_step(std::ostream& os, std::uint64_t t, const Vector& obs,
                const Vector& action, double reward) {
  os << t << ',';
  for (Index i = 0; i < obs.size(); ++i) os << (i ? ";" : "") << obs(i);
  os << ',';
  for (Index i = 0; i < action.size(); ++i) os << (i ? ";" : "") << action(i);
  os << ',' << reward << '\n';
}

} // namespace

EpisodeResult evaluate_episode(const Problem& problem, const PolicySpec& spec,
                               const ParameterSet& params,
                               std::uint64_t env_seed, Rng& policy_rng,
                               const EvalOptions& opts) {
  EpisodeResult out;
  if (problem.direct()) {
    const Vector x = flatten(params);
    if (x.size() != problem.direct_dim)
      throw std::invalid_argument(
          "evaluate_episode: parameter count does not match problem dimension");
    out.fitness = problem.objective(x);
    out.steps = 1;
    if (!std::isfinite(out.fitness)) out.fitness = kFailure;
    return out;
  }

  std::unique_ptr<Env> env = problem.prototype->clone();
  const EnvSpec& es = env->spec();
  Vector obs = env->reset(env_seed);
  if (opts.trace) *opts.trace << "# reset seed=" << env_seed << '\n';

  while (true) {
    const ActionDistribution dist = forward(spec, params, obs);
    const Vector action =
        opts.deterministic
            ? mean_action(dist, es.action_low, es.action_high)
            : sample_action(dist, es.action_low, es.action_high, policy_rng);
    const StepResult sr = env->step(action);
    ++out.steps;
    if (opts.trace) trace_step(*opts.trace, out.steps, obs, action, sr.reward);
    if (!std::isfinite(sr.reward)) {
      out.fitness = kFailure;
      return out;
    }
    out.fitness += sr.reward;
    // The counter guard keeps the step invariant even if an environment
    // forgets to raise done at its own cap.
    if (sr.done || out.steps >= static_cast<std::uint64_t>(es.episode_cap))
      return out;
    obs = sr.obs;
  }
}

EpisodeResult evaluate(const Problem& problem, const PolicySpec& spec,
                       const ParameterSet& params, Rng& rng,
                       const EvalOptions& opts) {
  const std::uint64_t env_seed = rng();
  return evaluate_episode(problem, spec, params, env_seed, rng, opts);
}

TestStats test_statistics(const Problem& problem, const PolicySpec& spec,
                          const ParameterSet& params, int test_num,
                          std::uint64_t seed_base, const EvalOptions& opts) {
  if (test_num < 1)
    throw std::invalid_argument("test_statistics: test_num must be >= 1");
  Vector fitness(test_num);
  for (int k = 0; k < test_num; ++k) {
    const std::uint64_t env_seed = seed_base + static_cast<std::uint64_t>(k);
    Rng policy_rng = make_stream(env_seed, {stream::test});
    fitness(k) = evaluate_episode(problem, spec, params, env_seed, policy_rng,
                                  opts)
                     .fitness;
  }
  TestStats stats;
  stats.mean = fitness.mean();
  stats.stddev = std::sqrt((fitness.array() - stats.mean).square().mean());
  return stats;
}

double test_average(const Problem& problem, const PolicySpec& spec,
                    const ParameterSet& params, int test_num,
                    std::uint64_t seed_base, const EvalOptions& opts) {
  return test_statistics(problem, spec, params, test_num, seed_base, opts).mean;
}

std::vector<EpisodeResult> evaluate_population(
    const Problem& problem, const PolicySpec& spec,
    const std::vector<ParameterSet>& population, std::uint64_t root_seed,
    int workers, const EvalOptions& opts) {
  if (population.empty())
    throw std::invalid_argument("evaluate_population: empty population");
  if (workers < 1)
    throw std::invalid_argument("evaluate_population: workers must be >= 1");

  const std::size_t n = population.size();
  std::vector<EpisodeResult> results(n);
  auto eval_slot = [&](std::size_t i) {
    Rng rng = make_stream(root_seed, {static_cast<std::uint64_t>(i)});
    try {
      results[i] = evaluate(problem, spec, population[i], rng, opts);
    } catch (const std::exception&) {
      results[i] = {kFailure, 1};
    }
  };

  // A trace stream is not synchronized, so tracing forces serial order.
  const std::size_t pool =
      opts.trace ? 1
                 : std::min<std::size_t>(static_cast<std::size_t>(workers), n);
  if (pool <= 1) {
    for (std::size_t i = 0; i < n; ++i) eval_slot(i);
    return results;
  }

  std::atomic<std::size_t> next{0};
  std::vector<std::thread> threads;
  threads.reserve(pool);
  for (std::size_t w = 0; w < pool; ++w) {
    threads.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1))
        eval_slot(i);
    });
  }
  for (auto& t : threads) t.join();
  return results;
}

} // namespace isl
