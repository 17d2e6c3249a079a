#include "isl/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <ostream>
#include <thread>

#include "isl/baselines.hpp"
#include "format.hpp"

namespace isl {

namespace fs = std::filesystem;

const char* const kRunCsvHeader =
    "optimizer,problem,seed,generation,cumulative_steps,best_fitness,"
    "test_fitness_mean,test_fitness_std,wall_time_s,best_style";

const char* const kAggregateCsvHeader =
    "generation,num_runs,cumulative_steps_mean,best_fitness_mean,"
    "best_fitness_std,test_fitness_mean,test_fitness_std,wall_time_s_mean";

void write_run_csv(std::ostream& out, const std::string& optimizer,
                   const std::string& problem, std::uint64_t seed,
                   const RunReport& report, bool timing) {
  out << kRunCsvHeader << '\n';
  for (const GenerationRecord& rec : report.records) {
    out << optimizer << ',' << problem << ',' << seed << ','
        << rec.generation << ',' << rec.cumulative_steps << ','
        << detail::g17(rec.best_fitness) << ','
        << detail::g17(rec.test_fitness_mean) << ','
        << detail::g17(rec.test_fitness_std) << ','
        << detail::g17(timing ? rec.wall_time_s : 0.0) << ','
        << rec.best_style << '\n';
  }
}

void write_aggregate_csv(std::ostream& out,
                         const std::vector<const RunReport*>& reports,
                         bool timing) {
  out << kAggregateCsvHeader << '\n';
  std::size_t max_gens = 0;
  for (const RunReport* r : reports)
    max_gens = std::max(max_gens, r->records.size());

  for (std::size_t g = 0; g < max_gens; ++g) {
    std::vector<const GenerationRecord*> rows;
    for (const RunReport* r : reports)
      if (g < r->records.size()) rows.push_back(&r->records[g]);
    const double n = static_cast<double>(rows.size());

    double steps = 0, best = 0, best_sq = 0, test = 0, test_sq = 0, wall = 0;
    for (const GenerationRecord* rec : rows) {
      steps += static_cast<double>(rec->cumulative_steps);
      best += rec->best_fitness;
      best_sq += rec->best_fitness * rec->best_fitness;
      test += rec->test_fitness_mean;
      test_sq += rec->test_fitness_mean * rec->test_fitness_mean;
      wall += timing ? rec->wall_time_s : 0.0;
    }
    const double best_mean = best / n;
    const double test_mean = test / n;
    const double best_std =
        std::sqrt(std::max(0.0, best_sq / n - best_mean * best_mean));
    const double test_std =
        std::sqrt(std::max(0.0, test_sq / n - test_mean * test_mean));
    out << g << ',' << rows.size() << ',' << detail::g17(steps / n) << ','
        << detail::g17(best_mean) << ',' << detail::g17(best_std) << ','
        << detail::g17(test_mean) << ',' << detail::g17(test_std) << ','
        << detail::g17(wall / n) << '\n';
  }
}

namespace {

RunReport dispatch_run(const ExperimentConfig& cfg, const RunConfig& rc,
                       const Problem& problem) {
  if (cfg.optimizer == "isl") return run(rc, problem);
  if (cfg.optimizer == "ga") return ga_run(rc, cfg.ga, problem);
  return random_search_run(rc, problem);
}

StoredPolicy stored_best(const Problem& problem, const RunConfig& rc,
                         const RunReport& report) {
  StoredPolicy sp;
  sp.params = report.best.params;
  if (problem.direct()) {
    sp.direct = true;
    sp.dim = problem.direct_dim;
  } else {
    sp.spec = rc.policy;
  }
  return sp;
}

} // namespace

ExperimentSummary run_experiment(const ExperimentConfig& cfg,
                                 std::ostream& log) {
  cfg.validate();
  const Problem problem = cfg.resolved_problem();
  const fs::path dir(cfg.out_dir);
  fs::create_directories(dir);
  save_config_file(cfg, (dir / "config.txt").string());

  const auto batch_start = std::chrono::steady_clock::now();
  ExperimentSummary summary;
  summary.runs.resize(static_cast<std::size_t>(cfg.num_seeds));

  auto execute = [&](std::size_t i, int workers) {
    RunOutcome& oc = summary.runs[i];
    oc.seed = cfg.seed + i;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      RunConfig rc = cfg.resolved_run(oc.seed);
      rc.workers = workers;
      if (cfg.debug_trace) rc.eval.trace = &std::cerr;
      oc.report = dispatch_run(cfg, rc, problem);
      oc.ok = true;
    } catch (const std::exception& e) {
      oc.error = e.what();
    }
    oc.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
  };

  if (cfg.parallel_runs && cfg.num_seeds > 1) {
    const int lanes = std::min(cfg.num_seeds, std::max(1, cfg.run.workers));
    const int per_run = std::max(1, cfg.run.workers / lanes);
    std::vector<std::thread> threads;
    std::atomic<std::size_t> next{0};
    for (int l = 0; l < lanes; ++l)
      threads.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < summary.runs.size();
             i = next.fetch_add(1))
          execute(i, per_run);
      });
    for (auto& t : threads) t.join();
  } else {
    for (std::size_t i = 0; i < summary.runs.size(); ++i)
      execute(i, cfg.run.workers);
  }

  std::vector<const RunReport*> ok_reports;
  std::vector<double> best_tests;
  for (const RunOutcome& oc : summary.runs) {
    if (!oc.ok) {
      ++summary.failed;
      log << "seed " << oc.seed << ": FAILED: " << oc.error << '\n';
      continue;
    }
    const RunConfig rc = cfg.resolved_run(oc.seed);
    {
      std::ofstream out(dir / ("run_seed" + std::to_string(oc.seed) + ".csv"));
      write_run_csv(out, cfg.optimizer, cfg.problem, oc.seed, oc.report,
                    cfg.timing);
    }
    save_params_file(
        stored_best(problem, rc, oc.report),
        (dir / ("best_seed" + std::to_string(oc.seed) + ".params")).string());
    ok_reports.push_back(&oc.report);
    best_tests.push_back(oc.report.best.test_fitness);
    log << "seed " << oc.seed << ": best test_fitness "
        << oc.report.best.test_fitness << " over "
        << oc.report.records.size() << " generations, "
        << oc.report.total_steps << " steps (" << oc.wall_time_s << " s)\n";
  }

  if (!ok_reports.empty()) {
    std::ofstream out(dir / "aggregate.csv");
    write_aggregate_csv(out, ok_reports, cfg.timing);
    const double n = static_cast<double>(best_tests.size());
    double sum = 0, sum_sq = 0;
    for (double v : best_tests) {
      sum += v;
      sum_sq += v * v;
    }
    summary.best_test_mean = sum / n;
    summary.best_test_std = std::sqrt(
        std::max(0.0, sum_sq / n - summary.best_test_mean * summary.best_test_mean));
  }
  summary.total_wall_s = std::chrono::duration<double>(
                             std::chrono::steady_clock::now() - batch_start)
                             .count();

  log << "optimizer=" << cfg.optimizer << " problem=" << cfg.problem
      << " runs=" << (cfg.num_seeds - summary.failed) << '/' << cfg.num_seeds
      << " best_test_fitness=" << summary.best_test_mean << " +- "
      << summary.best_test_std << " wall_s=" << summary.total_wall_s << '\n';
  return summary;
}

ReplayResult replay(const StoredPolicy& stored, const std::string& problem_name,
                    const ProblemOptions& opts, int episodes,
                    std::uint64_t seed, const EvalOptions& eval) {
  if (episodes < 1)
    throw std::invalid_argument("replay: episodes must be >= 1");
  ProblemOptions local = opts;
  if (stored.direct) local.direct_dim = stored.dim;
  const Problem problem = make_problem(problem_name, local);

  if (stored.direct != problem.direct())
    throw std::invalid_argument(
        stored.direct
            ? "replay: params file holds a raw vector but '" + problem_name +
                  "' is an environment"
            : "replay: params file holds a policy but '" + problem_name +
                  "' is a direct objective");
  if (!problem.direct()) {
    const EnvSpec& es = problem.prototype->spec();
    if (stored.spec.obs_dim != es.obs_dim || stored.spec.act_dim != es.act_dim)
      throw std::invalid_argument(
          "replay: stored policy dimensions (obs " +
          std::to_string(stored.spec.obs_dim) + ", act " +
          std::to_string(stored.spec.act_dim) + ") do not match '" +
          problem_name + "' (obs " + std::to_string(es.obs_dim) + ", act " +
          std::to_string(es.act_dim) + ")");
  }

  ReplayResult result;
  result.fitness.reserve(static_cast<std::size_t>(episodes));
  double sum = 0;
  for (int k = 0; k < episodes; ++k) {
    const std::uint64_t env_seed = seed + static_cast<std::uint64_t>(k);
    Rng policy_rng = make_stream(env_seed, {stream::test});
    const EpisodeResult er = evaluate_episode(problem, stored.spec,
                                              stored.params, env_seed,
                                              policy_rng, eval);
    result.fitness.push_back(er.fitness);
    sum += er.fitness;
  }
  result.mean = sum / static_cast<double>(episodes);
  return result;
}

} // namespace isl
