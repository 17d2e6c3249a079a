#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "isl/config.hpp"
#include "isl/experiment.hpp"
#include "isl/params_io.hpp"
#include "isl/problems.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 1;
constexpr int kRuntimeError = 2;

struct RunArgs {
  std::string config_path;
  std::uint64_t seed = 0;
  int num_seeds = 0;
  int workers = 0;
  std::string out_dir;
  bool deterministic_eval = false;
  bool debug_trace = false;
  bool timing = false;
  bool parallel_runs = false;
};

struct ReplayArgs {
  std::string params_path;
  std::string problem;
  int episodes = 5;
  std::uint64_t seed = 0;
  bool deterministic_eval = false;
  bool debug_trace = false;
};

int do_run(const RunArgs& args, const CLI::App& cmd) {
  isl::ExperimentConfig cfg = isl::load_config(args.config_path);
  if (cmd.count("--seed")) cfg.seed = args.seed;
  if (cmd.count("--num-seeds")) cfg.num_seeds = args.num_seeds;
  if (cmd.count("--workers")) cfg.run.workers = args.workers;
  if (cmd.count("--out")) cfg.out_dir = args.out_dir;
  if (args.deterministic_eval) cfg.run.eval.deterministic = true;
  if (args.debug_trace) cfg.debug_trace = true;
  if (args.timing) cfg.timing = true;
  if (args.parallel_runs) cfg.parallel_runs = true;
  cfg.validate();

  const isl::ExperimentSummary summary = isl::run_experiment(cfg, std::cout);
  return summary.failed == 0 ? kOk : kRuntimeError;
}

int do_replay(const ReplayArgs& args) {
  const isl::StoredPolicy stored = isl::load_params_file(args.params_path);
  isl::EvalOptions eval;
  eval.deterministic = args.deterministic_eval;
  if (args.debug_trace) eval.trace = &std::cerr;

  const isl::ReplayResult result =
      isl::replay(stored, args.problem, {}, args.episodes, args.seed, eval);
  for (std::size_t k = 0; k < result.fitness.size(); ++k)
    std::cout << "episode " << k << ": fitness " << result.fitness[k] << '\n';
  std::cout << "mean fitness " << result.mean << " over "
            << result.fitness.size() << " episodes\n";
  return kOk;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Population-based policy search over desk-scale control tasks"};
  app.require_subcommand(1);

  RunArgs run_args;
  CLI::App* run_cmd = app.add_subcommand("run", "Execute a seeded experiment batch");
  run_cmd->add_option("config", run_args.config_path, "experiment config file")
      ->required();
  run_cmd->add_option("--seed", run_args.seed, "override the base seed");
  run_cmd->add_option("--num-seeds", run_args.num_seeds, "override the run count");
  run_cmd->add_option("--workers", run_args.workers, "override the worker cap");
  run_cmd->add_option("--out", run_args.out_dir, "override the output directory");
  run_cmd->add_flag("--deterministic-eval", run_args.deterministic_eval,
                    "act with distribution means instead of sampling");
  run_cmd->add_flag("--debug-trace", run_args.debug_trace,
                    "stream per-step traces to stderr");
  run_cmd->add_flag("--timing", run_args.timing,
                    "write real wall times into the CSVs");
  run_cmd->add_flag("--parallel-runs", run_args.parallel_runs,
                    "run seeds concurrently, splitting the worker cap");

  ReplayArgs replay_args;
  CLI::App* replay_cmd =
      app.add_subcommand("replay", "Roll out a stored controller");
  replay_cmd->add_option("params", replay_args.params_path, "params file")
      ->required();
  replay_cmd->add_option("problem", replay_args.problem, "problem name")
      ->required();
  replay_cmd->add_option("--episodes", replay_args.episodes, "episode count");
  replay_cmd->add_option("--seed", replay_args.seed, "base episode seed");
  replay_cmd->add_flag("--deterministic-eval", replay_args.deterministic_eval,
                       "act with distribution means instead of sampling");
  replay_cmd->add_flag("--debug-trace", replay_args.debug_trace,
                       "stream per-step traces to stderr");

  std::string validate_path;
  CLI::App* validate_cmd =
      app.add_subcommand("validate", "Check a config file and exit");
  validate_cmd->add_option("config", validate_path, "experiment config file")
      ->required();

  CLI::App* list_cmd =
      app.add_subcommand("list-problems", "Print the available problem names");

  CLI11_PARSE(app, argc, argv);

  try {
    if (list_cmd->parsed()) {
      for (const std::string& name : isl::problem_names())
        std::cout << name << '\n';
      return kOk;
    }
    if (validate_cmd->parsed()) {
      const isl::ExperimentConfig cfg = isl::load_config(validate_path);
      cfg.resolved_problem(); // exercises problem construction too
      std::cout << "ok: " << validate_path << '\n';
      return kOk;
    }
    if (run_cmd->parsed()) return do_run(run_args, *run_cmd);
    if (replay_cmd->parsed()) return do_replay(replay_args);
  } catch (const isl::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
  return kOk;
}
