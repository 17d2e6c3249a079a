#include "isl/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <ostream>
#include <set>
#include <string_view>

#include "isl/levy.hpp"
#include "format.hpp"

namespace isl {

namespace {

std::string trim(std::string_view s) {
  const auto from = s.find_first_not_of(" \t\r");
  if (from == std::string_view::npos) return {};
  const auto to = s.find_last_not_of(" \t\r");
  return std::string(s.substr(from, to - from + 1));
}

[[noreturn]] void fail(const std::string& where, const std::string& msg) {
  throw ConfigError(where + ": " + msg);
}

template <typename T>
T parse_number(const std::string& where, const std::string& key,
               const std::string& value) {
  T out{};
  const char* begin = value.data();
  const char* end = begin + value.size();
  const auto [ptr, ec] = std::from_chars(begin, end, out);
  if (ec != std::errc{} || ptr != end)
    fail(where, "key '" + key + "' has invalid value '" + value + "'");
  return out;
}

bool parse_bool(const std::string& where, const std::string& key,
                const std::string& value) {
  if (value == "true") return true;
  if (value == "false") return false;
  fail(where, "key '" + key + "' must be true or false, got '" + value + "'");
}

std::vector<std::string> split(const std::string& value, char sep) {
  std::vector<std::string> parts;
  std::size_t from = 0;
  while (true) {
    const std::size_t at = value.find(sep, from);
    parts.push_back(trim(value.substr(from, at - from)));
    if (at == std::string::npos) return parts;
    from = at + 1;
  }
}

std::vector<Index> parse_index_list(const std::string& where,
                                    const std::string& key,
                                    const std::string& value) {
  if (value == "none") return {};
  std::vector<Index> out;
  for (const std::string& part : split(value, ','))
    out.push_back(parse_number<Index>(where, key, part));
  return out;
}

Eigen::Vector3d parse_vec3(const std::string& where, const std::string& key,
                           const std::string& value) {
  const std::vector<std::string> parts = split(value, ',');
  if (parts.size() != 3)
    fail(where, "key '" + key + "' needs three comma-separated values");
  Eigen::Vector3d v;
  for (int i = 0; i < 3; ++i)
    v(i) = parse_number<double>(where, key, parts[static_cast<std::size_t>(i)]);
  return v;
}

std::string fmt(double v) { return detail::g17(v); }

std::string fmt(const Eigen::Vector3d& v) {
  return fmt(v(0)) + "," + fmt(v(1)) + "," + fmt(v(2));
}

std::string fmt(const std::vector<Index>& v) {
  if (v.empty()) return "none";
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i)
    out += (i ? "," : "") + std::to_string(v[i]);
  return out;
}

} // namespace

void ExperimentConfig::validate() const {
  if (optimizer != "isl" && optimizer != "ga" && optimizer != "random")
    throw ConfigError("optimizer must be one of isl, ga, random; got '" +
                      optimizer + "'");
  const auto& names = problem_names();
  if (std::find(names.begin(), names.end(), problem) == names.end())
    throw ConfigError("unknown problem '" + problem + "'");
  if (num_seeds < 1) throw ConfigError("num_seeds must be >= 1");
  if (problem_dim < 1) throw ConfigError("problem_dim must be >= 1");
  if (run.pop_num() != pop_num)
    throw ConfigError(
        "pop_learn + pop_imitate + pop_selfstudy must equal pop_num (" +
        std::to_string(run.pop_num()) + " != " + std::to_string(pop_num) + ")");
  try {
    run.validate();
    ga.validate();
    pickplace.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

Problem ExperimentConfig::resolved_problem() const {
  ProblemOptions opts;
  opts.direct_dim = problem_dim;
  opts.pickplace = pickplace;
  return make_problem(problem, opts);
}

RunConfig ExperimentConfig::resolved_run(std::uint64_t run_seed) const {
  RunConfig r = run;
  r.seed = run_seed;
  const Problem p = resolved_problem();
  if (!p.direct()) {
    r.policy.obs_dim = p.prototype->spec().obs_dim;
    r.policy.act_dim = p.prototype->spec().act_dim;
  }
  return r;
}

ExperimentConfig parse_config(std::istream& in, const std::string& origin) {
  ExperimentConfig cfg;
  double levy_beta = 1.5;
  std::set<std::string> seen;
  std::string line;
  int lineno = 0;

  while (std::getline(in, line)) {
    ++lineno;
    const std::string where = origin + ":" + std::to_string(lineno);
    if (const auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    const std::string text = trim(line);
    if (text.empty()) continue;

    const std::size_t eq = text.find('=');
    if (eq == std::string::npos)
      fail(where, "expected 'key = value', got '" + text + "'");
    const std::string key = trim(text.substr(0, eq));
    const std::string value = trim(text.substr(eq + 1));
    if (key.empty()) fail(where, "empty key");
    if (value.empty()) fail(where, "key '" + key + "' has an empty value");
    if (!seen.insert(key).second) fail(where, "duplicate key '" + key + "'");

    if (key == "optimizer") cfg.optimizer = value;
    else if (key == "problem") cfg.problem = value;
    else if (key == "problem_dim") cfg.problem_dim = parse_number<Index>(where, key, value);
    else if (key == "num_seeds") cfg.num_seeds = parse_number<int>(where, key, value);
    else if (key == "seed") cfg.seed = parse_number<std::uint64_t>(where, key, value);
    else if (key == "out_dir") cfg.out_dir = value;
    else if (key == "timing") cfg.timing = parse_bool(where, key, value);
    else if (key == "parallel_runs") cfg.parallel_runs = parse_bool(where, key, value);
    else if (key == "debug_trace") cfg.debug_trace = parse_bool(where, key, value);
    else if (key == "deterministic_eval") cfg.run.eval.deterministic = parse_bool(where, key, value);
    else if (key == "workers") cfg.run.workers = parse_number<int>(where, key, value);
    else if (key == "pop_num") cfg.pop_num = parse_number<int>(where, key, value);
    else if (key == "pop_learn") cfg.run.pop_learn = parse_number<int>(where, key, value);
    else if (key == "pop_imitate") cfg.run.pop_imitate = parse_number<int>(where, key, value);
    else if (key == "pop_selfstudy") cfg.run.pop_selfstudy = parse_number<int>(where, key, value);
    else if (key == "sampling_num") cfg.run.sampling_num = parse_number<int>(where, key, value);
    else if (key == "test_num") cfg.run.test_num = parse_number<int>(where, key, value);
    else if (key == "max_step") cfg.run.max_step = parse_number<std::uint64_t>(where, key, value);
    else if (key == "alpha_min") cfg.run.alpha_min = parse_number<double>(where, key, value);
    else if (key == "alpha_max") cfg.run.alpha_max = parse_number<double>(where, key, value);
    else if (key == "levy_beta") levy_beta = parse_number<double>(where, key, value);
    else if (key == "perturb_low") cfg.run.style.perturb_low = parse_number<double>(where, key, value);
    else if (key == "perturb_high") cfg.run.style.perturb_high = parse_number<double>(where, key, value);
    else if (key == "full_perturb_prob") cfg.run.style.full_perturb_prob = parse_number<double>(where, key, value);
    else if (key == "clamp_factor") cfg.run.style.clamp_factor = parse_number<double>(where, key, value);
    else if (key == "clamp_rule") {
      if (value == "containing") cfg.run.style.clamp_rule = ClampRule::Containing;
      else if (value == "literal") cfg.run.style.clamp_rule = ClampRule::Literal;
      else fail(where, "clamp_rule must be containing or literal");
    }
    else if (key == "hidden") cfg.run.policy.hidden = parse_index_list(where, key, value);
    else if (key == "activation") {
      if (value == "tanh") cfg.run.policy.activation = Activation::Tanh;
      else if (value == "relu") cfg.run.policy.activation = Activation::Relu;
      else fail(where, "activation must be tanh or relu");
    }
    else if (key == "ga_elite_frac") cfg.ga.elite_frac = parse_number<double>(where, key, value);
    else if (key == "ga_tournament") cfg.ga.tournament = parse_number<int>(where, key, value);
    else if (key == "ga_mutation_prob") cfg.ga.mutation_prob = parse_number<double>(where, key, value);
    else if (key == "ga_mutation_scale") cfg.ga.mutation_scale = parse_number<double>(where, key, value);
    else if (key == "pickplace_cube") cfg.pickplace.p_cube = parse_vec3(where, key, value);
    else if (key == "pickplace_dot") cfg.pickplace.p_dot = parse_vec3(where, key, value);
    else if (key == "pickplace_near1") cfg.pickplace.near1 = parse_vec3(where, key, value);
    else if (key == "pickplace_near2") cfg.pickplace.near2 = parse_vec3(where, key, value);
    else fail(where, "unknown key '" + key + "'");
  }

  if (!seen.count("optimizer"))
    fail(origin, "missing required key 'optimizer'");
  if (!seen.count("problem")) fail(origin, "missing required key 'problem'");

  try {
    cfg.run.style.levy = LevyConfig::for_beta(levy_beta);
  } catch (const std::domain_error& e) {
    fail(origin, std::string("levy_beta: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(in, path);
}

void save_config(const ExperimentConfig& cfg, std::ostream& out) {
  out << "optimizer = " << cfg.optimizer << '\n';
  out << "problem = " << cfg.problem << '\n';
  out << "problem_dim = " << cfg.problem_dim << '\n';
  out << "num_seeds = " << cfg.num_seeds << '\n';
  out << "seed = " << cfg.seed << '\n';
  out << "out_dir = " << cfg.out_dir << '\n';
  out << "timing = " << (cfg.timing ? "true" : "false") << '\n';
  out << "parallel_runs = " << (cfg.parallel_runs ? "true" : "false") << '\n';
  out << "debug_trace = " << (cfg.debug_trace ? "true" : "false") << '\n';
  out << "deterministic_eval = "
      << (cfg.run.eval.deterministic ? "true" : "false") << '\n';
  out << "workers = " << cfg.run.workers << '\n';
  out << "pop_num = " << cfg.pop_num << '\n';
  out << "pop_learn = " << cfg.run.pop_learn << '\n';
  out << "pop_imitate = " << cfg.run.pop_imitate << '\n';
  out << "pop_selfstudy = " << cfg.run.pop_selfstudy << '\n';
  out << "sampling_num = " << cfg.run.sampling_num << '\n';
  out << "test_num = " << cfg.run.test_num << '\n';
  out << "max_step = " << cfg.run.max_step << '\n';
  out << "alpha_min = " << fmt(cfg.run.alpha_min) << '\n';
  out << "alpha_max = " << fmt(cfg.run.alpha_max) << '\n';
  out << "levy_beta = " << fmt(cfg.run.style.levy.beta) << '\n';
  out << "perturb_low = " << fmt(cfg.run.style.perturb_low) << '\n';
  out << "perturb_high = " << fmt(cfg.run.style.perturb_high) << '\n';
  out << "full_perturb_prob = " << fmt(cfg.run.style.full_perturb_prob) << '\n';
  out << "clamp_factor = " << fmt(cfg.run.style.clamp_factor) << '\n';
  out << "clamp_rule = "
      << (cfg.run.style.clamp_rule == ClampRule::Literal ? "literal"
                                                         : "containing")
      << '\n';
  out << "hidden = " << fmt(cfg.run.policy.hidden) << '\n';
  out << "activation = "
      << (cfg.run.policy.activation == Activation::Relu ? "relu" : "tanh")
      << '\n';
  out << "ga_elite_frac = " << fmt(cfg.ga.elite_frac) << '\n';
  out << "ga_tournament = " << cfg.ga.tournament << '\n';
  out << "ga_mutation_prob = " << fmt(cfg.ga.mutation_prob) << '\n';
  out << "ga_mutation_scale = " << fmt(cfg.ga.mutation_scale) << '\n';
  out << "pickplace_cube = " << fmt(cfg.pickplace.p_cube) << '\n';
  out << "pickplace_dot = " << fmt(cfg.pickplace.p_dot) << '\n';
  out << "pickplace_near1 = " << fmt(cfg.pickplace.near1) << '\n';
  out << "pickplace_near2 = " << fmt(cfg.pickplace.near2) << '\n';
}

void save_config_file(const ExperimentConfig& cfg, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write config file '" + path + "'");
  save_config(cfg, out);
}

} // namespace isl
