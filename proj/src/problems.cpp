#include "isl/problems.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "isl/rng.hpp"

namespace isl {

namespace {

constexpr double kPi = std::numbers::pi;

// Wrap an angle into (-pi, pi].
double wrap_angle(double a) {
  a = std::fmod(a + kPi, 2.0 * kPi);
  if (a <= 0.0) a += 2.0 * kPi;
  return a - kPi;
}

Vector constant_vector(Index n, double value) {
  return Vector::Constant(n, value);
}

} // namespace

void EnvSpec::validate() const {
  if (obs_dim <= 0 || act_dim <= 0)
    throw std::invalid_argument("EnvSpec: dimensions must be positive");
  if (action_low.size() != act_dim || action_high.size() != act_dim)
    throw std::invalid_argument("EnvSpec: action bounds must match act_dim");
  if ((action_low.array() >= action_high.array()).any())
    throw std::invalid_argument("EnvSpec: action_low must be below action_high");
  if (episode_cap <= 0)
    throw std::invalid_argument("EnvSpec: episode_cap must be positive");
}

Vector Env::clamp_action(const Vector& action) {
  const EnvSpec& s = spec();
  if (action.size() != s.act_dim)
    throw std::invalid_argument("Env: action has wrong dimension");
  Vector clamped =
      action.cwiseMax(s.action_low).cwiseMin(s.action_high);
  if ((clamped.array() != action.array()).any()) ++clamped_;
  return clamped;
}

// ---------------------------------------------------------------------------
// Pendulum

PendulumEnv::PendulumEnv() {
  spec_.obs_dim = 3;
  spec_.act_dim = 1;
  spec_.action_low = constant_vector(1, -2.0);
  spec_.action_high = constant_vector(1, 2.0);
  spec_.episode_cap = 200;
  spec_.validate();
}

Vector PendulumEnv::reset(std::uint64_t seed) {
  Rng rng = make_stream(seed);
  std::uniform_real_distribution<double> angle(-kPi, kPi);
  std::uniform_real_distribution<double> speed(-1.0, 1.0);
  theta_ = angle(rng);
  theta_dot_ = speed(rng);
  t_ = 0;
  return observe();
}

void PendulumEnv::set_state(double theta, double theta_dot) {
  theta_ = theta;
  theta_dot_ = theta_dot;
  t_ = 0;
}

double PendulumEnv::energy() const {
  // Rod pivoting about one end: I = m l^2 / 3, centre of mass at l/2.
  const double inertia = kMass * kLength * kLength / 3.0;
  return 0.5 * inertia * theta_dot_ * theta_dot_ +
         kMass * kGravity * (kLength / 2.0) * std::cos(theta_);
}

StepResult PendulumEnv::step(const Vector& action) {
  const double torque = clamp_action(action)(0);
  const double accel =
      1.5 * kGravity / kLength * std::sin(theta_) +
      3.0 / (kMass * kLength * kLength) * torque;
  // Semi-implicit Euler keeps the energy drift of the free rod small.
  theta_dot_ += kDt * accel;
  theta_ += kDt * theta_dot_;
  ++t_;

  const double ang = wrap_angle(theta_);
  StepResult out;
  out.reward = -(ang * ang + 0.1 * theta_dot_ * theta_dot_ +
                 0.001 * torque * torque);
  out.obs = observe();
  out.done = t_ >= spec_.episode_cap;
  return out;
}

Vector PendulumEnv::observe() const {
  Vector obs(3);
  obs << std::cos(theta_), std::sin(theta_), theta_dot_;
  return obs;
}

std::unique_ptr<Env> PendulumEnv::clone() const {
  return std::make_unique<PendulumEnv>();
}

// ---------------------------------------------------------------------------
// Cart-pole

namespace {
constexpr double kCartMass = 1.0;
constexpr double kPoleMass = 0.1;
constexpr double kPoleHalfLength = 0.5;
constexpr double kCartGravity = 9.8;
constexpr double kTrackLimit = 2.4;
const double kAngleLimit = 12.0 * kPi / 180.0;
} // namespace

CartPoleEnv::CartPoleEnv() {
  spec_.obs_dim = 4;
  spec_.act_dim = 1;
  spec_.action_low = constant_vector(1, -10.0);
  spec_.action_high = constant_vector(1, 10.0);
  spec_.episode_cap = 500;
  spec_.validate();
}

Vector CartPoleEnv::reset(std::uint64_t seed) {
  Rng rng = make_stream(seed);
  std::uniform_real_distribution<double> init(-0.05, 0.05);
  x_ = init(rng);
  x_dot_ = init(rng);
  theta_ = init(rng);
  theta_dot_ = init(rng);
  t_ = 0;
  Vector obs(4);
  obs << x_, x_dot_, theta_, theta_dot_;
  return obs;
}

StepResult CartPoleEnv::step(const Vector& action) {
  const double force = clamp_action(action)(0);
  const double total_mass = kCartMass + kPoleMass;
  const double sin_t = std::sin(theta_);
  const double cos_t = std::cos(theta_);
  const double temp =
      (force + kPoleMass * kPoleHalfLength * theta_dot_ * theta_dot_ * sin_t) /
      total_mass;
  const double theta_acc =
      (kCartGravity * sin_t - cos_t * temp) /
      (kPoleHalfLength *
       (4.0 / 3.0 - kPoleMass * cos_t * cos_t / total_mass));
  const double x_acc =
      temp - kPoleMass * kPoleHalfLength * theta_acc * cos_t / total_mass;

  x_dot_ += kDt * x_acc;
  x_ += kDt * x_dot_;
  theta_dot_ += kDt * theta_acc;
  theta_ += kDt * theta_dot_;
  ++t_;

  StepResult out;
  out.obs = Vector(4);
  out.obs << x_, x_dot_, theta_, theta_dot_;
  const bool failed = std::abs(x_) > kTrackLimit || std::abs(theta_) > kAngleLimit;
  out.reward = 1.0;
  out.done = failed || t_ >= spec_.episode_cap;
  return out;
}

std::unique_ptr<Env> CartPoleEnv::clone() const {
  return std::make_unique<CartPoleEnv>();
}

// ---------------------------------------------------------------------------
// Reacher

ReacherEnv::ReacherEnv() {
  spec_.obs_dim = 6;
  spec_.act_dim = 2;
  spec_.action_low = constant_vector(2, -0.2);
  spec_.action_high = constant_vector(2, 0.2);
  spec_.episode_cap = 200;
  spec_.validate();
}

Eigen::Vector2d reacher_end_effector(double q1, double q2, double l1,
                                     double l2) {
  Eigen::Vector2d p;
  p << l1 * std::cos(q1) + l2 * std::cos(q1 + q2),
      l1 * std::sin(q1) + l2 * std::sin(q1 + q2);
  return p;
}

Vector ReacherEnv::reset(std::uint64_t seed) {
  Rng rng = make_stream(seed);
  std::uniform_real_distribution<double> radius(0.2, 0.95);
  std::uniform_real_distribution<double> angle(-kPi, kPi);
  const double r = radius(rng) * (kLink1 + kLink2);
  const double phi = angle(rng);
  target_ << r * std::cos(phi), r * std::sin(phi);
  q1_ = 0.0;
  q2_ = 0.0;
  t_ = 0;
  return observe();
}

Eigen::Vector2d ReacherEnv::end_effector() const {
  return reacher_end_effector(q1_, q2_, kLink1, kLink2);
}

StepResult ReacherEnv::step(const Vector& action) {
  const Vector delta = clamp_action(action);
  q1_ += delta(0);
  q2_ += delta(1);
  ++t_;

  StepResult out;
  out.reward = -(target_ - end_effector()).norm();
  out.obs = observe();
  out.done = t_ >= spec_.episode_cap;
  return out;
}

Vector ReacherEnv::observe() const {
  const Eigen::Vector2d ee = end_effector();
  Vector obs(6);
  obs << std::cos(q1_), std::sin(q1_), std::cos(q2_), std::sin(q2_),
      target_(0) - ee(0), target_(1) - ee(1);
  return obs;
}

std::unique_ptr<Env> ReacherEnv::clone() const {
  return std::make_unique<ReacherEnv>();
}

// ---------------------------------------------------------------------------
// Pick-and-place

void PickPlaceConfig::validate() const {
  if ((near1.array() <= 0.0).any() || (near2.array() <= 0.0).any())
    throw std::invalid_argument("PickPlaceConfig: tolerances must be positive");
  for (double l : links)
    if (l <= 0.0)
      throw std::invalid_argument("PickPlaceConfig: link lengths must be positive");
  const double reach = links[0] + links[1] + links[2] + base_height;
  if (p_cube.norm() > reach || p_dot.norm() > reach)
    throw std::invalid_argument("PickPlaceConfig: target beyond arm reach");
}

bool operator==(const PickPlaceConfig& a, const PickPlaceConfig& b) {
  return a.p_cube == b.p_cube && a.p_dot == b.p_dot && a.near1 == b.near1 &&
         a.near2 == b.near2 && a.links == b.links &&
         a.base_height == b.base_height;
}

namespace {
const Eigen::Vector3d& stage_target(const PickPlaceState& state,
                                    const PickPlaceConfig& cfg) {
  return state.stage == Stage::One ? cfg.p_cube : cfg.p_dot;
}

const Eigen::Vector3d& stage_tolerance(const PickPlaceState& state,
                                       const PickPlaceConfig& cfg) {
  return state.stage == Stage::One ? cfg.near1 : cfg.near2;
}
} // namespace

double guided_reward(const PickPlaceState& state, const PickPlaceConfig& cfg) {
  return -(state.gripper - stage_target(state, cfg)).norm();
}

double sparse_reward(const PickPlaceState& state, const PickPlaceConfig& cfg) {
  const Eigen::Vector3d diff =
      (state.gripper - stage_target(state, cfg)).cwiseAbs();
  const Eigen::Vector3d& tol = stage_tolerance(state, cfg);
  return (diff.array() <= tol.array()).all() ? 1.0 : 0.0;
}

double composite_reward(const PickPlaceState& state,
                        const PickPlaceConfig& cfg) {
  return guided_reward(state, cfg) + sparse_reward(state, cfg);
}

PickPlaceEnv::PickPlaceEnv(PickPlaceConfig cfg) : cfg_(std::move(cfg)) {
  cfg_.validate();
  spec_.obs_dim = 7;
  spec_.act_dim = 4;
  spec_.action_low = constant_vector(4, -0.1);
  spec_.action_high = constant_vector(4, 0.1);
  spec_.episode_cap = 300;
  spec_.validate();
}

Eigen::Vector3d PickPlaceEnv::gripper_position(
    const Eigen::Vector4d& joints) const {
  // Base yaw followed by a three-pitch chain in the vertical plane.
  const double yaw = joints(0);
  double pitch = 0.0;
  double radial = 0.0;
  double height = cfg_.base_height;
  for (int i = 0; i < 3; ++i) {
    pitch += joints(i + 1);
    radial += cfg_.links[static_cast<std::size_t>(i)] * std::cos(pitch);
    height += cfg_.links[static_cast<std::size_t>(i)] * std::sin(pitch);
  }
  return {radial * std::cos(yaw), radial * std::sin(yaw), height};
}

const Eigen::Vector3d& PickPlaceEnv::current_target() const {
  return stage_target(state_, cfg_);
}

Vector PickPlaceEnv::reset(std::uint64_t seed) {
  (void)seed; // layout is fixed; stochasticity comes from the policy
  joints_ << 0.0, 0.6, -0.6, 0.0;
  state_.stage = Stage::One;
  state_.gripper = gripper_position(joints_);
  t_ = 0;
  return observe();
}

StepResult PickPlaceEnv::step(const Vector& action) {
  const Vector delta = clamp_action(action);
  joints_ += Eigen::Vector4d(delta);
  state_.gripper = gripper_position(joints_);
  ++t_;

  StepResult out;
  out.reward = composite_reward(state_, cfg_);
  const bool in_region = sparse_reward(state_, cfg_) > 0.0;
  if (in_region && state_.stage == Stage::One) {
    state_.stage = Stage::Two; // cube grasped, target switches to the dot
  } else if (in_region && state_.stage == Stage::Two) {
    out.done = true;
  }
  out.done = out.done || t_ >= spec_.episode_cap;
  out.obs = observe();
  return out;
}

Vector PickPlaceEnv::observe() const {
  Vector obs(7);
  obs.head<3>() = current_target() - state_.gripper;
  obs.tail<4>() = joints_;
  return obs;
}

std::unique_ptr<Env> PickPlaceEnv::clone() const {
  return std::make_unique<PickPlaceEnv>(cfg_);
}

// ---------------------------------------------------------------------------
// Direct objectives

double direct_objective(const std::string& name, const Vector& x) {
  if (x.size() == 0)
    throw std::invalid_argument("direct_objective: empty input");
  if (name == "sphere") return -x.squaredNorm();
  if (name == "rastrigin") {
    const double n = static_cast<double>(x.size());
    return -(10.0 * n +
             (x.array().square() - 10.0 * (2.0 * kPi * x.array()).cos()).sum());
  }
  if (name == "rosenbrock") {
    if (x.size() < 2)
      throw std::invalid_argument("direct_objective: rosenbrock needs dim >= 2");
    const auto head = x.head(x.size() - 1).array();
    const auto tail = x.tail(x.size() - 1).array();
    return -(100.0 * (tail - head.square()).square() + (1.0 - head).square())
                .sum();
  }
  throw std::invalid_argument("direct_objective: unknown function " + name);
}

// ---------------------------------------------------------------------------
// Problem factory

const std::vector<std::string>& problem_names() {
  static const std::vector<std::string> names = {
      "pendulum", "cartpole",   "reacher",    "pickplace",
      "sphere",   "rastrigin",  "rosenbrock",
  };
  return names;
}

Problem make_problem(const std::string& name, const ProblemOptions& opts) {
  Problem p;
  p.name = name;
  if (name == "pendulum") {
    p.prototype = std::make_shared<PendulumEnv>();
  } else if (name == "cartpole") {
    p.prototype = std::make_shared<CartPoleEnv>();
  } else if (name == "reacher") {
    p.prototype = std::make_shared<ReacherEnv>();
  } else if (name == "pickplace") {
    p.prototype = std::make_shared<PickPlaceEnv>(opts.pickplace);
  } else if (name == "sphere" || name == "rastrigin" || name == "rosenbrock") {
    if (opts.direct_dim <= 0)
      throw std::invalid_argument("make_problem: direct_dim must be positive");
    p.direct_dim = opts.direct_dim;
    p.objective = [name](const Vector& x) { return direct_objective(name, x); };
  } else {
    throw std::invalid_argument("make_problem: unknown problem " + name);
  }
  return p;
}

std::vector<LayerShape> param_shapes(const Problem& problem,
                                     const PolicySpec& policy) {
  if (problem.direct()) {
    // Raw decision vector, laid out as one bias-free row so the generic
    // parameter-set plumbing applies unchanged.
    return {{1, problem.direct_dim, false}};
  }
  const EnvSpec& env = problem.prototype->spec();
  if (policy.obs_dim != env.obs_dim || policy.act_dim != env.act_dim)
    throw std::invalid_argument(
        "param_shapes: policy dimensions do not match environment");
  return layer_shapes(policy);
}

} // namespace isl
