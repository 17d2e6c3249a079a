#pragma once

#include "isl/policy.hpp"
#include "isl/types.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace isl {

struct EnvSpec {
  Index obs_dim = 0;
  Index act_dim = 0;
  Vector action_low;
  Vector action_high;
  int episode_cap = 1;
  double discount = 1.0; // undiscounted returns throughout

  void validate() const;
};

struct StepResult {
  Vector obs;
  double reward = 0.0;
  bool done = false;
};

// Episodic environment. Instances are single-threaded and never shared;
// evaluation workers clone the prototype and own their copy.
class Env {
public:
  virtual ~Env() = default;
  virtual const EnvSpec& spec() const = 0;
  virtual Vector reset(std::uint64_t seed) = 0;
  virtual StepResult step(const Vector& action) = 0;
  virtual std::unique_ptr<Env> clone() const = 0;

  // Out-of-bounds actions are clamped, not rejected; the count is kept so
  // callers can surface how often a policy leaves the declared bounds.
  std::uint64_t clamped_actions() const { return clamped_; }

protected:
  Vector clamp_action(const Vector& action);
  std::uint64_t clamped_ = 0;
};

// Torque-controlled rigid-rod pendulum, angle measured from upright.
class PendulumEnv final : public Env {
public:
  PendulumEnv();
  const EnvSpec& spec() const override { return spec_; }
  Vector reset(std::uint64_t seed) override;
  StepResult step(const Vector& action) override;
  std::unique_ptr<Env> clone() const override;

  // Accessors for integrator checks.
  double theta() const { return theta_; }
  double theta_dot() const { return theta_dot_; }
  void set_state(double theta, double theta_dot);
  double energy() const;

  static constexpr double kDt = 0.02;
  static constexpr double kGravity = 9.81;
  static constexpr double kMass = 1.0;
  static constexpr double kLength = 1.0;

private:
  Vector observe() const;
  EnvSpec spec_;
  double theta_ = 0.0;
  double theta_dot_ = 0.0;
  int t_ = 0;
};

// Continuous-force cart-pole balancing task.
class CartPoleEnv final : public Env {
public:
  CartPoleEnv();
  const EnvSpec& spec() const override { return spec_; }
  Vector reset(std::uint64_t seed) override;
  StepResult step(const Vector& action) override;
  std::unique_ptr<Env> clone() const override;

  static constexpr double kDt = 0.02;

private:
  EnvSpec spec_;
  double x_ = 0.0, x_dot_ = 0.0, theta_ = 0.0, theta_dot_ = 0.0;
  int t_ = 0;
};

// Kinematic two-link planar arm chasing a per-episode random target.
class ReacherEnv final : public Env {
public:
  ReacherEnv();
  const EnvSpec& spec() const override { return spec_; }
  Vector reset(std::uint64_t seed) override;
  StepResult step(const Vector& action) override;
  std::unique_ptr<Env> clone() const override;

  Eigen::Vector2d end_effector() const;
  Eigen::Vector2d target() const { return target_; }

  static constexpr double kLink1 = 0.5;
  static constexpr double kLink2 = 0.5;

private:
  Vector observe() const;
  EnvSpec spec_;
  double q1_ = 0.0, q2_ = 0.0;
  Eigen::Vector2d target_ = Eigen::Vector2d::Zero();
  int t_ = 0;
};

Eigen::Vector2d reacher_end_effector(double q1, double q2,
                                     double l1 = ReacherEnv::kLink1,
                                     double l2 = ReacherEnv::kLink2);

enum class Stage { One, Two };

struct PickPlaceConfig {
  Eigen::Vector3d p_cube{0.45, 0.25, 0.05};
  Eigen::Vector3d p_dot{-0.35, 0.40, 0.05};
  Eigen::Vector3d near1{0.05, 0.05, 0.05};
  Eigen::Vector3d near2{0.05, 0.05, 0.05};
  std::array<double, 3> links{0.4, 0.3, 0.2};
  double base_height = 0.1;

  void validate() const;
};

bool operator==(const PickPlaceConfig& a, const PickPlaceConfig& b);

struct PickPlaceState {
  Eigen::Vector3d gripper = Eigen::Vector3d::Zero();
  Stage stage = Stage::One;
};

// Staged reward terms: distance shaping toward the stage target, a
// per-axis region indicator, and their sum.
double guided_reward(const PickPlaceState& state, const PickPlaceConfig& cfg);
double sparse_reward(const PickPlaceState& state, const PickPlaceConfig& cfg);
double composite_reward(const PickPlaceState& state, const PickPlaceConfig& cfg);

// Staged pick-and-place on a 4-joint kinematic arm (base yaw plus three
// pitch joints). Entering the stage-1 region grasps the cube and switches
// the target; entering the stage-2 region completes the episode.
class PickPlaceEnv final : public Env {
public:
  explicit PickPlaceEnv(PickPlaceConfig cfg = {});
  const EnvSpec& spec() const override { return spec_; }
  Vector reset(std::uint64_t seed) override;
  StepResult step(const Vector& action) override;
  std::unique_ptr<Env> clone() const override;

  Stage stage() const { return state_.stage; }
  const PickPlaceState& state() const { return state_; }
  const PickPlaceConfig& config() const { return cfg_; }
  Eigen::Vector3d gripper_position(const Eigen::Vector4d& joints) const;

private:
  Vector observe() const;
  const Eigen::Vector3d& current_target() const;
  PickPlaceConfig cfg_;
  EnvSpec spec_;
  Eigen::Vector4d joints_ = Eigen::Vector4d::Zero();
  PickPlaceState state_;
  int t_ = 0;
};

// Oracle test functions, returned as fitness (-f, maximization convention).
double direct_objective(const std::string& name, const Vector& x);

// A problem is either an episodic environment (cloned per rollout) or a
// direct objective over a raw parameter vector.
struct Problem {
  std::string name;
  std::shared_ptr<const Env> prototype;            // null for direct problems
  std::function<double(const Vector&)> objective;  // fitness, direct problems
  Index direct_dim = 0;

  bool direct() const { return prototype == nullptr; }
};

struct ProblemOptions {
  Index direct_dim = 10;
  PickPlaceConfig pickplace;
};

Problem make_problem(const std::string& name, const ProblemOptions& opts = {});
const std::vector<std::string>& problem_names();

// Parameter layout an optimizer searches over: the policy network for
// episodic problems, a single bias-free 1 x D layer for direct ones.
std::vector<LayerShape> param_shapes(const Problem& problem,
                                     const PolicySpec& policy);

} // namespace isl
