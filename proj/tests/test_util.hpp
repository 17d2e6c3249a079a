#pragma once

// Stub environments and small builders shared across the test files.

#include <cmath>
#include <limits>
#include <memory>

#include "isl/problems.hpp"

namespace isl::testing {

// Fixed reward every step until the cap; reset ignores the seed.
class ConstantRewardEnv final : public Env {
public:
  explicit ConstantRewardEnv(double reward = 1.0, int cap = 10)
      : reward_(reward) {
    spec_.obs_dim = 1;
    spec_.act_dim = 1;
    spec_.action_low = Vector::Constant(1, -1.0);
    spec_.action_high = Vector::Constant(1, 1.0);
    spec_.episode_cap = cap;
  }
  const EnvSpec& spec() const override { return spec_; }
  Vector reset(std::uint64_t) override {
    t_ = 0;
    return Vector::Zero(1);
  }
  StepResult step(const Vector&) override {
    ++t_;
    return {Vector::Zero(1), reward_, t_ >= spec_.episode_cap};
  }
  std::unique_ptr<Env> clone() const override {
    return std::make_unique<ConstantRewardEnv>(reward_, spec_.episode_cap);
  }

private:
  EnvSpec spec_;
  double reward_;
  int t_ = 0;
};

// One-step episode whose fitness is decided by the parity of the reset seed:
// even seeds pay 0, odd seeds pay 2.
class ParityEnv final : public Env {
public:
  ParityEnv() {
    spec_.obs_dim = 1;
    spec_.act_dim = 1;
    spec_.action_low = Vector::Constant(1, -1.0);
    spec_.action_high = Vector::Constant(1, 1.0);
    spec_.episode_cap = 1;
  }
  const EnvSpec& spec() const override { return spec_; }
  Vector reset(std::uint64_t seed) override {
    odd_ = (seed % 2) == 1;
    return Vector::Zero(1);
  }
  StepResult step(const Vector&) override {
    return {Vector::Zero(1), odd_ ? 2.0 : 0.0, true};
  }
  std::unique_ptr<Env> clone() const override {
    return std::make_unique<ParityEnv>();
  }

private:
  EnvSpec spec_;
  bool odd_ = false;
};

// Emits a NaN reward at a chosen step (1-based); 0 means never.
class PoisonEnv final : public Env {
public:
  explicit PoisonEnv(int poison_at = 1, int cap = 5) : poison_at_(poison_at) {
    spec_.obs_dim = 1;
    spec_.act_dim = 1;
    spec_.action_low = Vector::Constant(1, -1.0);
    spec_.action_high = Vector::Constant(1, 1.0);
    spec_.episode_cap = cap;
  }
  const EnvSpec& spec() const override { return spec_; }
  Vector reset(std::uint64_t) override {
    t_ = 0;
    return Vector::Zero(1);
  }
  StepResult step(const Vector&) override {
    ++t_;
    const bool poison = t_ == poison_at_;
    return {Vector::Zero(1),
            poison ? std::numeric_limits<double>::quiet_NaN() : 1.0,
            t_ >= spec_.episode_cap};
  }
  std::unique_ptr<Env> clone() const override {
    return std::make_unique<PoisonEnv>(poison_at_, spec_.episode_cap);
  }

private:
  EnvSpec spec_;
  int poison_at_;
  int t_ = 0;
};

inline Problem make_stub_problem(std::shared_ptr<const Env> env,
                                 const std::string& name = "stub") {
  Problem p;
  p.name = name;
  p.prototype = std::move(env);
  return p;
}

// Policy spec matching the 1-obs/1-act stubs, small on purpose.
inline PolicySpec tiny_policy() {
  PolicySpec spec;
  spec.obs_dim = 1;
  spec.act_dim = 1;
  spec.hidden = {4};
  return spec;
}

// A parameter set holding one bias-free row, i.e. a raw decision vector.
inline ParameterSet vector_params(const Vector& x) {
  ParameterSet params;
  Layer layer;
  layer.weight = x.transpose();
  layer.bias = Vector();
  params.layers.push_back(std::move(layer));
  return params;
}

} // namespace isl::testing
