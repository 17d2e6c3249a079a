#pragma once

#include <cmath>
#include <numbers>
#include <cstdint>
#include <random>
#include <stdexcept>

namespace isl {

// Scale of the numerator draw in the Mantegna sampler, as a closed form of
// the gamma function. Well defined on [1, 2]; degenerates to 0 at beta = 2.
template <typename Scalar>
Scalar sigma_u(Scalar beta) {
  if (!(beta >= Scalar(1) && beta <= Scalar(2)))
    throw std::domain_error("sigma_u: beta must lie in [1, 2]");
  const Scalar pi = std::numbers::pi_v<Scalar>;
  const Scalar num = std::tgamma(Scalar(1) + beta) * std::sin(pi * beta / 2);
  const Scalar den = std::tgamma((Scalar(1) + beta) / 2) * beta *
                     std::pow(Scalar(2), (beta - 1) / 2);
  return std::pow(num / den, Scalar(1) / beta);
}

template <typename Scalar = double>
struct LevyConfigT {
  Scalar beta = Scalar(1.5);
  Scalar sigma_u = Scalar(0.6965745025576968); // sigma_u(1.5)
  Scalar sigma_v = Scalar(1);

  static LevyConfigT for_beta(Scalar beta) {
    LevyConfigT cfg;
    cfg.beta = beta;
    cfg.sigma_u = isl::sigma_u(beta);
    cfg.sigma_v = Scalar(1);
    cfg.validate();
    return cfg;
  }

  void validate() const {
    if (!(beta > Scalar(1) && beta <= Scalar(2)))
      throw std::domain_error("LevyConfig: beta must lie in (1, 2]");
    if (!(sigma_u > Scalar(0)))
      throw std::domain_error("LevyConfig: sigma_u must be positive");
    if (sigma_v != Scalar(1))
      throw std::domain_error("LevyConfig: sigma_v is fixed to 1");
  }

  bool operator==(const LevyConfigT&) const = default;
};

using LevyConfig = LevyConfigT<double>;

// One Mantegna draw: u / |v|^(1/beta) with u ~ N(0, sigma_u^2),
// v ~ N(0, sigma_v^2). A v that is exactly zero is redrawn so the result
// stays finite and deterministic under seeding.
template <typename Scalar, typename Generator>
Scalar sample_levy(const LevyConfigT<Scalar>& cfg, Generator& rng) {
  std::normal_distribution<Scalar> unit(Scalar(0), Scalar(1));
  const Scalar u = cfg.sigma_u * unit(rng);
  Scalar v = cfg.sigma_v * unit(rng);
  while (v == Scalar(0))
    v = cfg.sigma_v * unit(rng);
  return u / std::pow(std::abs(v), Scalar(1) / cfg.beta);
}

template <typename Scalar = double>
struct AlphaScheduleT {
  Scalar alpha_min = Scalar(0.01);
  Scalar alpha_max = Scalar(0.1);
  std::uint64_t max_step = 1;

  void validate() const {
    if (!(alpha_min > Scalar(0) && alpha_min <= alpha_max))
      throw std::domain_error("AlphaSchedule: need 0 < alpha_min <= alpha_max");
    if (max_step == 0)
      throw std::domain_error("AlphaSchedule: max_step must be positive");
  }
};

using AlphaSchedule = AlphaScheduleT<double>;

// alpha_min + (alpha_max - alpha_min) * cos^2((pi/2) * step/max_step),
// written in half-angle form so the endpoints and midpoint are exact.
// Steps beyond the budget clamp to alpha_min.
template <typename Scalar>
Scalar alpha_at(const AlphaScheduleT<Scalar>& sched, std::uint64_t step) {
  if (step >= sched.max_step)
    return sched.alpha_min;
  const Scalar u = Scalar(step) / Scalar(sched.max_step);
  const Scalar cos_sq = (Scalar(1) + std::cos(std::numbers::pi_v<Scalar> * u)) / 2;
  return sched.alpha_min + (sched.alpha_max - sched.alpha_min) * cos_sq;
}

} // namespace isl
