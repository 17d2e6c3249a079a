#pragma once

#include "isl/levy.hpp"
#include "isl/policy.hpp"
#include "isl/rng.hpp"
#include "isl/types.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <utility>

namespace isl {

// Range spanned by the entries of the current best parameter set; new
// candidates are clamped to an interval derived from it.
template <typename Scalar>
struct BestBoundsT {
  Scalar lower = Scalar(0);
  Scalar upper = Scalar(0);
};

using BestBounds = BestBoundsT<double>;

template <typename Scalar>
BestBoundsT<Scalar> bounds_of(const ParameterSetT<Scalar>& params) {
  if (params.layers.empty())
    throw std::invalid_argument("bounds_of: empty parameter set");
  BestBoundsT<Scalar> b;
  b.lower = params.layers.front().weight(0, 0);
  b.upper = b.lower;
  for (const auto& layer : params.layers) {
    b.lower = std::min(b.lower, layer.weight.minCoeff());
    b.upper = std::max(b.upper, layer.weight.maxCoeff());
    if (layer.bias.size() > 0) {
      b.lower = std::min(b.lower, layer.bias.minCoeff());
      b.upper = std::max(b.upper, layer.bias.maxCoeff());
    }
  }
  return b;
}

// Containing scales each bound away from zero so the best itself always
// stays inside the interval; Literal multiplies both bounds as-is, which
// can exclude the best when the bounds share a sign.
enum class ClampRule { Containing, Literal };

template <typename Scalar>
BestBoundsT<Scalar> clamp_interval(const BestBoundsT<Scalar>& bounds,
                                   Scalar factor, ClampRule rule) {
  if (!(factor >= Scalar(1)))
    throw std::invalid_argument("clamp_interval: factor must be >= 1");
  if (bounds.lower > bounds.upper)
    throw std::invalid_argument("clamp_interval: inverted bounds");
  BestBoundsT<Scalar> out;
  if (rule == ClampRule::Literal) {
    out.lower = factor * bounds.lower;
    out.upper = factor * bounds.upper;
  } else {
    out.lower = bounds.lower < Scalar(0) ? factor * bounds.lower
                                         : bounds.lower / factor;
    out.upper = bounds.upper > Scalar(0) ? factor * bounds.upper
                                         : bounds.upper / factor;
  }
  return out;
}

template <typename Scalar>
void clamp_params(ParameterSetT<Scalar>& params,
                  const BestBoundsT<Scalar>& interval) {
  if (interval.lower > interval.upper)
    throw std::invalid_argument("clamp_params: inverted interval");
  for (auto& layer : params.layers) {
    layer.weight = layer.weight.cwiseMax(interval.lower).cwiseMin(interval.upper);
    if (layer.bias.size() > 0)
      layer.bias = layer.bias.cwiseMax(interval.lower).cwiseMin(interval.upper);
  }
}

template <typename Scalar>
void clamp_params(ParameterSetT<Scalar>& params,
                  const BestBoundsT<Scalar>& bounds, Scalar factor,
                  ClampRule rule = ClampRule::Containing) {
  clamp_params(params, clamp_interval(bounds, factor, rule));
}

template <typename Scalar>
struct StyleConfigT {
  LevyConfigT<Scalar> levy = LevyConfigT<Scalar>::for_beta(Scalar(1.5));
  Scalar perturb_low = Scalar(-1);
  Scalar perturb_high = Scalar(1);
  Scalar full_perturb_prob = Scalar(0.5);
  Scalar clamp_factor = Scalar(1.5);
  ClampRule clamp_rule = ClampRule::Containing;

  void validate() const {
    levy.validate();
    if (!(perturb_low <= perturb_high))
      throw std::invalid_argument("StyleConfig: perturb_low must not exceed perturb_high");
    if (!(full_perturb_prob >= Scalar(0) && full_perturb_prob <= Scalar(1)))
      throw std::invalid_argument("StyleConfig: full_perturb_prob must be in [0, 1]");
    if (!(clamp_factor > Scalar(1)))
      throw std::invalid_argument("StyleConfig: clamp_factor must be > 1");
  }

  bool operator==(const StyleConfigT&) const = default;
};

using StyleConfig = StyleConfigT<double>;

// Step away from the best along the current offset, scaled per entry by an
// independent heavy-tailed draw. The sampler is a parameter so tests can pin
// the draw; no clamping happens here.
template <typename Scalar, typename Sampler>
ParameterSetT<Scalar> learn_update(const ParameterSetT<Scalar>& current,
                                   const ParameterSetT<Scalar>& best,
                                   Scalar alpha, Sampler&& draw) {
  VectorX<Scalar> flat = flatten(current);
  const VectorX<Scalar> flat_best = flatten(best);
  if (flat.size() != flat_best.size())
    throw std::invalid_argument("learn_update: parameter sets differ in size");
  for (Index i = 0; i < flat.size(); ++i)
    flat(i) += alpha * draw() * (flat(i) - flat_best(i));
  return unflatten_like(current, flat);
}

template <typename Scalar>
ParameterSetT<Scalar> learn_update(const ParameterSetT<Scalar>& current,
                                   const ParameterSetT<Scalar>& best,
                                   Scalar alpha,
                                   const LevyConfigT<Scalar>& levy, Rng& rng) {
  return learn_update(current, best, alpha,
                      [&] { return sample_levy(levy, rng); });
}

// Multiplicative perturbation of the best: either every entry (with
// probability full_perturb_prob) or a contiguous inclusive index range.
// full_branch, when given, reports which branch was taken.
template <typename Scalar>
ParameterSetT<Scalar> imitate_update(const ParameterSetT<Scalar>& best,
                                     const StyleConfigT<Scalar>& cfg, Rng& rng,
                                     bool* full_branch = nullptr) {
  cfg.validate();
  VectorX<Scalar> flat = flatten(best);
  const Index n = flat.size();
  std::uniform_real_distribution<Scalar> unit(Scalar(0), Scalar(1));
  std::uniform_real_distribution<Scalar> perturb(cfg.perturb_low,
                                                 cfg.perturb_high);
  const bool full = unit(rng) < cfg.full_perturb_prob;
  Index first = 0;
  Index last = n - 1;
  if (!full) {
    std::uniform_int_distribution<Index> pick(0, n - 1);
    first = pick(rng);
    last = pick(rng);
    if (first > last) std::swap(first, last);
  }
  for (Index i = first; i <= last; ++i)
    flat(i) *= Scalar(1) + perturb(rng);
  if (full_branch) *full_branch = full;
  return unflatten_like(best, flat);
}

// Resample each layer from a Gaussian fitted to that layer's own entries
// (weights and bias pooled). The variance floor keeps degenerate layers
// from collapsing the distribution.
template <typename Scalar>
ParameterSetT<Scalar> selfstudy_update(const ParameterSetT<Scalar>& best,
                                       Rng& rng,
                                       Scalar variance_floor = Scalar(1e-6)) {
  if (!(variance_floor >= Scalar(0)))
    throw std::invalid_argument("selfstudy_update: variance floor must be >= 0");
  ParameterSetT<Scalar> out = best;
  for (std::size_t li = 0; li < best.layers.size(); ++li) {
    const auto& layer = best.layers[li];
    const Index count = layer.weight.size() + layer.bias.size();
    const Scalar sum = layer.weight.sum() + layer.bias.sum();
    const Scalar mean = sum / Scalar(count);
    Scalar sq = (layer.weight.array() - mean).square().sum();
    if (layer.bias.size() > 0) sq += (layer.bias.array() - mean).square().sum();
    const Scalar var = std::max(sq / Scalar(count), variance_floor);
    std::normal_distribution<Scalar> dist(mean, std::sqrt(var));
    auto& target = out.layers[li];
    for (Index r = 0; r < target.weight.rows(); ++r)
      for (Index c = 0; c < target.weight.cols(); ++c)
        target.weight(r, c) = dist(rng);
    for (Index i = 0; i < target.bias.size(); ++i) target.bias(i) = dist(rng);
  }
  return out;
}

} // namespace isl
