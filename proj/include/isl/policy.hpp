#pragma once

#include "isl/types.hpp"

#include <cmath>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace isl {

enum class Activation { Tanh, Relu };

// Architecture of the stochastic Gaussian policy shared by all agents.
// The output layer carries 2*act_dim linear units: a mean head followed
// by a log-variance head.
struct PolicySpec {
  Index obs_dim = 1;
  Index act_dim = 1;
  std::vector<Index> hidden = {64, 64};
  Activation activation = Activation::Tanh;

  void validate() const {
    if (obs_dim < 1 || act_dim < 1)
      throw std::invalid_argument("PolicySpec: obs_dim and act_dim must be >= 1");
    for (Index h : hidden)
      if (h < 1)
        throw std::invalid_argument("PolicySpec: hidden widths must be >= 1");
  }

  bool operator==(const PolicySpec&) const = default;
};

// Dimensions of one layer: weight is out x in, bias has out entries when
// present. A raw D-dimensional parameter vector (direct objectives) is a
// single bias-free 1 x D layer.
struct LayerShape {
  Index out = 0;
  Index in = 0;
  bool bias = true;
};

template <typename Scalar = double>
struct LayerT {
  MatrixX<Scalar> weight;
  VectorX<Scalar> bias;
};

template <typename Scalar = double>
struct ParameterSetT {
  std::vector<LayerT<Scalar>> layers;
};

using Layer = LayerT<double>;
using ParameterSet = ParameterSetT<double>;

template <typename Scalar = double>
struct ActionDistributionT {
  VectorX<Scalar> mean;
  VectorX<Scalar> log_var;
};

using ActionDistribution = ActionDistributionT<double>;

inline std::vector<LayerShape> layer_shapes(const PolicySpec& spec) {
  spec.validate();
  std::vector<LayerShape> shapes;
  Index in = spec.obs_dim;
  for (Index h : spec.hidden) {
    shapes.push_back({h, in, true});
    in = h;
  }
  shapes.push_back({2 * spec.act_dim, in, true});
  return shapes;
}

inline Index param_count(std::span<const LayerShape> shapes) {
  Index total = 0;
  for (const LayerShape& s : shapes)
    total += s.out * s.in + (s.bias ? s.out : 0);
  return total;
}

inline Index param_count(const PolicySpec& spec) {
  const auto shapes = layer_shapes(spec);
  return param_count(shapes);
}

template <typename Scalar>
std::vector<LayerShape> shapes_of(const ParameterSetT<Scalar>& params) {
  std::vector<LayerShape> shapes;
  shapes.reserve(params.layers.size());
  for (const auto& layer : params.layers)
    shapes.push_back({layer.weight.rows(), layer.weight.cols(),
                      layer.bias.size() > 0});
  return shapes;
}

template <typename Scalar>
Index param_count(const ParameterSetT<Scalar>& params) {
  Index total = 0;
  for (const auto& layer : params.layers)
    total += layer.weight.size() + layer.bias.size();
  return total;
}

// Every weight and bias i.i.d. N(0, 1), filled in canonical order
// (row-major weights, then bias, layer by layer).
template <typename Scalar = double, typename Generator>
ParameterSetT<Scalar> init_params(std::span<const LayerShape> shapes,
                                  Generator& rng) {
  std::normal_distribution<Scalar> unit(Scalar(0), Scalar(1));
  ParameterSetT<Scalar> params;
  params.layers.reserve(shapes.size());
  for (const LayerShape& s : shapes) {
    LayerT<Scalar> layer;
    layer.weight.resize(s.out, s.in);
    for (Index r = 0; r < s.out; ++r)
      for (Index c = 0; c < s.in; ++c)
        layer.weight(r, c) = unit(rng);
    layer.bias.resize(s.bias ? s.out : 0);
    for (Index r = 0; r < layer.bias.size(); ++r)
      layer.bias(r) = unit(rng);
    params.layers.push_back(std::move(layer));
  }
  return params;
}

template <typename Generator>
ParameterSet init_params(const PolicySpec& spec, Generator& rng) {
  const auto shapes = layer_shapes(spec);
  return init_params<double>(shapes, rng);
}

namespace detail {
template <typename Scalar>
void check_same_shape(const ParameterSetT<Scalar>& a,
                      const ParameterSetT<Scalar>& b, const char* what) {
  if (a.layers.size() != b.layers.size())
    throw std::invalid_argument(std::string(what) + ": layer count mismatch");
  for (std::size_t i = 0; i < a.layers.size(); ++i) {
    const auto& la = a.layers[i];
    const auto& lb = b.layers[i];
    if (la.weight.rows() != lb.weight.rows() ||
        la.weight.cols() != lb.weight.cols() ||
        la.bias.size() != lb.bias.size())
      throw std::invalid_argument(std::string(what) + ": layer shape mismatch");
  }
}
} // namespace detail

// Deterministic feed-forward pass. Hidden activations per spec, linear
// output heads, log-variance clamped to [-5, 2] so exp() stays finite.
template <typename Scalar>
ActionDistributionT<Scalar> forward(const PolicySpec& spec,
                                    const ParameterSetT<Scalar>& params,
                                    const VectorX<Scalar>& obs) {
  constexpr Scalar kLogVarMin = Scalar(-5);
  constexpr Scalar kLogVarMax = Scalar(2);

  if (obs.size() != spec.obs_dim)
    throw std::invalid_argument("forward: observation length mismatch");
  const auto shapes = layer_shapes(spec);
  if (params.layers.size() != shapes.size())
    throw std::invalid_argument("forward: parameter layer count mismatch");

  VectorX<Scalar> x = obs;
  for (std::size_t i = 0; i < params.layers.size(); ++i) {
    const auto& layer = params.layers[i];
    if (layer.weight.rows() != shapes[i].out ||
        layer.weight.cols() != shapes[i].in ||
        layer.bias.size() != shapes[i].out)
      throw std::invalid_argument("forward: parameter shape mismatch");
    x = layer.weight * x + layer.bias;
    const bool is_output = (i + 1 == params.layers.size());
    if (!is_output) {
      if (spec.activation == Activation::Tanh)
        x = x.array().tanh().matrix();
      else
        x = x.cwiseMax(Scalar(0));
    }
  }

  ActionDistributionT<Scalar> dist;
  dist.mean = x.head(spec.act_dim);
  dist.log_var = x.tail(spec.act_dim)
                     .cwiseMax(kLogVarMin)
                     .cwiseMin(kLogVarMax);
  return dist;
}

// Canonical flattening: row-major weights, then bias, layer by layer.
template <typename Scalar>
VectorX<Scalar> flatten(const ParameterSetT<Scalar>& params) {
  VectorX<Scalar> flat(param_count(params));
  Index k = 0;
  for (const auto& layer : params.layers) {
    for (Index r = 0; r < layer.weight.rows(); ++r)
      for (Index c = 0; c < layer.weight.cols(); ++c)
        flat(k++) = layer.weight(r, c);
    for (Index r = 0; r < layer.bias.size(); ++r)
      flat(k++) = layer.bias(r);
  }
  return flat;
}

template <typename Scalar = double>
ParameterSetT<Scalar> unflatten(std::span<const LayerShape> shapes,
                                const VectorX<Scalar>& flat) {
  if (flat.size() != param_count(shapes))
    throw std::invalid_argument("unflatten: flat length mismatch");
  ParameterSetT<Scalar> params;
  params.layers.reserve(shapes.size());
  Index k = 0;
  for (const LayerShape& s : shapes) {
    LayerT<Scalar> layer;
    layer.weight.resize(s.out, s.in);
    for (Index r = 0; r < s.out; ++r)
      for (Index c = 0; c < s.in; ++c)
        layer.weight(r, c) = flat(k++);
    layer.bias.resize(s.bias ? s.out : 0);
    for (Index r = 0; r < layer.bias.size(); ++r)
      layer.bias(r) = flat(k++);
    params.layers.push_back(std::move(layer));
  }
  return params;
}

inline ParameterSet unflatten(const PolicySpec& spec, const Vector& flat) {
  const auto shapes = layer_shapes(spec);
  return unflatten<double>(shapes, flat);
}

template <typename Scalar>
ParameterSetT<Scalar> unflatten_like(const ParameterSetT<Scalar>& reference,
                                     const VectorX<Scalar>& flat) {
  const auto shapes = shapes_of(reference);
  return unflatten<Scalar>(shapes, flat);
}

// Raw Gaussian draw a ~ N(mean, exp(log_var)), element-wise.
template <typename Scalar, typename Generator>
VectorX<Scalar> sample_pre_squash(const ActionDistributionT<Scalar>& dist,
                                  Generator& rng) {
  std::normal_distribution<Scalar> unit(Scalar(0), Scalar(1));
  VectorX<Scalar> a(dist.mean.size());
  for (Index i = 0; i < a.size(); ++i)
    a(i) = dist.mean(i) + std::exp(dist.log_var(i) / 2) * unit(rng);
  return a;
}

// tanh squash followed by an affine map onto [low, high].
template <typename Scalar>
VectorX<Scalar> squash_to_bounds(const VectorX<Scalar>& raw,
                                 const VectorX<Scalar>& low,
                                 const VectorX<Scalar>& high) {
  if (raw.size() != low.size() || raw.size() != high.size())
    throw std::invalid_argument("squash_to_bounds: bounds length mismatch");
  const auto t = raw.array().tanh();
  return (low.array() + (t + Scalar(1)) / 2 * (high - low).array()).matrix();
}

template <typename Scalar, typename Generator>
VectorX<Scalar> sample_action(const ActionDistributionT<Scalar>& dist,
                              const VectorX<Scalar>& low,
                              const VectorX<Scalar>& high, Generator& rng) {
  return squash_to_bounds(sample_pre_squash(dist, rng), low, high);
}

// Deterministic variant: squashed mean, no sampling.
template <typename Scalar>
VectorX<Scalar> mean_action(const ActionDistributionT<Scalar>& dist,
                            const VectorX<Scalar>& low,
                            const VectorX<Scalar>& high) {
  return squash_to_bounds(dist.mean, low, high);
}

} // namespace isl
