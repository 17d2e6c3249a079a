#include "doctest.h"

#include <cmath>
#include <vector>

#include "isl/policy.hpp"
#include "isl/rng.hpp"

namespace {

// Plain-loop reference forward pass, deliberately free of Eigen expressions.
isl::ActionDistribution naive_forward(const isl::PolicySpec& spec,
                                      const isl::ParameterSet& params,
                                      const isl::Vector& obs) {
  std::vector<double> x(obs.data(), obs.data() + obs.size());
  for (std::size_t li = 0; li < params.layers.size(); ++li) {
    const auto& layer = params.layers[li];
    std::vector<double> y(static_cast<std::size_t>(layer.weight.rows()), 0.0);
    for (isl::Index r = 0; r < layer.weight.rows(); ++r) {
      double acc = layer.bias.size() > 0 ? layer.bias(r) : 0.0;
      for (isl::Index c = 0; c < layer.weight.cols(); ++c)
        acc += layer.weight(r, c) * x[static_cast<std::size_t>(c)];
      y[static_cast<std::size_t>(r)] = acc;
    }
    if (li + 1 != params.layers.size())
      for (double& v : y)
        v = spec.activation == isl::Activation::Tanh ? std::tanh(v)
                                                     : std::max(0.0, v);
    x = std::move(y);
  }
  isl::ActionDistribution dist;
  dist.mean.resize(spec.act_dim);
  dist.log_var.resize(spec.act_dim);
  for (isl::Index i = 0; i < spec.act_dim; ++i) {
    dist.mean(i) = x[static_cast<std::size_t>(i)];
    dist.log_var(i) = std::clamp(
        x[static_cast<std::size_t>(spec.act_dim + i)], -5.0, 2.0);
  }
  return dist;
}

} // namespace

TEST_CASE("layer shapes and parameter counts") {
  const isl::PolicySpec spec{3, 2, {8, 4}, isl::Activation::Tanh};
  const auto shapes = isl::layer_shapes(spec);
  REQUIRE(shapes.size() == 3);
  CHECK(shapes[0].out == 8);
  CHECK(shapes[0].in == 3);
  CHECK(shapes[0].bias);
  CHECK(shapes[1].out == 4);
  CHECK(shapes[1].in == 8);
  CHECK(shapes[2].out == 4); // 2 * act_dim
  CHECK(shapes[2].in == 4);
  CHECK(isl::param_count(spec) == 8 * 3 + 8 + 4 * 8 + 4 + 4 * 4 + 4);

  const isl::PolicySpec no_hidden{5, 1, {}, isl::Activation::Tanh};
  const auto flat_shapes = isl::layer_shapes(no_hidden);
  REQUIRE(flat_shapes.size() == 1);
  CHECK(flat_shapes[0].out == 2);
  CHECK(flat_shapes[0].in == 5);
  CHECK(isl::param_count(no_hidden) == 12);
}

TEST_CASE("spec validation") {
  CHECK_THROWS_AS(isl::layer_shapes({0, 1, {}, isl::Activation::Tanh}),
                  std::invalid_argument);
  CHECK_THROWS_AS(isl::layer_shapes({1, 0, {}, isl::Activation::Tanh}),
                  std::invalid_argument);
  CHECK_THROWS_AS(isl::layer_shapes({1, 1, {0}, isl::Activation::Tanh}),
                  std::invalid_argument);
}

TEST_CASE("init_params is seed-deterministic with unit-normal statistics") {
  const isl::PolicySpec spec{128, 8, {256, 256}, isl::Activation::Tanh};

  isl::Rng a = isl::make_stream(11, {isl::stream::init});
  isl::Rng b = isl::make_stream(11, {isl::stream::init});
  const auto pa = isl::init_params(spec, a);
  const auto pb = isl::init_params(spec, b);
  CHECK(isl::flatten(pa) == isl::flatten(pb));

  isl::Rng c = isl::make_stream(12, {isl::stream::init});
  const auto pc = isl::init_params(spec, c);
  CHECK(isl::flatten(pa) != isl::flatten(pc));

  const isl::Vector flat = isl::flatten(pa);
  const double n = static_cast<double>(flat.size());
  REQUIRE(n > 100000);
  const double mean = flat.mean();
  const double var = (flat.array() - mean).square().sum() / (n - 1.0);
  CHECK(std::abs(mean) < 4.0 / std::sqrt(n));
  CHECK(var == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("forward with zero parameters gives a zero distribution") {
  const isl::PolicySpec spec{3, 2, {4}, isl::Activation::Relu};
  const auto shapes = isl::layer_shapes(spec);
  auto params = isl::unflatten<double>(
      shapes, isl::Vector::Zero(isl::param_count(spec)));
  const auto dist = isl::forward(spec, params, isl::Vector::Ones(3).eval());
  CHECK(dist.mean == isl::Vector::Zero(2));
  CHECK(dist.log_var == isl::Vector::Zero(2));
}

TEST_CASE("forward matches a hand-built linear map") {
  const isl::PolicySpec spec{2, 1, {}, isl::Activation::Tanh};
  isl::ParameterSet params;
  isl::Layer layer;
  layer.weight.resize(2, 2);
  layer.weight << 1.0, 2.0, 0.0, 0.0;
  layer.bias.resize(2);
  layer.bias << 0.5, 0.0;
  params.layers.push_back(layer);

  isl::Vector obs(2);
  obs << 3.0, -1.0;
  const auto dist = isl::forward(spec, params, obs);
  CHECK(dist.mean(0) == doctest::Approx(3.0 - 2.0 + 0.5).epsilon(1e-15));
  CHECK(dist.log_var(0) == 0.0);
}

TEST_CASE("forward agrees with a plain-loop reference network") {
  for (const auto act : {isl::Activation::Tanh, isl::Activation::Relu}) {
    const isl::PolicySpec spec{5, 2, {7, 3}, act};
    isl::Rng rng = isl::make_stream(99, {static_cast<std::uint64_t>(act)});
    const auto params = isl::init_params(spec, rng);
    std::normal_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
      isl::Vector obs(5);
      for (isl::Index i = 0; i < 5; ++i) obs(i) = unit(rng);
      const auto got = isl::forward(spec, params, obs);
      const auto want = naive_forward(spec, params, obs);
      for (isl::Index i = 0; i < 2; ++i) {
        CHECK(got.mean(i) ==
              doctest::Approx(want.mean(i)).epsilon(1e-12));
        CHECK(got.log_var(i) ==
              doctest::Approx(want.log_var(i)).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("log-variance head is clamped to [-5, 2]") {
  const isl::PolicySpec spec{1, 1, {}, isl::Activation::Tanh};
  isl::ParameterSet params;
  isl::Layer layer;
  layer.weight = isl::Matrix::Zero(2, 1);
  layer.bias.resize(2);
  layer.bias << 0.0, 50.0;
  params.layers.push_back(layer);
  isl::Vector obs = isl::Vector::Zero(1);
  CHECK(isl::forward(spec, params, obs).log_var(0) == 2.0);
  params.layers[0].bias(1) = -50.0;
  CHECK(isl::forward(spec, params, obs).log_var(0) == -5.0);
}

TEST_CASE("flatten uses row-major weights then bias, layer by layer") {
  isl::ParameterSet params;
  isl::Layer layer;
  layer.weight.resize(2, 2);
  layer.weight << 1.0, 2.0, 3.0, 4.0;
  layer.bias.resize(2);
  layer.bias << 5.0, 6.0;
  params.layers.push_back(layer);

  const isl::Vector flat = isl::flatten(params);
  isl::Vector want(6);
  want << 1.0, 2.0, 3.0, 4.0, 5.0, 6.0;
  CHECK(flat == want);
}

TEST_CASE("flatten and unflatten round-trip bit-exactly") {
  const isl::PolicySpec spec{4, 3, {6}, isl::Activation::Tanh};
  isl::Rng rng = isl::make_stream(5);
  const auto params = isl::init_params(spec, rng);
  const isl::Vector flat = isl::flatten(params);

  const auto shapes = isl::layer_shapes(spec);
  const auto rebuilt = isl::unflatten<double>(shapes, flat);
  CHECK(isl::flatten(rebuilt) == flat);
  REQUIRE(rebuilt.layers.size() == params.layers.size());
  for (std::size_t i = 0; i < params.layers.size(); ++i) {
    CHECK(rebuilt.layers[i].weight == params.layers[i].weight);
    CHECK(rebuilt.layers[i].bias == params.layers[i].bias);
  }

  const auto like = isl::unflatten_like(params, flat);
  CHECK(isl::flatten(like) == flat);

  CHECK_THROWS_AS(isl::unflatten<double>(shapes, isl::Vector::Zero(3)),
                  std::invalid_argument);
}

TEST_CASE("squash maps the real line onto the action box") {
  isl::Vector low(2), high(2);
  low << -2.0, 0.0;
  high << 2.0, 1.0;

  const isl::Vector mid = isl::squash_to_bounds(
      isl::Vector::Zero(2).eval(), low, high);
  CHECK(mid(0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(mid(1) == doctest::Approx(0.5).epsilon(1e-15));

  isl::Vector big(2);
  big << 40.0, -40.0;
  const isl::Vector edge = isl::squash_to_bounds(big, low, high);
  CHECK(edge(0) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(edge(1) == doctest::Approx(0.0).epsilon(1e-12));

  CHECK_THROWS_AS(
      isl::squash_to_bounds(isl::Vector::Zero(3).eval(), low, high),
      std::invalid_argument);
}

TEST_CASE("sampled actions always land inside the bounds") {
  isl::Vector low(2), high(2);
  low << -1.0, -0.5;
  high << 1.0, 0.5;
  isl::ActionDistribution dist;
  dist.mean = isl::Vector::Zero(2);
  dist.log_var = isl::Vector::Constant(2, 2.0);
  isl::Rng rng = isl::make_stream(3);
  for (int i = 0; i < 1000; ++i) {
    const isl::Vector a = isl::sample_action(dist, low, high, rng);
    for (isl::Index k = 0; k < 2; ++k) {
      CHECK(a(k) >= low(k));
      CHECK(a(k) <= high(k));
    }
  }
}

TEST_CASE("pre-squash samples scale with exp(log_var / 2)") {
  isl::ActionDistribution dist;
  dist.mean = isl::Vector::Constant(1, 3.0);
  dist.log_var = isl::Vector::Constant(1, 1.2);

  isl::Rng a = isl::make_stream(17);
  isl::Rng b = isl::make_stream(17);
  const isl::Vector draw = isl::sample_pre_squash(dist, a);
  std::normal_distribution<double> unit(0.0, 1.0);
  const double want = 3.0 + std::exp(1.2 / 2.0) * unit(b);
  CHECK(draw(0) == want);
}

TEST_CASE("mean_action is the squashed mean") {
  isl::Vector low = isl::Vector::Constant(1, -3.0);
  isl::Vector high = isl::Vector::Constant(1, 7.0);
  isl::ActionDistribution dist;
  dist.mean = isl::Vector::Zero(1);
  dist.log_var = isl::Vector::Constant(1, 2.0);
  const isl::Vector a = isl::mean_action(dist, low, high);
  CHECK(a(0) == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("forward rejects mismatched inputs") {
  const isl::PolicySpec spec{3, 1, {4}, isl::Activation::Tanh};
  isl::Rng rng = isl::make_stream(1);
  auto params = isl::init_params(spec, rng);

  CHECK_THROWS_AS(isl::forward(spec, params, isl::Vector::Zero(2).eval()),
                  std::invalid_argument);

  auto short_params = params;
  short_params.layers.pop_back();
  CHECK_THROWS_AS(
      isl::forward(spec, short_params, isl::Vector::Zero(3).eval()),
      std::invalid_argument);

  auto bad_shape = params;
  bad_shape.layers[0].weight.resize(4, 2);
  CHECK_THROWS_AS(isl::forward(spec, bad_shape, isl::Vector::Zero(3).eval()),
                  std::invalid_argument);
}
