#include <cmath>

#include "doctest.h"
#include "fddmoea/acquisition.hpp"
#include "oracles.hpp"

using namespace fddmoea;

namespace {

RbfnModel constant_model(std::size_t d, const Vector& biases) {
  RbfnModel m;
  m.centers = Matrix(1, d, 0.5);
  m.spreads = {1.0};
  m.weights = Matrix(1, biases.size(), 0.0);
  m.biases = biases;
  return m;
}

RbfnModel random_model(std::size_t q, std::size_t d, std::size_t m, Rng& rng) {
  RbfnModel model;
  model.centers = Matrix(q, d);
  for (auto& v : model.centers.data()) v = uniform01(rng);
  model.spreads.assign(q, 0.5);
  model.weights = Matrix(q, m);
  for (auto& v : model.weights.data()) v = uniform01(rng) - 0.5;
  model.biases.resize(m);
  for (auto& b : model.biases) b = uniform01(rng);
  return model;
}

}  // namespace

TEST_CASE("mean is the global model's prediction") {
  auto rng = make_rng(1);
  const auto global = random_model(3, 2, 2, rng);
  const FederatedLcb with_locals(global, {random_model(3, 2, 2, rng), random_model(3, 2, 2, rng)});
  const FederatedLcb same_locals(global, {global, global});
  for (const auto& x : oracle::random_points(10, 2, rng)) {
    CHECK(with_locals.mean(x) == predict(global, x));
    CHECK(same_locals.mean(x) == with_locals.mean(x));
  }

  RbfnModel one;
  one.centers = Matrix::from_rows({{0.0, 0.0}});
  one.spreads = {0.5};
  one.weights = Matrix::from_rows({{3.0}});
  one.biases = {-1.0};
  const FederatedLcb hand(one, {one, one});
  CHECK(hand.mean(Vector{0.5, 0.5})[0] == doctest::Approx(3.0 * std::exp(-0.5 / 0.5) - 1.0));
}

TEST_CASE("variance of identical locals is zero") {
  auto rng = make_rng(2);
  const auto g = random_model(4, 3, 3, rng);
  const FederatedLcb af(g, {g, g, g});
  for (const auto& x : oracle::random_points(10, 3, rng)) {
    CHECK(af.variance(x) == Vector{0.0, 0.0, 0.0});
    CHECK(af.lcb(x) == af.mean(x));
  }
}

TEST_CASE("two locals at plus and minus delta") {
  const double delta = 0.3;
  const FederatedLcb af(constant_model(2, {1.0, 2.0}),
                        {constant_model(2, {1.0 + delta, 2.0}), constant_model(2, {1.0 - delta, 2.0})});
  const auto var = af.variance(Vector{0.1, 0.9});
  CHECK(var[0] == doctest::Approx(2 * delta * delta));
  CHECK(var[1] == 0.0);
}

TEST_CASE("variance matches a direct deviation sum and ignores local order") {
  auto rng = make_rng(3);
  const auto g = random_model(3, 2, 2, rng);
  std::vector<RbfnModel> locals;
  for (int k = 0; k < 5; ++k) locals.push_back(random_model(3, 2, 2, rng));
  const FederatedLcb af(g, locals);
  auto reversed = locals;
  std::reverse(reversed.begin(), reversed.end());
  const FederatedLcb af_rev(g, reversed);
  for (const auto& x : oracle::random_points(10, 2, rng)) {
    const auto mu = predict(g, x);
    Vector expect(2, 0.0);
    for (const auto& l : locals) {
      const auto y = predict(l, x);
      for (std::size_t j = 0; j < 2; ++j) expect[j] += (y[j] - mu[j]) * (y[j] - mu[j]);
    }
    const auto var = af.variance(x);
    const auto var_rev = af_rev.variance(x);
    for (std::size_t j = 0; j < 2; ++j) {
      CHECK(var[j] == doctest::Approx(expect[j] / 4.0).epsilon(1e-13));
      CHECK(var_rev[j] == doctest::Approx(var[j]).epsilon(1e-13));
    }
  }
}

TEST_CASE("lcb arithmetic") {
  // Locals at 1 +- 0.25 / sqrt(2) give a variance of 0.0625, so s = 0.25.
  const double dev = 0.25 / std::sqrt(2.0);
  const FederatedLcb af(constant_model(1, {1.0}), {constant_model(1, {1.0 + dev}), constant_model(1, {1.0 - dev})});
  CHECK(af.lcb(Vector{0.3})[0] == doctest::Approx(0.5));
  const FederatedLcb greedy(constant_model(1, {1.0}),
                            {constant_model(1, {1.0 + dev}), constant_model(1, {1.0 - dev})}, 0.0);
  CHECK(greedy.lcb(Vector{0.3})[0] == 1.0);
}

TEST_CASE("lcb never exceeds the mean and falls with alpha") {
  auto rng = make_rng(4);
  const auto g = random_model(3, 3, 2, rng);
  std::vector<RbfnModel> locals;
  for (int k = 0; k < 4; ++k) locals.push_back(random_model(3, 3, 2, rng));
  for (const auto& x : oracle::random_points(20, 3, rng)) {
    const auto mu = predict(g, x);
    Vector prev = mu;
    for (double alpha : {0.0, 0.5, 1.0, 2.0, 4.0}) {
      const auto l = FederatedLcb(g, locals, alpha).lcb(x);
      for (std::size_t j = 0; j < 2; ++j) {
        CHECK(l[j] <= mu[j]);
        CHECK(l[j] <= prev[j]);
      }
      prev = l;
    }
  }
}

TEST_CASE("construction checks") {
  auto rng = make_rng(5);
  const auto g = random_model(3, 2, 2, rng);
  CHECK_THROWS_AS(FederatedLcb(g, {g, g}, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(FederatedLcb(g, {g, random_model(3, 4, 2, rng)}), std::invalid_argument);
  const FederatedLcb lone(g, {g});
  CHECK_THROWS_AS(lone.variance(Vector{0.1, 0.1}), std::invalid_argument);
  CHECK_THROWS_AS(FederatedLcb(g, {g, g}).mean(Vector{0.1}), std::invalid_argument);
}
