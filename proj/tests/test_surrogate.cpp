#include <algorithm>
#include <cmath>
#include <numeric>

#include "doctest.h"
#include "fddmoea/surrogate.hpp"
#include "oracles.hpp"

using namespace fddmoea;

namespace {

RbfnModel random_model(std::size_t q, std::size_t d, std::size_t m, Rng& rng) {
  RbfnModel model;
  model.centers = Matrix(q, d);
  for (auto& v : model.centers.data()) v = uniform01(rng);
  model.spreads.resize(q);
  for (auto& s : model.spreads) s = 0.3 + uniform01(rng);
  model.weights = Matrix(q, m);
  for (auto& v : model.weights.data()) v = uniform01(rng) - 0.5;
  model.biases.resize(m);
  for (auto& b : model.biases) b = uniform01(rng);
  return model;
}

Dataset random_dataset(std::size_t n, std::size_t d, std::size_t m, Rng& rng) {
  Dataset data;
  for (std::size_t i = 0; i < n; ++i) {
    Vector x(d), y(m);
    for (auto& v : x) v = uniform01(rng);
    for (auto& v : y) v = uniform01(rng);
    data.append(x, y);
  }
  return data;
}

}  // namespace

TEST_CASE("center cap uses the floor of the square root") {
  CHECK(center_cap(3, 10) == 6);
  CHECK(center_cap(3, 80) == 12);
  CHECK(center_cap(5, 20) == 8);
  CHECK(center_cap(20, 30) == 10);
}

TEST_CASE("k-means separates two obvious pairs") {
  const auto x = Matrix::from_rows({{0, 0}, {0, 0.1}, {5, 5}, {5, 5.1}});
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto rng = make_rng(seed);
    auto c = kmeans_centers(x, 2, rng).to_rows();
    std::sort(c.begin(), c.end());
    CHECK(c[0][0] == doctest::Approx(0.0));
    CHECK(c[0][1] == doctest::Approx(0.05));
    CHECK(c[1][0] == doctest::Approx(5.0));
    CHECK(c[1][1] == doctest::Approx(5.05));
  }
}

TEST_CASE("k-means with q = n returns the points") {
  auto rng = make_rng(1);
  const auto x = Matrix::from_rows(oracle::random_points(7, 3, rng));
  auto c = kmeans_centers(x, 7, rng).to_rows();
  auto rows = x.to_rows();
  std::sort(c.begin(), c.end());
  std::sort(rows.begin(), rows.end());
  CHECK(c == rows);
  CHECK_THROWS_AS(kmeans_centers(x, 8, rng), std::invalid_argument);
  CHECK_THROWS_AS(kmeans_centers(x, 0, rng), std::invalid_argument);
}

TEST_CASE("k-means beats picking data rows as centers") {
  auto rng = make_rng(5);
  const auto x = Matrix::from_rows(oracle::random_points(50, 10, rng));
  const double wcss = within_cluster_ss(x, kmeans_centers(x, 8, rng));
  double best_random = std::numeric_limits<double>::infinity();
  for (int rep = 0; rep < 10; ++rep) {
    std::vector<std::size_t> idx(50);
    std::iota(idx.begin(), idx.end(), 0);
    std::shuffle(idx.begin(), idx.end(), rng);
    idx.resize(8);
    best_random = std::min(best_random, within_cluster_ss(x, x.select_rows(idx)));
  }
  CHECK(wcss <= best_random);
}

TEST_CASE("spread heuristic") {
  CHECK(set_spreads(Matrix::from_rows({{0.3, 0.3}})) == Vector{1.0});
  const auto two = set_spreads(Matrix::from_rows({{0, 0}, {2, 0}}));
  CHECK(two[0] == doctest::Approx(1.0));
  CHECK(two[1] == doctest::Approx(1.0));

  auto rng = make_rng(8);
  const auto pts = oracle::random_points(5, 4, rng);
  double dmax = 0.0;
  for (const auto& a : pts) {
    for (const auto& b : pts) {
      double s = 0.0;
      for (std::size_t k = 0; k < 4; ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
      dmax = std::max(dmax, std::sqrt(s));
    }
  }
  for (double s : set_spreads(Matrix::from_rows(pts))) CHECK(s == doctest::Approx(dmax / std::sqrt(10.0)));
}

TEST_CASE("forward pass") {
  RbfnModel unit;
  unit.centers = Matrix::from_rows({{0.0, 0.0, 0.0}});
  unit.spreads = {1.0};
  unit.weights = Matrix::from_rows({{1.0, 1.0}});
  unit.biases = {0.0, 0.0};
  CHECK(predict(unit, Vector{0, 0, 0}) == Vector{1.0, 1.0});

  unit.biases = {0.25, -3.0};
  const auto far = predict(unit, Vector{1e3, -1e3, 1e3});
  CHECK(far[0] == doctest::Approx(0.25));
  CHECK(far[1] == doctest::Approx(-3.0));

  // Two centers, one output, worked by hand.
  RbfnModel two;
  two.centers = Matrix::from_rows({{0.0, 0.0}, {1.0, 1.0}});
  two.spreads = {0.5, 2.0};
  two.weights = Matrix::from_rows({{2.0}, {-1.0}});
  two.biases = {0.5};
  const Vector x{0.5, 0.0};
  const double phi1 = std::exp(-0.25 / (2 * 0.25));
  const double phi2 = std::exp(-1.25 / (2 * 4.0));
  CHECK(predict(two, x)[0] == doctest::Approx(2 * phi1 - phi2 + 0.5).epsilon(1e-14));

  two.kernel = KernelForm::printed;
  const double p1 = std::exp(-0.5 / (2 * 0.25));
  const double p2 = std::exp(-std::sqrt(1.25) / (2 * 4.0));
  CHECK(predict(two, x)[0] == doctest::Approx(2 * p1 - p2 + 0.5).epsilon(1e-14));
}

TEST_CASE("prediction is invariant under permuting the center triples") {
  auto rng = make_rng(12);
  const auto model = random_model(6, 4, 3, rng);
  std::vector<std::size_t> perm{3, 0, 5, 1, 4, 2};
  RbfnModel shuffled = model;
  shuffled.centers = model.centers.select_rows(perm);
  shuffled.weights = model.weights.select_rows(perm);
  for (std::size_t i = 0; i < 6; ++i) shuffled.spreads[i] = model.spreads[perm[i]];
  for (const auto& x : oracle::random_points(20, 4, rng)) {
    const auto a = predict(model, x);
    const auto b = predict(shuffled, x);
    for (std::size_t j = 0; j < 3; ++j) CHECK(a[j] == doctest::Approx(b[j]).epsilon(1e-13));
  }
}

TEST_CASE("analytic gradient matches central differences") {
  auto rng = make_rng(21);
  for (int trial = 0; trial < 10; ++trial) {
    auto model = random_model(4, 3, 2, rng);
    const auto data = random_dataset(1, 3, 2, rng);
    Matrix gw;
    Vector gb;
    const std::size_t row = 0;
    loss_gradient(model, data, std::span<const std::size_t>(&row, 1), gw, gb);
    const double h = 1e-6;
    for (auto& w : model.weights.data()) {
      const std::size_t k = static_cast<std::size_t>(&w - model.weights.data().data());
      const double orig = w;
      w = orig + h;
      const double up = training_loss(model, data);
      w = orig - h;
      const double down = training_loss(model, data);
      w = orig;
      const double fd = (up - down) / (2 * h);
      CHECK(std::abs(gw.data()[k] - fd) <= 1e-5 * std::max(1.0, std::abs(fd)));
    }
    for (std::size_t j = 0; j < model.biases.size(); ++j) {
      const double orig = model.biases[j];
      model.biases[j] = orig + h;
      const double up = training_loss(model, data);
      model.biases[j] = orig - h;
      const double down = training_loss(model, data);
      model.biases[j] = orig;
      const double fd = (up - down) / (2 * h);
      CHECK(std::abs(gb[j] - fd) <= 1e-5 * std::max(1.0, std::abs(fd)));
    }
  }
}

TEST_CASE("one SGD step is w - eta * phi (y_hat - y)") {
  auto rng = make_rng(4);
  const auto model = random_model(3, 2, 2, rng);
  const auto data = random_dataset(1, 2, 2, rng);
  TrainingConfig cfg;
  cfg.epochs = 1;
  const auto trained = sgd_train(model, data, cfg, rng);
  Vector phi(3);
  activations(model, data.x.row(0), phi);
  const auto yhat = predict(model, data.x.row(0));
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 2; ++j) {
      const double expect = model.weights(i, j) - 0.06 * phi[i] * (yhat[j] - data.y(0, j));
      CHECK(trained.weights(i, j) == doctest::Approx(expect).epsilon(1e-14));
    }
  }
  for (std::size_t j = 0; j < 2; ++j) {
    CHECK(trained.biases[j] == doctest::Approx(model.biases[j] - 0.06 * (yhat[j] - data.y(0, j))).epsilon(1e-14));
  }
  CHECK(trained.centers == model.centers);
  CHECK(trained.spreads == model.spreads);
}

TEST_CASE("training leaves an exact fit, no epochs and a zero step unchanged") {
  auto rng = make_rng(6);
  const auto model = random_model(4, 3, 2, rng);
  auto data = random_dataset(15, 3, 2, rng);
  Dataset exact;
  for (std::size_t i = 0; i < data.size(); ++i) exact.append(data.x.row(i), predict(model, data.x.row(i)));
  const Dataset before = exact;
  TrainingConfig cfg;
  const auto fit = sgd_train(model, exact, cfg, rng);
  CHECK(exact.x == before.x);
  CHECK(exact.y == before.y);
  for (std::size_t k = 0; k < model.weights.data().size(); ++k)
    CHECK(std::abs(fit.weights.data()[k] - model.weights.data()[k]) < 1e-14);
  for (std::size_t j = 0; j < 2; ++j) CHECK(std::abs(fit.biases[j] - model.biases[j]) < 1e-14);

  cfg.epochs = 0;
  CHECK(sgd_train(model, data, cfg, rng) == model);
  cfg.epochs = 20;
  cfg.learning_rate = 0.0;
  CHECK(sgd_train(model, data, cfg, rng) == model);

  cfg.learning_rate = -0.1;
  CHECK_THROWS_AS(sgd_train(model, data, cfg, rng), std::invalid_argument);
  cfg.learning_rate = 0.06;
  CHECK_THROWS_AS(sgd_train(model, Dataset{}, cfg, rng), std::invalid_argument);
  CHECK_THROWS_AS(sgd_train(model, random_dataset(3, 5, 2, rng), cfg, rng), std::invalid_argument);
}

TEST_CASE("minibatches") {
  auto rng = make_rng(16);
  const auto model = random_model(4, 3, 2, rng);
  const auto data = random_dataset(10, 3, 2, rng);
  TrainingConfig cfg;
  cfg.batch_size = 4;
  cfg.epochs = 50;
  const auto fit = sgd_train(model, data, cfg, rng);
  CHECK(training_loss(fit, data) < training_loss(model, data));
  cfg.batch_size = 0;
  CHECK_THROWS_AS(sgd_train(model, data, cfg, rng), std::invalid_argument);
}

TEST_CASE("fit_local on a single sample") {
  auto rng = make_rng(2);
  Dataset data;
  data.append(Vector{0.2, 0.7}, Vector{1.5, -0.5});
  TrainingConfig cfg;
  const auto model = fit_local(data, 6, cfg, rng);
  CHECK(model.num_centers() == 1);
  CHECK(model.centers.row_vector(0) == Vector{0.2, 0.7});
  const auto y = predict(model, Vector{0.2, 0.7});
  // Initial residual is the weight, at most 0.1; each step shrinks it by 1 - 2 eta.
  CHECK(std::abs(y[0] - 1.5) < 0.1 * std::pow(0.88, 20) + 1e-12);
  CHECK(std::abs(y[1] + 0.5) < 0.1 * std::pow(0.88, 20) + 1e-12);
}

TEST_CASE("fit_local reduces error on a linear target") {
  auto rng = make_rng(30);
  Dataset data;
  for (const auto& x : oracle::random_points(30, 4, rng)) {
    data.append(x, Vector{x[0] + 2 * x[1] - x[2], 0.5 * x[3] + 0.1});
  }
  TrainingConfig cfg;
  cfg.epochs = 200;
  auto init_rng = make_rng(31);
  TrainingConfig none = cfg;
  none.epochs = 0;
  const double initial = training_loss(fit_local(data, 8, none, init_rng), data);
  auto train_rng = make_rng(31);
  const auto fit = fit_local(data, 8, cfg, train_rng);
  CHECK(fit.num_centers() == 8);
  CHECK(training_loss(fit, data) < initial);
  CHECK(std::isfinite(training_loss(fit, data)));
}

TEST_CASE("JSON round trip") {
  auto rng = make_rng(40);
  auto model = random_model(3, 4, 2, rng);
  CHECK(model_from_json(model_to_json(model)) == model);
  CHECK(model_to_json(model).find("kernel") == std::string::npos);
  model.kernel = KernelForm::printed;
  CHECK(model_from_json(model_to_json(model)) == model);
  CHECK_THROWS(model_from_json("{\"centers\": [[0]]}"));
  CHECK(parse_kernel("printed") == KernelForm::printed);
  CHECK_THROWS_AS(parse_kernel("cubic"), std::invalid_argument);
}

TEST_CASE("validate catches broken models") {
  auto rng = make_rng(41);
  auto model = random_model(3, 2, 2, rng);
  CHECK_NOTHROW(model.validate());
  model.spreads[1] = 0.0;
  CHECK_THROWS_AS(model.validate(), std::invalid_argument);
  model.spreads[1] = 1.0;
  model.biases.push_back(0.0);
  CHECK_THROWS_AS(model.validate(), std::invalid_argument);
}
