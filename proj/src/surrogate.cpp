#include "fddmoea/surrogate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "json.hpp"

namespace fddmoea {

KernelForm parse_kernel(std::string_view name) {
  if (name == "squared") return KernelForm::squared;
  if (name == "printed") return KernelForm::printed;
  throw std::invalid_argument("unknown kernel '" + std::string(name) + "', expected squared|printed");
}

std::string to_string(KernelForm kernel) { return kernel == KernelForm::squared ? "squared" : "printed"; }

void RbfnModel::validate() const {
  const std::size_t q = centers.rows();
  if (q == 0) throw std::invalid_argument("RbfnModel: at least one center is required");
  if (spreads.size() != q || weights.rows() != q) throw std::invalid_argument("RbfnModel: center count mismatch");
  if (weights.cols() != biases.size()) throw std::invalid_argument("RbfnModel: output count mismatch");
  auto finite = [](double v) { return std::isfinite(v); };
  for (double s : spreads) {
    if (!(s > 0.0) || !std::isfinite(s)) throw std::invalid_argument("RbfnModel: spreads must be positive");
  }
  if (!std::all_of(centers.data().begin(), centers.data().end(), finite) ||
      !std::all_of(weights.data().begin(), weights.data().end(), finite) ||
      !std::all_of(biases.begin(), biases.end(), finite)) {
    throw std::invalid_argument("RbfnModel: non-finite parameter");
  }
}

std::size_t center_cap(std::size_t objectives, std::size_t dims) {
  const std::size_t total = objectives + dims;
  auto root = static_cast<std::size_t>(std::sqrt(static_cast<double>(total)));
  while (root * root > total) --root;
  while ((root + 1) * (root + 1) <= total) ++root;
  return root + 3;
}

namespace {

std::size_t nearest_center(std::span<const double> point, const Matrix& centers, double* dist = nullptr) {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < centers.rows(); ++c) {
    const double d2 = squared_distance(point, centers.row(c));
    if (d2 < best_d) {
      best_d = d2;
      best = c;
    }
  }
  if (dist) *dist = best_d;
  return best;
}

}  // namespace

Matrix kmeans_centers(const Matrix& x, std::size_t q, Rng& rng, std::size_t max_iterations) {
  const std::size_t n = x.rows();
  if (q == 0) throw std::invalid_argument("kmeans_centers: q must be positive");
  if (n < q) throw std::invalid_argument("kmeans_centers: fewer points than centers");

  std::vector<std::size_t> pick(n);
  std::iota(pick.begin(), pick.end(), 0);
  std::shuffle(pick.begin(), pick.end(), rng);
  pick.resize(q);
  Matrix centers = x.select_rows(pick);

  const std::size_t d = x.cols();
  std::vector<std::size_t> assignment(n, q);
  std::vector<std::size_t> counts(q);
  for (std::size_t iter = 0; iter < max_iterations; ++iter) {
    bool changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t c = nearest_center(x.row(i), centers);
      if (c != assignment[i]) {
        assignment[i] = c;
        changed = true;
      }
    }
    if (!changed) break;

    std::fill(centers.data().begin(), centers.data().end(), 0.0);
    std::fill(counts.begin(), counts.end(), 0);
    for (std::size_t i = 0; i < n; ++i) {
      auto row = centers.row(assignment[i]);
      auto xi = x.row(i);
      for (std::size_t j = 0; j < d; ++j) row[j] += xi[j];
      ++counts[assignment[i]];
    }
    for (std::size_t c = 0; c < q; ++c) {
      if (counts[c] == 0) continue;
      for (auto& v : centers.row(c)) v /= static_cast<double>(counts[c]);
    }
    for (std::size_t c = 0; c < q; ++c) {
      if (counts[c] != 0) continue;
      // Re-seed with the point lying farthest from its own center, taken
      // from a cluster that can spare it.
      std::size_t far = n;
      double far_d = -1.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (counts[assignment[i]] < 2) continue;
        const double d2 = squared_distance(x.row(i), centers.row(assignment[i]));
        if (d2 > far_d) {
          far_d = d2;
          far = i;
        }
      }
      if (far == n) break;
      --counts[assignment[far]];
      assignment[far] = c;
      counts[c] = 1;
      std::copy(x.row(far).begin(), x.row(far).end(), centers.row(c).begin());
    }
  }
  return centers;
}

double within_cluster_ss(const Matrix& x, const Matrix& centers) {
  double total = 0.0;
  for (std::size_t i = 0; i < x.rows(); ++i) {
    double d2 = 0.0;
    nearest_center(x.row(i), centers, &d2);
    total += d2;
  }
  return total;
}

Vector set_spreads(const Matrix& centers) {
  const std::size_t q = centers.rows();
  if (q == 0) throw std::invalid_argument("set_spreads: no centers");
  double max_d2 = 0.0;
  for (std::size_t i = 0; i < q; ++i) {
    for (std::size_t j = i + 1; j < q; ++j) max_d2 = std::max(max_d2, squared_distance(centers.row(i), centers.row(j)));
  }
  if (q == 1 || max_d2 == 0.0) return Vector(q, 1.0);
  return Vector(q, std::sqrt(max_d2) / std::sqrt(2.0 * static_cast<double>(q)));
}

void activations(const RbfnModel& model, std::span<const double> x, std::span<double> phi) {
  const std::size_t q = model.num_centers();
  if (x.size() != model.dims()) throw std::invalid_argument("predict: input dimension mismatch");
  for (std::size_t i = 0; i < q; ++i) {
    const double d2 = squared_distance(x, model.centers.row(i));
    const double s = model.spreads[i];
    const double numerator = model.kernel == KernelForm::squared ? d2 : std::sqrt(d2);
    phi[i] = std::exp(-numerator / (2.0 * s * s));
  }
}

void predict_into(const RbfnModel& model, std::span<const double> x, std::span<double> phi, std::span<double> out) {
  activations(model, x, phi);
  const std::size_t m = model.objectives();
  std::copy(model.biases.begin(), model.biases.end(), out.begin());
  for (std::size_t i = 0; i < model.num_centers(); ++i) {
    const auto w = model.weights.row(i);
    for (std::size_t j = 0; j < m; ++j) out[j] += phi[i] * w[j];
  }
}

Vector predict(const RbfnModel& model, std::span<const double> x) {
  Vector phi(model.num_centers());
  Vector out(model.objectives());
  predict_into(model, x, phi, out);
  return out;
}

double training_loss(const RbfnModel& model, const Dataset& data) {
  Vector phi(model.num_centers());
  Vector out(model.objectives());
  double loss = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    predict_into(model, data.x.row(i), phi, out);
    loss += 0.5 * squared_distance(out, data.y.row(i));
  }
  return loss;
}

void loss_gradient(const RbfnModel& model, const Dataset& data, std::span<const std::size_t> batch, Matrix& grad_w,
                   Vector& grad_b) {
  const std::size_t q = model.num_centers();
  const std::size_t m = model.objectives();
  grad_w = Matrix(q, m);
  grad_b.assign(m, 0.0);
  Vector phi(q);
  Vector out(m);
  const double scale = 1.0 / static_cast<double>(batch.size());
  for (auto idx : batch) {
    predict_into(model, data.x.row(idx), phi, out);
    const auto y = data.y.row(idx);
    for (std::size_t j = 0; j < m; ++j) {
      const double r = (out[j] - y[j]) * scale;
      grad_b[j] += r;
      for (std::size_t i = 0; i < q; ++i) grad_w(i, j) += phi[i] * r;
    }
  }
}

RbfnModel sgd_train(RbfnModel model, const Dataset& data, const TrainingConfig& config, Rng& rng) {
  if (data.empty()) throw std::invalid_argument("sgd_train: empty dataset");
  if (!(config.learning_rate >= 0.0) || !std::isfinite(config.learning_rate)) {
    throw std::invalid_argument("sgd_train: learning rate must be a finite non-negative number");
  }
  if (config.batch_size == 0) throw std::invalid_argument("sgd_train: batch size must be positive");
  if (data.x.cols() != model.dims() || data.y.cols() != model.objectives()) {
    throw std::invalid_argument("sgd_train: dataset shape does not match the model");
  }

  const std::size_t n = data.size();
  const std::size_t q = model.num_centers();
  const std::size_t m = model.objectives();
  const double eta = config.learning_rate;
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Vector phi(q);
  Vector out(m);
  Matrix grad_w(q, m);
  Vector grad_b(m);

  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t start = 0; start < n; start += config.batch_size) {
      const std::size_t stop = std::min(n, start + config.batch_size);
      const double scale = 1.0 / static_cast<double>(stop - start);
      std::fill(grad_w.data().begin(), grad_w.data().end(), 0.0);
      std::fill(grad_b.begin(), grad_b.end(), 0.0);
      for (std::size_t k = start; k < stop; ++k) {
        const std::size_t idx = order[k];
        predict_into(model, data.x.row(idx), phi, out);
        const auto y = data.y.row(idx);
        for (std::size_t j = 0; j < m; ++j) out[j] = (out[j] - y[j]) * scale;
        for (std::size_t i = 0; i < q; ++i) {
          auto g = grad_w.row(i);
          for (std::size_t j = 0; j < m; ++j) g[j] += phi[i] * out[j];
        }
        for (std::size_t j = 0; j < m; ++j) grad_b[j] += out[j];
      }
      auto& w = model.weights.data();
      for (std::size_t t = 0; t < w.size(); ++t) w[t] -= eta * grad_w.data()[t];
      for (std::size_t j = 0; j < m; ++j) model.biases[j] -= eta * grad_b[j];
    }
  }
  return model;
}

RbfnModel fit_local(const Dataset& data, std::size_t q, const TrainingConfig& config, Rng& rng) {
  if (data.empty()) throw std::invalid_argument("fit_local: empty dataset");
  if (q == 0) throw std::invalid_argument("fit_local: q must be positive");
  const std::size_t n = data.size();
  const std::size_t m = data.y.cols();
  const std::size_t centers = std::min(q, n);

  RbfnModel model;
  model.kernel = config.kernel;
  model.centers = kmeans_centers(data.x, centers, rng);
  model.spreads = set_spreads(model.centers);
  model.weights = Matrix(centers, m);
  std::uniform_real_distribution<double> init(-0.1, 0.1);
  for (auto& w : model.weights.data()) w = init(rng);
  model.biases.assign(m, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) model.biases[j] += data.y(i, j);
  }
  for (auto& b : model.biases) b /= static_cast<double>(n);
  return sgd_train(std::move(model), data, config, rng);
}

namespace {

nlohmann::json matrix_json(const Matrix& m) {
  auto rows = nlohmann::json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) rows.push_back(m.row_vector(i));
  return rows;
}

Matrix json_matrix(const nlohmann::json& j) {
  return Matrix::from_rows(j.get<std::vector<Vector>>());
}

}  // namespace

std::string model_to_json(const RbfnModel& model) {
  nlohmann::json j;
  j["centers"] = matrix_json(model.centers);
  j["spreads"] = model.spreads;
  j["weights"] = matrix_json(model.weights);
  j["biases"] = model.biases;
  if (model.kernel != KernelForm::squared) j["kernel"] = to_string(model.kernel);
  return j.dump();
}

RbfnModel model_from_json(std::string_view text) {
  const auto j = nlohmann::json::parse(text);
  RbfnModel model;
  model.centers = json_matrix(j.at("centers"));
  model.spreads = j.at("spreads").get<Vector>();
  model.weights = json_matrix(j.at("weights"));
  model.biases = j.at("biases").get<Vector>();
  if (j.contains("kernel")) model.kernel = parse_kernel(j.at("kernel").get<std::string>());
  model.validate();
  return model;
}

}  // namespace fddmoea
