#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>

#include "fddmoea/types.hpp"

namespace fddmoea {

/// Gaussian kernel exponent. `squared` is exp(-|x-c|^2 / (2 s^2)); `printed`
/// uses the unsquared norm exp(-|x-c| / (2 s^2)).
enum class KernelForm { squared, printed };

KernelForm parse_kernel(std::string_view name);
std::string to_string(KernelForm kernel);

/// Radial basis function network [w, s, c, b]: q Gaussian units over d inputs
/// feeding M linear outputs.
struct RbfnModel {
  Matrix centers;  // q x d
  Vector spreads;  // q
  Matrix weights;  // q x M
  Vector biases;   // M
  KernelForm kernel = KernelForm::squared;

  std::size_t num_centers() const noexcept { return centers.rows(); }
  std::size_t dims() const noexcept { return centers.cols(); }
  std::size_t objectives() const noexcept { return biases.size(); }

  /// Throws std::invalid_argument when shapes disagree, a spread is not
  /// strictly positive, or any entry is non-finite.
  void validate() const;

  bool operator==(const RbfnModel&) const = default;
};

/// Paired decision vectors and objective vectors.
struct Dataset {
  Matrix x;  // n x d
  Matrix y;  // n x M

  std::size_t size() const noexcept { return x.rows(); }
  bool empty() const noexcept { return x.rows() == 0; }
  void append(std::span<const double> xi, std::span<const double> yi) {
    x.append_row(xi);
    y.append_row(yi);
  }
};

struct TrainingConfig {
  std::size_t epochs = 20;
  double learning_rate = 0.06;
  std::size_t batch_size = 1;
  KernelForm kernel = KernelForm::squared;
};

/// Center cap floor(sqrt(M + d)) + 3.
std::size_t center_cap(std::size_t objectives, std::size_t dims);

/**
 * Lloyd's k-means on the rows of `x`.
 *
 * Seeded with q distinct rows drawn at random; a cluster that empties is
 * re-seeded with the point farthest from its current center. Stops at an
 * assignment fixpoint or after `max_iterations`.
 */
Matrix kmeans_centers(const Matrix& x, std::size_t q, Rng& rng, std::size_t max_iterations = 100);

/// Sum over points of the squared distance to the nearest center.
double within_cluster_ss(const Matrix& x, const Matrix& centers);

/// Common spread d_max / sqrt(2q); falls back to 1 when q = 1 or all centers coincide.
Vector set_spreads(const Matrix& centers);

/// Hidden-layer activations of `model` at `x`, written into `phi` (size q).
void activations(const RbfnModel& model, std::span<const double> x, std::span<double> phi);

/// Network output at `x` using caller-provided scratch for the activations.
void predict_into(const RbfnModel& model, std::span<const double> x, std::span<double> phi, std::span<double> out);

Vector predict(const RbfnModel& model, std::span<const double> x);

/// Squared-error loss summed over the dataset, 1/2 * sum_i |y_hat_i - y_i|^2.
double training_loss(const RbfnModel& model, const Dataset& data);

/// Analytic gradient of 1/(2B) * sum |y_hat - y|^2 over the rows in `batch`
/// with respect to the weights (q x M) and the biases (M).
void loss_gradient(const RbfnModel& model, const Dataset& data, std::span<const std::size_t> batch, Matrix& grad_w,
                   Vector& grad_b);

/**
 * Minibatch SGD on the output weights and biases; centers and spreads stay
 * fixed. Each epoch visits the rows in a freshly shuffled order.
 */
RbfnModel sgd_train(RbfnModel model, const Dataset& data, const TrainingConfig& config, Rng& rng);

/// K-means centers, spread heuristic, small random weights, mean-valued
/// biases, then SGD. Uses min(q, n) centers.
RbfnModel fit_local(const Dataset& data, std::size_t q, const TrainingConfig& config, Rng& rng);

/// Flat JSON object {"centers", "spreads", "weights", "biases"} (plus "kernel"
/// when it is not the squared form).
std::string model_to_json(const RbfnModel& model);
RbfnModel model_from_json(std::string_view text);

}  // namespace fddmoea
