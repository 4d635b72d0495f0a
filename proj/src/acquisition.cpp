#include "fddmoea/acquisition.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fddmoea {

FederatedLcb::FederatedLcb(RbfnModel global, std::vector<RbfnModel> locals, double alpha)
    : global_(std::move(global)), locals_(std::move(locals)), alpha_(alpha) {
  if (!(alpha_ >= 0.0)) throw std::invalid_argument("FederatedLcb: alpha must be non-negative");
  global_.validate();
  for (const auto& local : locals_) {
    if (local.dims() != global_.dims() || local.objectives() != global_.objectives()) {
      throw std::invalid_argument("FederatedLcb: local model shape differs from the global model");
    }
  }
}

Vector FederatedLcb::mean(std::span<const double> x) const { return predict(global_, x); }

void FederatedLcb::mean_and_variance(std::span<const double> x, Vector& mean, Vector& var) const {
  if (locals_.size() < 2) throw std::invalid_argument("FederatedLcb: variance needs at least two local models");
  const std::size_t m = objectives();
  std::size_t q_max = global_.num_centers();
  for (const auto& local : locals_) q_max = std::max(q_max, local.num_centers());
  Vector phi(q_max);
  Vector out(m);
  mean.assign(m, 0.0);
  predict_into(global_, x, phi, mean);
  var.assign(m, 0.0);
  for (const auto& local : locals_) {
    predict_into(local, x, phi, out);
    for (std::size_t j = 0; j < m; ++j) {
      const double dev = out[j] - mean[j];
      var[j] += dev * dev;
    }
  }
  const double denom = static_cast<double>(locals_.size() - 1);
  for (auto& v : var) v /= denom;
}

Vector FederatedLcb::variance(std::span<const double> x) const {
  Vector mean;
  Vector var;
  mean_and_variance(x, mean, var);
  return var;
}

Vector FederatedLcb::lcb(std::span<const double> x) const {
  Vector mean;
  Vector var;
  mean_and_variance(x, mean, var);
  for (std::size_t j = 0; j < mean.size(); ++j) mean[j] -= alpha_ * std::sqrt(var[j]);
  return mean;
}

}  // namespace fddmoea
