#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fddmoea/surrogate.hpp"
#include "fddmoea/types.hpp"

namespace fddmoea {

/**
 * Lower confidence bound built from a federation's models: the aggregated
 * global model predicts the mean, and the spread of the uploaded local models
 * around it estimates the uncertainty, objective by objective.
 */
class FederatedLcb {
 public:
  FederatedLcb(RbfnModel global, std::vector<RbfnModel> locals, double alpha = 2.0);

  /// Prediction of the global model.
  Vector mean(std::span<const double> x) const;

  /// Per-objective sample variance of the local predictions about the global
  /// mean, normalized by (number of locals - 1). Needs at least two locals.
  Vector variance(std::span<const double> x) const;

  /// mean - alpha * sqrt(variance), per objective.
  Vector lcb(std::span<const double> x) const;

  Vector operator()(std::span<const double> x) const { return lcb(x); }

  const RbfnModel& global() const noexcept { return global_; }
  const std::vector<RbfnModel>& locals() const noexcept { return locals_; }
  double alpha() const noexcept { return alpha_; }
  std::size_t dims() const noexcept { return global_.dims(); }
  std::size_t objectives() const noexcept { return global_.objectives(); }

 private:
  void mean_and_variance(std::span<const double> x, Vector& mean, Vector& var) const;

  RbfnModel global_;
  std::vector<RbfnModel> locals_;
  double alpha_;
};

}  // namespace fddmoea
