#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fddmoea/types.hpp"

namespace fddmoea {

/// Vector-valued function minimized by the optimizers (the acquisition).
using Acquisition = std::function<Vector(std::span<const double>)>;

struct Individual {
  Vector x;
  Vector f;
};

struct Population {
  std::vector<Individual> individuals;
  std::size_t generation = 0;

  std::size_t size() const noexcept { return individuals.size(); }
  std::vector<Vector> decisions() const;
  std::vector<Vector> objectives() const;
};

// ---------------------------------------------------------------------------
// Ranking

/// Deb's fast non-dominated sort. Front 0 is the non-dominated set; indices in
/// each front are ascending.
std::vector<std::vector<std::size_t>> fast_nondominated_sort(const std::vector<Vector>& points);

/// NSGA-II crowding distance of each point within one front. Boundary points
/// of every objective get +infinity.
Vector crowding_distance(const std::vector<Vector>& front);

// ---------------------------------------------------------------------------
// Variation

struct VariationConfig {
  double crossover_eta = 20.0;
  double crossover_prob = 1.0;
  double mutation_eta = 20.0;
  double mutation_prob = 0.0;  // <= 0 selects 1/d
};

/// SBX on [0,1] with the spread-factor draw for each variable supplied by the
/// caller (u = 0.5 reproduces the parents).
std::pair<Vector, Vector> sbx_crossover(std::span<const double> p1, std::span<const double> p2, double eta,
                                        std::span<const double> draws);

std::pair<Vector, Vector> sbx_crossover(std::span<const double> p1, std::span<const double> p2, double eta,
                                        double prob, Rng& rng);

/// Bounded polynomial mutation on [0,1]; each variable mutates with probability `prob`.
Vector polynomial_mutation(std::span<const double> x, double eta, double prob, Rng& rng);

// ---------------------------------------------------------------------------
// Optimizers

enum class OptimizerKind { nsga2, rvea };

OptimizerKind parse_optimizer(std::string_view name);
std::string to_string(OptimizerKind kind);

struct Nsga2Config {
  std::size_t population = 50;
  std::size_t generations = 50;
  VariationConfig variation;
  // Placed in the initial population before it is filled up with a Latin hypercube.
  std::vector<Vector> seeds;
};

Population nsga2_optimize(const Acquisition& af, std::size_t dims, const Nsga2Config& config, Rng& rng);

struct ReferenceVectorSet {
  std::vector<Vector> vectors;
  double adaptation_frequency = 0.1;

  std::size_t size() const noexcept { return vectors.size(); }
};

/// Two-layer Das-Dennis lattice normalized to unit length. The inner layer
/// (skipped when `inner` is zero) is shrunk towards the simplex centroid.
ReferenceVectorSet generate_reference_vectors(std::size_t objectives, std::size_t outer, std::size_t inner = 0);

/// Layer divisions giving 105/126/275/420 vectors for M = 3/5/10/20; other M
/// get a single layer of about one hundred vectors.
std::pair<std::size_t, std::size_t> default_reference_layers(std::size_t objectives);

struct RveaConfig {
  std::size_t generations = 50;
  double penalty_exponent = 2.0;
  double adaptation_frequency = 0.1;
  VariationConfig variation;
  std::vector<Vector> seeds;
};

/**
 * Angle-penalized distance selection. Each point is assigned to the reference
 * vector with the smallest angle to its translated objective vector, and the
 * point with the least APD in every occupied subregion survives.
 *
 * `progress` is (t / t_max)^alpha. Returns the survivors' indices ordered by
 * reference vector.
 */
std::vector<std::size_t> apd_select(const std::vector<Vector>& objectives, const std::vector<Vector>& vectors,
                                    double progress);

Population rvea_optimize(const Acquisition& af, std::size_t dims, const ReferenceVectorSet& reference,
                         const RveaConfig& config, Rng& rng);

struct MoeaConfig {
  OptimizerKind kind = OptimizerKind::nsga2;
  Nsga2Config nsga2;
  RveaConfig rvea;
  // Zero selects default_reference_layers(M).
  std::size_t outer_divisions = 0;
  std::size_t inner_divisions = 0;
};

/// Runs the configured optimizer on `af` over [0,1]^dims.
Population run_moea(const Acquisition& af, std::size_t dims, std::size_t objectives, const MoeaConfig& config,
                    Rng& rng);

}  // namespace fddmoea
