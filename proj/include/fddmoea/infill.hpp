#pragma once

#include <cstddef>
#include <vector>

#include "fddmoea/moea.hpp"
#include "fddmoea/types.hpp"

namespace fddmoea {

struct InfillConfig {
  std::size_t count = 5;
  std::size_t max_restarts = 5;
  double threshold = 1e-6;
};

/// Greedy scan in input order; a point closer than `threshold` to an already
/// kept point is dropped.
std::vector<Vector> remove_redundant(const std::vector<Vector>& points, double threshold = 1e-6);

/// k-means the points into `count` clusters and return, for each centroid in
/// turn, the nearest point not already chosen. Requires points.size() >= count.
std::vector<Vector> cluster_representatives(const std::vector<Vector>& points, std::size_t count, Rng& rng);

/**
 * Picks `config.count` new decision vectors from the optimizer's final
 * population(s).
 *
 * Duplicates are removed, the optimizer is restarted while fewer than `count`
 * distinct solutions have been collected (at most `max_restarts` times), and
 * the survivors are clustered. Any pick within `threshold` of an entry in
 * `evaluated` is dropped, and the shortfall is filled with Latin hypercube
 * points, so the result always has exactly `count` entries.
 */
std::vector<Vector> select_candidates(const Acquisition& af, std::size_t dims, std::size_t objectives,
                                      const MoeaConfig& moea, const InfillConfig& config, Rng& rng,
                                      const std::vector<Vector>& evaluated = {});

}  // namespace fddmoea
