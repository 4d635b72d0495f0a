#pragma once

#include <vector>

#include "fddmoea/types.hpp"

namespace fddmoea {

/// Non-dominated subset of `points` in input order. Exact duplicates are kept once.
std::vector<Vector> nondominated_filter(const std::vector<Vector>& points);

/// Indices (ascending) of the points kept by nondominated_filter.
std::vector<std::size_t> nondominated_indices(const std::vector<Vector>& points);

/// Inverted generational distance: mean over reference points of the distance
/// to the closest solution. Throws on empty input or mismatched dimensions.
double igd(const std::vector<Vector>& solutions, const std::vector<Vector>& reference);

}  // namespace fddmoea
