#include "fddmoea/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace fddmoea {

std::vector<std::size_t> nondominated_indices(const std::vector<Vector>& points) {
  if (points.empty()) return {};
  const std::size_t m = points.front().size();
  for (const auto& p : points) {
    if (p.size() != m) throw std::invalid_argument("nondominated_filter: inconsistent objective counts");
  }

  // In lexicographic order a point can only be dominated by (or equal to) an
  // earlier one, and by transitivity checking the kept points suffices.
  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return points[a] < points[b]; });

  std::vector<std::size_t> kept;
  for (auto i : order) {
    const bool rejected = std::any_of(kept.begin(), kept.end(), [&](std::size_t k) {
      return points[k] == points[i] || dominates(points[k], points[i]);
    });
    if (!rejected) kept.push_back(i);
  }
  std::sort(kept.begin(), kept.end());
  return kept;
}

std::vector<Vector> nondominated_filter(const std::vector<Vector>& points) {
  std::vector<Vector> out;
  for (auto i : nondominated_indices(points)) out.push_back(points[i]);
  return out;
}

double igd(const std::vector<Vector>& solutions, const std::vector<Vector>& reference) {
  if (solutions.empty() || reference.empty()) throw std::invalid_argument("igd: empty point set");
  const std::size_t m = reference.front().size();
  for (const auto& s : solutions) {
    if (s.size() != m) throw std::invalid_argument("igd: dimension mismatch");
  }
  double total = 0.0;
  for (const auto& r : reference) {
    if (r.size() != m) throw std::invalid_argument("igd: dimension mismatch");
    double best = std::numeric_limits<double>::infinity();
    for (const auto& s : solutions) best = std::min(best, squared_distance(r, s));
    total += std::sqrt(best);
  }
  return total / static_cast<double>(reference.size());
}

}  // namespace fddmoea
