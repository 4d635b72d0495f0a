#include "fddmoea/infill.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "fddmoea/sampling.hpp"
#include "fddmoea/surrogate.hpp"

namespace fddmoea {

namespace {

bool near_any(const Vector& p, const std::vector<Vector>& set, double threshold) {
  const double t2 = threshold * threshold;
  return std::any_of(set.begin(), set.end(), [&](const Vector& s) { return squared_distance(p, s) < t2; });
}

}  // namespace

std::vector<Vector> remove_redundant(const std::vector<Vector>& points, double threshold) {
  std::vector<Vector> kept;
  for (const auto& p : points) {
    if (!near_any(p, kept, threshold)) kept.push_back(p);
  }
  return kept;
}

std::vector<Vector> cluster_representatives(const std::vector<Vector>& points, std::size_t count, Rng& rng) {
  if (count == 0) return {};
  if (points.size() < count) throw std::invalid_argument("cluster_representatives: fewer points than clusters");
  const Matrix data = Matrix::from_rows(points);
  const Matrix centers = kmeans_centers(data, count, rng);
  std::vector<bool> taken(points.size(), false);
  std::vector<Vector> out;
  out.reserve(count);
  for (std::size_t c = 0; c < centers.rows(); ++c) {
    std::size_t best = points.size();
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (taken[i]) continue;
      const double d2 = squared_distance(points[i], centers.row(c));
      if (d2 < best_d) {
        best_d = d2;
        best = i;
      }
    }
    taken[best] = true;
    out.push_back(points[best]);
  }
  return out;
}

std::vector<Vector> select_candidates(const Acquisition& af, std::size_t dims, std::size_t objectives,
                                      const MoeaConfig& moea, const InfillConfig& config, Rng& rng,
                                      const std::vector<Vector>& evaluated) {
  if (config.count == 0) throw std::invalid_argument("select_candidates: count must be positive");

  std::vector<Vector> survivors;
  for (std::size_t attempt = 0; attempt <= config.max_restarts; ++attempt) {
    auto found = run_moea(af, dims, objectives, moea, rng).decisions();
    survivors.insert(survivors.end(), std::make_move_iterator(found.begin()), std::make_move_iterator(found.end()));
    survivors = remove_redundant(survivors, config.threshold);
    if (survivors.size() >= config.count) break;
  }

  const auto picks =
      survivors.size() >= config.count ? cluster_representatives(survivors, config.count, rng) : survivors;

  std::vector<Vector> out;
  out.reserve(config.count);
  for (const auto& p : picks) {
    if (!near_any(p, evaluated, config.threshold) && !near_any(p, out, config.threshold)) out.push_back(p);
  }
  while (out.size() < config.count) {
    const Matrix fill = latin_hypercube(config.count - out.size(), dims, rng);
    for (std::size_t i = 0; i < fill.rows(); ++i) {
      Vector p = fill.row_vector(i);
      if (!near_any(p, evaluated, config.threshold) && !near_any(p, out, config.threshold)) out.push_back(std::move(p));
    }
  }
  return out;
}

}  // namespace fddmoea
