#include "fddmoea/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace fddmoea {

Matrix latin_hypercube(std::size_t n, std::size_t d, Rng& rng) {
  if (n == 0 || d == 0) throw std::invalid_argument("latin_hypercube: n and d must be positive");
  Matrix design(n, d);
  std::vector<std::size_t> strata(n);
  const double count = static_cast<double>(n);
  for (std::size_t j = 0; j < d; ++j) {
    std::iota(strata.begin(), strata.end(), 0);
    std::shuffle(strata.begin(), strata.end(), rng);
    for (std::size_t i = 0; i < n; ++i) {
      const double stratum = static_cast<double>(strata[i]);
      double v = (stratum + uniform01(rng)) / count;
      // Nudge values that rounding pushed across a stratum edge back inside,
      // so that floor(n * v) recovers the stratum exactly.
      while (std::floor(v * count) < stratum) v = std::nextafter(v, 1.0);
      while (std::floor(v * count) > stratum) v = std::nextafter(v, 0.0);
      design(i, j) = v;
    }
  }
  return design;
}

}  // namespace fddmoea
