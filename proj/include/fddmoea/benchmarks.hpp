#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fddmoea/types.hpp"

namespace fddmoea {

enum class Family { dtlz1 = 1, dtlz2, dtlz3, dtlz4, dtlz5, dtlz6, dtlz7 };

/// Accepts "dtlz1".."dtlz7" (case-insensitive).
Family parse_family(std::string_view name);
std::string to_string(Family family);

/**
 * A DTLZ test instance on the unit box [0,1]^d.
 *
 * The last k = d - M + 1 variables are distance variables; the first M - 1
 * are position variables. All seven families are the standard scalable
 * definitions; the bias exponent only affects DTLZ4.
 */
class Problem {
 public:
  Problem(Family family, std::size_t objectives, std::size_t dims, double dtlz4_alpha = 100.0);

  Family family() const noexcept { return family_; }
  std::size_t objectives() const noexcept { return objectives_; }
  std::size_t dims() const noexcept { return dims_; }
  std::size_t distance_vars() const noexcept { return dims_ - objectives_ + 1; }
  double dtlz4_alpha() const noexcept { return alpha_; }
  double lower_bound() const noexcept { return 0.0; }
  double upper_bound() const noexcept { return 1.0; }

  /// Throws std::invalid_argument on a length mismatch or an out-of-box component.
  Vector evaluate(std::span<const double> x) const;

  /**
   * Reference points on the true Pareto front.
   *
   * Lattice-based fronts (DTLZ1-4) return the largest Das-Dennis lattice that
   * does not exceed `n` points; DTLZ5/6 return exactly `n` points along the
   * degenerate arc; DTLZ7 returns the non-dominated part of a position grid.
   */
  std::vector<Vector> sample_pareto_front(std::size_t n) const;

 private:
  double distance_function(std::span<const double> x) const;

  Family family_;
  std::size_t objectives_;
  std::size_t dims_;
  double alpha_;
};

}  // namespace fddmoea
