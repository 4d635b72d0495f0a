#include "fddmoea/lattice.hpp"

#include <stdexcept>

namespace fddmoea {

std::size_t simplex_lattice_size(std::size_t dims, std::size_t divisions) {
  if (dims == 0) return 0;
  // C(n, k) with k = dims - 1, accumulated so every intermediate is an integer.
  const std::size_t k = dims - 1;
  const std::size_t n = divisions + k;
  std::size_t result = 1;
  for (std::size_t i = 1; i <= k; ++i) result = result * (n - k + i) / i;
  return result;
}

namespace {

void fill_lattice(std::size_t dims, std::size_t divisions, std::size_t remaining, Vector& current,
                  std::vector<Vector>& out) {
  const std::size_t pos = current.size();
  if (pos + 1 == dims) {
    current.push_back(static_cast<double>(remaining) / static_cast<double>(divisions));
    out.push_back(current);
    current.pop_back();
    return;
  }
  for (std::size_t k = 0; k <= remaining; ++k) {
    current.push_back(static_cast<double>(k) / static_cast<double>(divisions));
    fill_lattice(dims, divisions, remaining - k, current, out);
    current.pop_back();
  }
}

}  // namespace

std::vector<Vector> simplex_lattice(std::size_t dims, std::size_t divisions) {
  if (dims == 0 || divisions == 0) throw std::invalid_argument("simplex_lattice: dims and divisions must be positive");
  std::vector<Vector> out;
  out.reserve(simplex_lattice_size(dims, divisions));
  Vector current;
  current.reserve(dims);
  fill_lattice(dims, divisions, divisions, current, out);
  return out;
}

}  // namespace fddmoea
