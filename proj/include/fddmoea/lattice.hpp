#pragma once

#include <cstddef>
#include <vector>

#include "fddmoea/types.hpp"

namespace fddmoea {

/// Number of points in the simplex lattice with `divisions` steps in `dims`
/// dimensions, i.e. C(divisions + dims - 1, dims - 1).
std::size_t simplex_lattice_size(std::size_t dims, std::size_t divisions);

/// Das-Dennis lattice: all points with coordinates k/divisions summing to one.
std::vector<Vector> simplex_lattice(std::size_t dims, std::size_t divisions);

}  // namespace fddmoea
