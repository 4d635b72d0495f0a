#pragma once

#include <cstddef>

#include "fddmoea/types.hpp"

namespace fddmoea {

/// Plain Latin hypercube design on [0,1)^d: in every column the n samples fall
/// one per stratum [i/n, (i+1)/n), at a uniform position inside the stratum.
Matrix latin_hypercube(std::size_t n, std::size_t d, Rng& rng);

}  // namespace fddmoea
