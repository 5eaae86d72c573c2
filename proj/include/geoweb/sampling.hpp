#pragma once

#include "geoweb/web.hpp"

#include <cstdint>
#include <vector>

namespace geoweb {

/// k^n lattice on the cube of half-side r/sqrt(n) inscribed in the domain ball.
/// k = 1 gives the center.
std::vector<std::vector<double>> grid_points(const Domain& domain, int k);

/// count points uniform in the domain ball (rejection sampling on mt19937_64).
std::vector<std::vector<double>> random_points(const Domain& domain, std::size_t count, std::uint64_t seed);

} // namespace geoweb
