#ifndef EXCURSION_SAMPLING_HPP
#define EXCURSION_SAMPLING_HPP

#include "excursion/path_grid.hpp"
#include "excursion/rng.hpp"

namespace excursion {

// Standard Brownian bridge from 0 to 0 on [0,1]: a Brownian motion built
// from cumulative Gaussian increments of variance 1/n_steps, pinned by
// B_t - t * B_1. Exact in law at the grid points; endpoints are exact zeros.
// Throws std::invalid_argument for n_steps < 2.
PathGrid sample_brownian_bridge(std::size_t n_steps, RngStream stream);

// Normalized Brownian excursion as a standard 3-dimensional Bessel bridge:
// pointwise Euclidean norm of three independent Brownian bridges drawn from
// sub-streams 3k, 3k+1, 3k+2 of stream k. Nonnegative, exact zeros at both
// endpoints. Throws std::invalid_argument for n_steps < 2.
PathGrid sample_excursion(std::size_t n_steps, RngStream stream);

} // namespace excursion

#endif // EXCURSION_SAMPLING_HPP
