#include "excursion/sampling.hpp"

#include <cmath>
#include <stdexcept>

namespace excursion {

PathGrid sample_brownian_bridge(std::size_t n_steps, RngStream stream) {
    if (n_steps < 2) {
        throw std::invalid_argument("sample_brownian_bridge: n_steps must be >= 2");
    }
    StreamGenerator gen(stream);

    PathGrid path;
    path.n_steps = n_steps;
    path.values.resize(n_steps + 1);

    const double sd = std::sqrt(1.0 / static_cast<double>(n_steps));
    double b = 0.0;
    path.values[0] = 0.0;
    for (std::size_t k = 1; k <= n_steps; ++k) {
        b += sd * gen.next_gaussian();
        path.values[k] = b;
    }
    const double b_one = path.values[n_steps];
    for (std::size_t k = 1; k <= n_steps; ++k) {
        path.values[k] -= path.time_at(k) * b_one;
    }
    // time_at(n_steps) is exactly 1, so the right endpoint is an exact zero.
    return path;
}

PathGrid sample_excursion(std::size_t n_steps, RngStream stream) {
    if (n_steps < 2) {
        throw std::invalid_argument("sample_excursion: n_steps must be >= 2");
    }
    const std::uint64_t base = 3 * stream.stream_index;
    const PathGrid b1 = sample_brownian_bridge(n_steps, {stream.seed, base});
    const PathGrid b2 = sample_brownian_bridge(n_steps, {stream.seed, base + 1});
    const PathGrid b3 = sample_brownian_bridge(n_steps, {stream.seed, base + 2});

    PathGrid path;
    path.n_steps = n_steps;
    path.values.resize(n_steps + 1);
    for (std::size_t k = 0; k <= n_steps; ++k) {
        const double x = b1.values[k];
        const double y = b2.values[k];
        const double z = b3.values[k];
        path.values[k] = std::sqrt(x * x + y * y + z * z);
    }
    return path;
}

} // namespace excursion
