#ifndef EXCURSION_PATH_GRID_HPP
#define EXCURSION_PATH_GRID_HPP

#include <cstddef>
#include <vector>

namespace excursion {

// A continuous path on [0,1] represented by its values on the uniform grid
// t_k = k / n_steps, with piecewise-linear interpolation semantics between
// grid points. values has exactly n_steps + 1 entries.
struct PathGrid {
    std::size_t n_steps = 0;
    std::vector<double> values;

    double dt() const { return 1.0 / static_cast<double>(n_steps); }
    double time_at(std::size_t k) const {
        return static_cast<double>(k) / static_cast<double>(n_steps);
    }

    // Piecewise-linear value at an arbitrary time in [0,1].
    double at(double t) const {
        if (t <= 0.0) return values.front();
        if (t >= 1.0) return values.back();
        const double s = t * static_cast<double>(n_steps);
        const auto k = static_cast<std::size_t>(s);
        const double frac = s - static_cast<double>(k);
        return values[k] + frac * (values[k + 1] - values[k]);
    }
};

} // namespace excursion

#endif // EXCURSION_PATH_GRID_HPP
