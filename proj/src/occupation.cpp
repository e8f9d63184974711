#include "excursion/occupation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace excursion {

double path_max(const PathGrid& path) {
    return *std::max_element(path.values.begin(), path.values.end());
}

OccupationProfile occupation_profile(const PathGrid& path, double h) {
    if (!(h > 0.0)) {
        throw std::invalid_argument("occupation_profile: bin width must be > 0");
    }
    if (path.n_steps < 1 || path.values.size() != path.n_steps + 1) {
        throw std::invalid_argument("occupation_profile: malformed path");
    }
    for (double v : path.values) {
        if (v < 0.0 || !std::isfinite(v)) {
            throw std::invalid_argument("occupation_profile: path values must be >= 0 and finite");
        }
    }

    OccupationProfile prof;
    prof.bin_width = h;
    prof.path_max = path_max(path);
    prof.n_bins = static_cast<std::size_t>(std::floor(prof.path_max / h)) + 1;
    prof.occupation.assign(prof.n_bins, 0.0);

    const double dt = path.dt();
    const std::size_t last_bin = prof.n_bins - 1;
    for (std::size_t k = 0; k < path.n_steps; ++k) {
        const double a = path.values[k];
        const double b = path.values[k + 1];
        const double lo = std::min(a, b);
        const double hi = std::max(a, b);
        if (hi == lo) {
            // Flat segment: full duration into the band containing the level.
            const auto i = std::min(static_cast<std::size_t>(lo / h), last_bin);
            prof.occupation[i] += dt;
            continue;
        }
        const double scale = dt / (hi - lo);
        const auto i0 = static_cast<std::size_t>(lo / h);
        const auto i1 = std::min(static_cast<std::size_t>(hi / h), last_bin);
        for (std::size_t i = i0; i <= i1; ++i) {
            const double band_lo = static_cast<double>(i) * h;
            const double band_hi = band_lo + h;
            const double overlap = std::min(hi, band_hi) - std::max(lo, band_lo);
            if (overlap > 0.0) prof.occupation[i] += scale * overlap;
        }
    }

    prof.local_time.resize(prof.n_bins);
    for (std::size_t i = 0; i < prof.n_bins; ++i) {
        prof.local_time[i] = prof.occupation[i] / h;
    }
    prof.H_edges.resize(prof.n_bins + 1);
    prof.H_edges[0] = 0.0;
    for (std::size_t i = 0; i < prof.n_bins; ++i) {
        prof.H_edges[i + 1] = prof.H_edges[i] + prof.occupation[i];
    }
    return prof;
}

double H_inverse(const OccupationProfile& profile, double t) {
    if (!(t >= 0.0 && t <= 1.0)) {
        throw std::invalid_argument("H_inverse: t must lie in [0,1]");
    }
    // Accumulated occupation can fall a few ulp short of 1; clamp the target
    // so t = 1 maps to the first edge attaining the total mass.
    const double target = std::min(t, profile.H_edges.back());
    const auto it = std::lower_bound(profile.H_edges.begin(), profile.H_edges.end(), target);
    const auto i = static_cast<std::size_t>(it - profile.H_edges.begin());
    if (i == 0) return 0.0;
    const double h = profile.bin_width;
    const double lo = profile.H_edges[i - 1];
    const double hi = profile.H_edges[i];
    // lower_bound guarantees lo < target <= hi, so hi - lo > 0.
    return (static_cast<double>(i - 1) + (target - lo) / (hi - lo)) * h;
}

double jeulin_value(const OccupationProfile& profile, double t) {
    const double x = H_inverse(profile, t);
    const auto last_bin = profile.n_bins - 1;
    const auto i = std::min(static_cast<std::size_t>(x / profile.bin_width), last_bin);
    return 0.5 * profile.local_time[i];
}

PathGrid jeulin_path(const OccupationProfile& profile, std::size_t n_steps) {
    if (n_steps < 1) {
        throw std::invalid_argument("jeulin_path: n_steps must be >= 1");
    }
    PathGrid path;
    path.n_steps = n_steps;
    path.values.resize(n_steps + 1);
    for (std::size_t k = 0; k <= n_steps; ++k) {
        path.values[k] = jeulin_value(profile, path.time_at(k));
    }
    return path;
}

} // namespace excursion
