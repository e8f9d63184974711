#ifndef EXCURSION_OCCUPATION_HPP
#define EXCURSION_OCCUPATION_HPP

#include <cstddef>
#include <vector>

#include "excursion/path_grid.hpp"

namespace excursion {

// Spatial occupation/local-time profile of one nonnegative path.
//
// Levels are partitioned into bands [i*h, (i+1)*h); occupation[i] is the
// exact Lebesgue time the piecewise-linear interpolant spends in band i,
// local_time[i] = occupation[i] / h, and H_edges[i] = sum_{j<i} occupation[j]
// is the cumulative occupation evaluated at the bin edges. Bands start at
// level 0 and extend to the first multiple of h strictly above path_max, so
// path_max < n_bins * h always holds. By construction
//   sum occupation = 1   and   h * sum local_time = 1
// up to floating-point accumulation.
struct OccupationProfile {
    double bin_width = 0.0;
    std::size_t n_bins = 0;
    std::vector<double> occupation;
    std::vector<double> local_time;
    std::vector<double> H_edges; // n_bins + 1 entries, H_edges[0] = 0
    double path_max = 0.0;
};

// Exact band occupation of the piecewise-linear interpolant: a segment from
// (t_k, a) to (t_{k+1}, b) contributes to each band time proportional to the
// level overlap |band ∩ [min(a,b), max(a,b)]| / |b-a|, and its full duration
// when a == b. Throws std::invalid_argument if h <= 0 or any value < 0.
OccupationProfile occupation_profile(const PathGrid& path, double h);

// Maximum of the path (piecewise-linear max == grid max).
double path_max(const PathGrid& path);

// Right-continuous generalized inverse of the piecewise-linear H:
// inf{x >= 0 : H(x) >= t}. Throws std::invalid_argument if t is outside [0,1].
double H_inverse(const OccupationProfile& profile, double t);

// The Jeulin time change at a single time: (1/2) * l(H^{-1}(t)), where l is
// the piecewise-constant local-time function of the profile.
double jeulin_value(const OccupationProfile& profile, double t);

// The full Jeulin path t -> (1/2) l(H^{-1}(t)) on a uniform grid. Identical
// in law with the excursion itself; the identity suite compares marginals.
PathGrid jeulin_path(const OccupationProfile& profile, std::size_t n_steps);

} // namespace excursion

#endif // EXCURSION_OCCUPATION_HPP
