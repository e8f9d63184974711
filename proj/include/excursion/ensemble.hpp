#ifndef EXCURSION_ENSEMBLE_HPP
#define EXCURSION_ENSEMBLE_HPP

#include <cstdint>
#include <map>
#include <vector>

#include "excursion/functionals.hpp"

namespace excursion {

struct EnsembleParams {
    std::size_t paths = 0;
    std::size_t n_steps = 0;
    double bin_width = 0.0;
    std::uint64_t seed = 0;
    std::vector<int> orders;
    std::vector<double> marginal_times;
    // lite runs keep only area/l2/x_stat plus the order-1 residual, for the
    // convergence sweeps where nothing else is read.
    bool lite = false;
};

// Everything recorded for one path realization.
struct PathRecord {
    FunctionalSample fs;
    double max_r = 0.0;
    std::vector<double> excursion_at_times; // r at marginal_times
    std::vector<double> jeulin_at_times;    // (1/2) l(H^{-1}(t)) at marginal_times
    std::map<int, double> residual;         // identity residual per order
};

// Full per-path pipeline: sample the excursion of stream path_index, build
// the occupation profile, evaluate all functionals. Pure function of
// (params, path_index).
PathRecord compute_path_record(const EnsembleParams& params, std::size_t path_index);

// Serial reference loop over path indices. Kept alongside the OpenMP kernel;
// the two must produce bit-identical records.
std::vector<PathRecord> run_ensemble_serial(const EnsembleParams& params);

// OpenMP loop over path indices; each path owns its RNG streams and writes
// only its own slot, so the output is in path order at any thread count.
std::vector<PathRecord> run_ensemble_parallel(const EnsembleParams& params);

} // namespace excursion

#endif // EXCURSION_ENSEMBLE_HPP
