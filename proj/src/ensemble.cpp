#include "excursion/ensemble.hpp"

#include <exception>
#include <stdexcept>

#include "excursion/occupation.hpp"
#include "excursion/sampling.hpp"

namespace excursion {

namespace {

void validate_params(const EnsembleParams& params) {
    if (params.paths == 0) throw std::invalid_argument("ensemble: paths must be positive");
    if (params.n_steps < 2) throw std::invalid_argument("ensemble: n_steps must be >= 2");
    if (!(params.bin_width > 0.0)) throw std::invalid_argument("ensemble: bin_width must be > 0");
    for (int n : params.orders) {
        if (n < 1) throw std::invalid_argument("ensemble: orders must be >= 1");
    }
    for (double t : params.marginal_times) {
        if (!(t > 0.0 && t < 1.0)) {
            throw std::invalid_argument("ensemble: marginal times must lie in (0,1)");
        }
    }
}

} // namespace

PathRecord compute_path_record(const EnsembleParams& params, std::size_t path_index) {
    const PathGrid path = sample_excursion(params.n_steps, {params.seed, path_index});
    const OccupationProfile profile = occupation_profile(path, params.bin_width);

    PathRecord record;
    record.max_r = profile.path_max;

    if (params.lite) {
        record.fs.area = weighted_area(path, 1);
        record.fs.l2_half = 0.5 * l2_integral(profile, 1);
        record.fs.x_stat = record.fs.area - record.fs.l2_half;
        record.residual[1] = identity_residual(path, 1);
        return record;
    }

    record.fs = compute_functionals(path, profile, params.orders, &record.residual);
    record.excursion_at_times.reserve(params.marginal_times.size());
    record.jeulin_at_times.reserve(params.marginal_times.size());
    for (double t : params.marginal_times) {
        record.excursion_at_times.push_back(path.at(t));
        record.jeulin_at_times.push_back(jeulin_value(profile, t));
    }
    return record;
}

std::vector<PathRecord> run_ensemble_serial(const EnsembleParams& params) {
    validate_params(params);
    std::vector<PathRecord> records(params.paths);
    for (std::size_t k = 0; k < params.paths; ++k) {
        records[k] = compute_path_record(params, k);
    }
    return records;
}

std::vector<PathRecord> run_ensemble_parallel(const EnsembleParams& params) {
    validate_params(params);
    std::vector<PathRecord> records(params.paths);
    std::exception_ptr error;

#pragma omp parallel for schedule(dynamic, 8)
    for (long long k = 0; k < static_cast<long long>(params.paths); ++k) {
        try {
            records[static_cast<std::size_t>(k)] =
                compute_path_record(params, static_cast<std::size_t>(k));
        } catch (...) {
#pragma omp critical
            {
                if (!error) error = std::current_exception();
            }
        }
    }
    if (error) std::rethrow_exception(error);
    return records;
}

} // namespace excursion
