// Timing comparison of the serial reference loop against the OpenMP kernel,
// plus a bitwise equality check between the two.
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "excursion/ensemble.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

bool records_equal(const std::vector<excursion::PathRecord>& a,
                   const std::vector<excursion::PathRecord>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t k = 0; k < a.size(); ++k) {
        if (a[k].fs.x_stat != b[k].fs.x_stat || a[k].fs.w_one != b[k].fs.w_one ||
            a[k].max_r != b[k].max_r) {
            return false;
        }
    }
    return true;
}

} // namespace

int main(int argc, char** argv) {
    std::size_t paths = 256;
    std::size_t n_steps = 4096;
    if (argc > 1) paths = std::strtoull(argv[1], nullptr, 10);
    if (argc > 2) n_steps = std::strtoull(argv[2], nullptr, 10);

    excursion::EnsembleParams params;
    params.paths = paths;
    params.n_steps = n_steps;
    params.bin_width = 1.0 / 128.0;
    params.seed = 42;
    params.orders = {1, 2, 3};
    params.marginal_times = {0.25, 0.5, 0.75};

#ifdef _OPENMP
    const int threads = omp_get_max_threads();
#else
    const int threads = 1;
#endif
    std::printf("paths=%zu steps=%zu threads=%d\n", paths, n_steps, threads);

    auto t0 = Clock::now();
    const auto serial = excursion::run_ensemble_serial(params);
    const double t_serial = seconds_since(t0);

    t0 = Clock::now();
    const auto parallel = excursion::run_ensemble_parallel(params);
    const double t_parallel = seconds_since(t0);

    std::printf("serial   : %8.3f s  (%7.1f paths/s)\n", t_serial,
                static_cast<double>(paths) / t_serial);
    std::printf("parallel : %8.3f s  (%7.1f paths/s)\n", t_parallel,
                static_cast<double>(paths) / t_parallel);
    std::printf("speedup  : %6.2fx\n", t_serial / t_parallel);

    if (!records_equal(serial, parallel)) {
        std::printf("MISMATCH: serial and parallel results differ\n");
        return 1;
    }
    std::printf("results identical\n");
    return 0;
}
