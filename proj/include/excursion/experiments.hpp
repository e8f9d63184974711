#ifndef EXCURSION_EXPERIMENTS_HPP
#define EXCURSION_EXPERIMENTS_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "excursion/ensemble.hpp"
#include "excursion/stats.hpp"

namespace excursion {

struct ExperimentConfig {
    std::size_t paths = 20000;
    std::size_t n_steps = 16384;
    double bin_width = 1.0 / 128.0;
    std::uint64_t seed = 42;
    std::vector<int> orders{1, 2, 3};
    double alpha = 0.001;
    std::vector<double> marginal_times{0.25, 0.5, 0.75};
    std::string output_dir = ".";
};

// Thrown when an output file or directory cannot be written or a config file
// cannot be read; the CLI maps it to exit code 3.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Throws std::invalid_argument on any violated config invariant.
void validate_config(const ExperimentConfig& config);

// Reads a JSON config file mirroring ExperimentConfig; keys absent in the
// file keep their current values. Returns whether the file provided a seed
// (the EXCURSION_SEED fallback only applies when neither flag nor file did).
bool apply_config_file(const std::string& filename, ExperimentConfig& config);

struct IdentitySuiteReport {
    ExperimentConfig config;
    std::vector<TestReport> tests;
    std::vector<std::pair<std::string, MomentSummary>> moments;
    bool overall_pass = false;
};

struct ConvergenceCell {
    std::size_t n_steps = 0;
    double bin_width = 0.0;
    std::size_t paths = 0;
    double mean_x = 0.0;
    double var_x = 0.0;
    double var_abs_error = 0.0;      // |var_x - 1/12|
    double max_eq4_residual = 0.0;   // max over paths of the order-1 identity residual
};

EnsembleParams ensemble_params(const ExperimentConfig& config);

// The exact column list of the simulate table.
std::string simulate_csv_header();

// One CSV row per path, eight statistical test families in verify, and the
// 4x4 (n_steps x bin_width) sweep in convergence. Each writes its artifact
// under config.output_dir:
//   simulate    -> functionals.csv
//   verify      -> verify_report.json
//   convergence -> convergence.csv
std::vector<PathRecord> run_simulate(const ExperimentConfig& config);
IdentitySuiteReport run_verify(const ExperimentConfig& config);
std::vector<ConvergenceCell> run_convergence(const ExperimentConfig& config);

// Assembles the full verify battery from an already-computed ensemble.
// Exposed separately so the acceptance suite can reuse one ensemble.
IdentitySuiteReport build_identity_report(const std::vector<PathRecord>& records,
                                          const ExperimentConfig& config);

// Serialized forms (deterministic bytes for a given input).
std::string simulate_csv(const std::vector<PathRecord>& records);
std::string report_json(const IdentitySuiteReport& report);
std::string convergence_csv(const std::vector<ConvergenceCell>& cells);

// Full command-line entry point ("simulate|verify|convergence" plus flags).
// Exit codes: 0 pass, 1 suite failure, 2 invalid arguments, 3 I/O error.
int cli_main(int argc, const char* const* argv);

} // namespace excursion

#endif // EXCURSION_EXPERIMENTS_HPP
