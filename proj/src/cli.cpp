#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "excursion/experiments.hpp"

namespace excursion {

namespace {

std::uint64_t parse_env_seed(const char* text) {
    std::uint64_t value = 0;
    const char* end = text + std::strlen(text);
    const auto [ptr, ec] = std::from_chars(text, end, value);
    if (ec != std::errc() || ptr != end) {
        throw std::invalid_argument("EXCURSION_SEED is not a valid 64-bit unsigned integer");
    }
    return value;
}

void print_suite_summary(const IdentitySuiteReport& report) {
    for (const TestReport& t : report.tests) {
        std::printf("%-36s %s  statistic=%.6g threshold=%.6g\n", t.name.c_str(),
                    t.pass ? "pass" : "FAIL", t.statistic, t.threshold);
    }
    std::printf("overall: %s\n", report.overall_pass ? "pass" : "FAIL");
}

} // namespace

int cli_main(int argc, const char* const* argv) {
    CLI::App app{"Monte Carlo verification of Brownian-excursion distributional identities"};
    app.name("excursion-lab");
    app.require_subcommand(1);

    ExperimentConfig cfg;
    std::uint64_t opt_paths = 0, opt_steps = 0, opt_seed = 0;
    double opt_bin_width = 0.0, opt_alpha = 0.0;
    std::vector<int> opt_orders;
    std::string opt_out, opt_config;

    std::vector<CLI::Option*> seed_opts, paths_opts, steps_opts, bw_opts, alpha_opts, orders_opts,
        out_opts, config_opts;
    auto add_common = [&](CLI::App* sub) {
        paths_opts.push_back(sub->add_option("--paths", opt_paths, "Number of sampled paths"));
        steps_opts.push_back(sub->add_option("--steps", opt_steps, "Time-grid steps per path"));
        bw_opts.push_back(sub->add_option("--bin-width", opt_bin_width, "Spatial bin width"));
        seed_opts.push_back(sub->add_option("--seed", opt_seed, "RNG seed"));
        orders_opts.push_back(sub->add_option("--orders", opt_orders, "Functional orders, e.g. 1,2,3")
                                  ->delimiter(','));
        alpha_opts.push_back(sub->add_option("--alpha", opt_alpha, "KS significance level"));
        out_opts.push_back(sub->add_option("--out", opt_out, "Output directory"));
        config_opts.push_back(
            sub->add_option("--config", opt_config, "JSON config file (flags override it)"));
    };

    CLI::App* sim = app.add_subcommand("simulate", "Sample excursions and write the functional table");
    CLI::App* ver = app.add_subcommand("verify", "Run the full identity suite and write a JSON report");
    CLI::App* con = app.add_subcommand("convergence", "Sweep grid steps and bin widths");
    add_common(sim);
    add_common(ver);
    add_common(con);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    const auto given = [](const std::vector<CLI::Option*>& opts) {
        for (const CLI::Option* o : opts) {
            if (o->count() > 0) return true;
        }
        return false;
    };

    try {
        bool file_has_seed = false;
        if (given(config_opts)) file_has_seed = apply_config_file(opt_config, cfg);
        if (!given(seed_opts) && !file_has_seed) {
            if (const char* env = std::getenv("EXCURSION_SEED")) cfg.seed = parse_env_seed(env);
        }
        if (given(paths_opts)) cfg.paths = opt_paths;
        if (given(steps_opts)) cfg.n_steps = opt_steps;
        if (given(bw_opts)) cfg.bin_width = opt_bin_width;
        if (given(seed_opts)) cfg.seed = opt_seed;
        if (given(orders_opts)) cfg.orders = opt_orders;
        if (given(alpha_opts)) cfg.alpha = opt_alpha;
        if (given(out_opts)) cfg.output_dir = opt_out;
        validate_config(cfg);

        if (sim->parsed()) {
            run_simulate(cfg);
            std::printf("wrote %s/functionals.csv (%zu paths)\n", cfg.output_dir.c_str(), cfg.paths);
            return 0;
        }
        if (ver->parsed()) {
            const IdentitySuiteReport report = run_verify(cfg);
            print_suite_summary(report);
            std::printf("wrote %s/verify_report.json\n", cfg.output_dir.c_str());
            return report.overall_pass ? 0 : 1;
        }
        const auto cells = run_convergence(cfg);
        std::printf("wrote %s/convergence.csv (%zu cells)\n", cfg.output_dir.c_str(), cells.size());
        return 0;
    } catch (const IoError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::domain_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
}

} // namespace excursion
