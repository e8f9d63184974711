#include "excursion/experiments.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#include "json.hpp"

namespace excursion {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::string fmt_time(double t) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%g", t);
    return buf;
}

void write_file(const std::string& dir, const std::string& name, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path base = dir.empty() ? fs::path(".") : fs::path(dir);
    std::error_code ec;
    fs::create_directories(base, ec);
    const fs::path full = base / name;
    std::ofstream out(full, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + full.string() + " for writing");
    out << content;
    out.flush();
    if (!out) throw IoError("write failed for " + full.string());
}

std::vector<double> column(const std::vector<PathRecord>& records, std::size_t lo, std::size_t hi,
                           const std::function<double(const PathRecord&)>& get) {
    std::vector<double> out;
    out.reserve(hi - lo);
    for (std::size_t k = lo; k < hi; ++k) out.push_back(get(records[k]));
    return out;
}

TestReport bound_test(std::string name, double statistic, double threshold, std::size_t count) {
    TestReport report;
    report.name = std::move(name);
    report.statistic = statistic;
    report.threshold = threshold;
    report.alpha = 0.0;
    report.pass = statistic < threshold;
    report.sample_sizes = {count, 0};
    return report;
}

ordered_json config_json(const ExperimentConfig& config) {
    ordered_json j;
    j["paths"] = config.paths;
    j["n_steps"] = config.n_steps;
    j["bin_width"] = config.bin_width;
    j["seed"] = config.seed;
    j["orders"] = config.orders;
    j["alpha"] = config.alpha;
    j["marginal_times"] = config.marginal_times;
    j["output_dir"] = config.output_dir;
    return j;
}

} // namespace

void validate_config(const ExperimentConfig& config) {
    if (config.paths == 0) throw std::invalid_argument("config: paths must be positive");
    if (config.n_steps < 2) throw std::invalid_argument("config: n_steps must be >= 2");
    if (!(config.bin_width > 0.0)) throw std::invalid_argument("config: bin_width must be > 0");
    if (!(config.alpha > 0.0 && config.alpha < 1.0)) {
        throw std::invalid_argument("config: alpha must lie in (0,1)");
    }
    if (config.orders.empty()) throw std::invalid_argument("config: orders must be nonempty");
    for (int n : config.orders) {
        if (n < 1) throw std::invalid_argument("config: orders must be >= 1");
    }
    for (double t : config.marginal_times) {
        if (!(t > 0.0 && t < 1.0)) {
            throw std::invalid_argument("config: marginal times must lie strictly inside (0,1)");
        }
    }
}

bool apply_config_file(const std::string& filename, ExperimentConfig& config) {
    std::ifstream in(filename, std::ios::binary);
    if (!in) throw IoError("cannot read config file " + filename);
    std::stringstream buffer;
    buffer << in.rdbuf();

    ordered_json j;
    try {
        j = ordered_json::parse(buffer.str());
    } catch (const ordered_json::parse_error& e) {
        throw std::invalid_argument("config file " + filename + ": " + e.what());
    }
    bool has_seed = false;
    try {
        if (j.contains("paths")) config.paths = j.at("paths").get<std::size_t>();
        if (j.contains("n_steps")) config.n_steps = j.at("n_steps").get<std::size_t>();
        if (j.contains("bin_width")) config.bin_width = j.at("bin_width").get<double>();
        if (j.contains("seed")) {
            config.seed = j.at("seed").get<std::uint64_t>();
            has_seed = true;
        }
        if (j.contains("orders")) config.orders = j.at("orders").get<std::vector<int>>();
        if (j.contains("alpha")) config.alpha = j.at("alpha").get<double>();
        if (j.contains("marginal_times")) {
            config.marginal_times = j.at("marginal_times").get<std::vector<double>>();
        }
        if (j.contains("output_dir")) config.output_dir = j.at("output_dir").get<std::string>();
    } catch (const ordered_json::exception& e) {
        throw std::invalid_argument("config file " + filename + ": " + e.what());
    }
    return has_seed;
}

EnsembleParams ensemble_params(const ExperimentConfig& config) {
    EnsembleParams params;
    params.paths = config.paths;
    params.n_steps = config.n_steps;
    params.bin_width = config.bin_width;
    params.seed = config.seed;
    params.orders = config.orders;
    params.marginal_times = config.marginal_times;
    return params;
}

std::string simulate_csv_header() {
    return "path_index,area,l2_half,x_stat,w1,min_1,min_2,min_3,prop_1,prop_2,prop_3,"
           "inv_fwd_0,inv_fwd_1,inv_fwd_2,inv_rev_1,inv_rev_2,max_r";
}

std::string simulate_csv(const std::vector<PathRecord>& records) {
    std::string out = simulate_csv_header() + "\n";
    for (std::size_t k = 0; k < records.size(); ++k) {
        const FunctionalSample& fs = records[k].fs;
        out += std::to_string(k);
        for (double v : {fs.area, fs.l2_half, fs.x_stat, fs.w_one, fs.min_n.at(1), fs.min_n.at(2),
                         fs.min_n.at(3), fs.prop_stat.at(1), fs.prop_stat.at(2), fs.prop_stat.at(3),
                         fs.inv_forward.at(0), fs.inv_forward.at(1), fs.inv_forward.at(2),
                         fs.inv_reversed.at(1), fs.inv_reversed.at(2), records[k].max_r}) {
            out += ',';
            out += fmt17(v);
        }
        out += '\n';
    }
    return out;
}

std::vector<PathRecord> run_simulate(const ExperimentConfig& config) {
    validate_config(config);
    std::vector<PathRecord> records = run_ensemble_parallel(ensemble_params(config));
    write_file(config.output_dir, "functionals.csv", simulate_csv(records));
    return records;
}

IdentitySuiteReport build_identity_report(const std::vector<PathRecord>& records,
                                          const ExperimentConfig& config) {
    if (records.size() < 4) {
        throw std::invalid_argument("identity suite needs at least 4 paths");
    }
    const std::size_t total = records.size();
    const std::size_t half = total / 2;
    const double alpha = config.alpha;

    IdentitySuiteReport report;
    report.config = config;

    auto whole = [&](const std::function<double(const PathRecord&)>& get) {
        return column(records, 0, total, get);
    };
    auto first_half = [&](const std::function<double(const PathRecord&)>& get) {
        return column(records, 0, half, get);
    };
    auto second_half = [&](const std::function<double(const PathRecord&)>& get) {
        return column(records, half, total, get);
    };

    auto add_moment = [&](const std::string& name, const std::vector<double>& xs) {
        report.moments.emplace_back(name, moment_summary(xs));
        return report.moments.back().second;
    };

    // (a) Theorem: X is centered Gaussian with variance 1/12.
    const std::vector<double> xs = whole([](const PathRecord& r) { return r.fs.x_stat; });
    report.tests.push_back(ks_one_sample_normal(xs, 0.0, 1.0 / 12.0, alpha, "ks_x_vs_gauss_1_12"));
    {
        const MomentSummary m = add_moment("x_stat", xs);
        report.tests.push_back(bound_test("x_mean_abs", std::fabs(m.mean), 0.005, total));
        report.tests.push_back(
            bound_test("x_var_abs_error", std::fabs(m.variance - 1.0 / 12.0), 0.005, total));
    }

    // (b) Order-n extension: prop_n is Gaussian with variance 1/(2n+1).
    for (int n : config.orders) {
        const std::vector<double> props =
            whole([n](const PathRecord& r) { return r.fs.prop_stat.at(n); });
        const double target_var = 1.0 / static_cast<double>(2 * n + 1);
        const std::string tag = "prop" + std::to_string(n);
        report.tests.push_back(
            ks_one_sample_normal(props, 0.0, target_var, alpha, "ks_" + tag + "_vs_gauss"));
        const MomentSummary m = add_moment(tag, props);
        report.tests.push_back(bound_test(tag + "_mean_abs", std::fabs(m.mean), 0.01, total));
        report.tests.push_back(bound_test(tag + "_var_rel_error",
                                          std::fabs(m.variance - target_var) / target_var, 0.05,
                                          total));
    }

    // (c) Four functionals with one law, pairwise on disjoint halves.
    {
        const std::vector<std::pair<std::string, std::function<double(const PathRecord&)>>> laws = {
            {"area", [](const PathRecord& r) { return r.fs.area; }},
            {"half_l2", [](const PathRecord& r) { return r.fs.l2_half; }},
            {"half_inv_fwd1", [](const PathRecord& r) { return 0.5 * r.fs.inv_forward.at(1); }},
            {"half_inv_rev1", [](const PathRecord& r) { return 0.5 * r.fs.inv_reversed.at(1); }},
        };
        for (std::size_t i = 0; i < laws.size(); ++i) {
            for (std::size_t j = i + 1; j < laws.size(); ++j) {
                report.tests.push_back(ks_two_sample(first_half(laws[i].second),
                                                     second_half(laws[j].second), alpha,
                                                     "ks2_" + laws[i].first + "_vs_" + laws[j].first));
            }
        }
        add_moment("area", whole(laws[0].second));
        add_moment("half_l2", whole(laws[1].second));
    }

    // (d) Path maximum against half the plain inverse integral.
    report.tests.push_back(ks_two_sample(
        first_half([](const PathRecord& r) { return r.max_r; }),
        second_half([](const PathRecord& r) { return 0.5 * r.fs.inv_forward.at(0); }), alpha,
        "ks2_max_vs_half_inv_fwd0"));

    // (e) The two weighted-inverse sequences against the min functionals.
    for (int n : config.orders) {
        report.tests.push_back(ks_two_sample(
            first_half([n](const PathRecord& r) { return r.fs.min_n.at(n); }),
            second_half([n](const PathRecord& r) { return 0.5 * r.fs.inv_forward.at(n); }), alpha,
            "ks2_min" + std::to_string(n) + "_vs_half_inv_fwd" + std::to_string(n)));
        report.tests.push_back(ks_two_sample(
            first_half([n](const PathRecord& r) { return r.fs.min_n.at(n); }),
            second_half([n](const PathRecord& r) { return 0.5 * r.fs.inv_reversed.at(n); }), alpha,
            "ks2_min" + std::to_string(n) + "_vs_half_inv_rev" + std::to_string(n)));
    }

    // (f) Jeulin marginals against directly sampled excursion marginals.
    for (std::size_t ti = 0; ti < config.marginal_times.size(); ++ti) {
        report.tests.push_back(ks_two_sample(
            first_half([ti](const PathRecord& r) { return r.jeulin_at_times[ti]; }),
            second_half([ti](const PathRecord& r) { return r.excursion_at_times[ti]; }), alpha,
            "ks2_jeulin_vs_excursion_t" + fmt_time(config.marginal_times[ti])));
    }

    // (g) The recovered Brownian motion: W_1 standard normal, var of the
    // half time-integral equal to 1/12.
    {
        const std::vector<double> w1 = whole([](const PathRecord& r) { return r.fs.w_one; });
        report.tests.push_back(ks_one_sample_normal(w1, 0.0, 1.0, alpha, "ks_w1_vs_std_gauss"));
        add_moment("w_one", w1);
        const std::vector<double> half_int_w =
            whole([](const PathRecord& r) { return 0.5 * r.fs.w_area_weighted.at(1); });
        const MomentSummary m = add_moment("half_int_w_dt", half_int_w);
        report.tests.push_back(bound_test("half_int_w_var_abs_error",
                                          std::fabs(m.variance - 1.0 / 12.0), 0.005, total));
    }

    // (h) Pathwise residuals of the discretized identities.
    {
        double eq4 = 0.0;
        for (const PathRecord& r : records) eq4 = std::max(eq4, r.residual.at(1));
        report.tests.push_back(bound_test("eq4_residual_max", eq4, 1e-6, total));
        for (int n : config.orders) {
            if (n == 1) continue; // order 1 is the eq4 case above
            double worst = 0.0;
            for (const PathRecord& r : records) worst = std::max(worst, r.residual.at(n));
            report.tests.push_back(
                bound_test("eq7_residual_max_n" + std::to_string(n), worst, 1e-6, total));
        }
    }

    report.overall_pass = true;
    for (const TestReport& t : report.tests) report.overall_pass = report.overall_pass && t.pass;
    return report;
}

std::string report_json(const IdentitySuiteReport& report) {
    ordered_json j;
    j["config"] = config_json(report.config);
    j["tests"] = ordered_json::array();
    for (const TestReport& t : report.tests) {
        ordered_json tj;
        tj["name"] = t.name;
        tj["statistic"] = t.statistic;
        tj["threshold"] = t.threshold;
        tj["alpha"] = t.alpha;
        tj["pass"] = t.pass;
        tj["sample_sizes"] = {t.sample_sizes.first, t.sample_sizes.second};
        j["tests"].push_back(std::move(tj));
    }
    j["moments"] = ordered_json::array();
    for (const auto& [name, m] : report.moments) {
        ordered_json mj;
        mj["name"] = name;
        mj["count"] = m.count;
        mj["mean"] = m.mean;
        mj["variance"] = m.variance;
        mj["se_mean"] = m.se_mean;
        mj["se_variance"] = m.se_variance;
        j["moments"].push_back(std::move(mj));
    }
    j["overall_pass"] = report.overall_pass;
    return j.dump(2) + "\n";
}

IdentitySuiteReport run_verify(const ExperimentConfig& config) {
    validate_config(config);
    const std::vector<PathRecord> records = run_ensemble_parallel(ensemble_params(config));
    IdentitySuiteReport report = build_identity_report(records, config);
    write_file(config.output_dir, "verify_report.json", report_json(report));
    return report;
}

std::string convergence_csv(const std::vector<ConvergenceCell>& cells) {
    std::string out = "n_steps,bin_width,paths,mean_x,var_x,var_abs_error,max_eq4_residual\n";
    for (const ConvergenceCell& c : cells) {
        out += std::to_string(c.n_steps);
        out += ',';
        out += fmt17(c.bin_width);
        out += ',';
        out += std::to_string(c.paths);
        for (double v : {c.mean_x, c.var_x, c.var_abs_error, c.max_eq4_residual}) {
            out += ',';
            out += fmt17(v);
        }
        out += '\n';
    }
    return out;
}

std::vector<ConvergenceCell> run_convergence(const ExperimentConfig& config) {
    validate_config(config);
    const std::size_t steps[] = {1u << 10, 1u << 12, 1u << 14, 1u << 16};
    const double bins[] = {1.0 / 32.0, 1.0 / 64.0, 1.0 / 128.0, 1.0 / 256.0};

    std::vector<ConvergenceCell> cells;
    for (std::size_t s : steps) {
        for (double h : bins) {
            EnsembleParams params;
            params.paths = config.paths;
            params.n_steps = s;
            params.bin_width = h;
            params.seed = config.seed;
            params.orders = {1};
            params.lite = true;
            const std::vector<PathRecord> records = run_ensemble_parallel(params);

            ConvergenceCell cell;
            cell.n_steps = s;
            cell.bin_width = h;
            cell.paths = config.paths;
            std::vector<double> xs;
            xs.reserve(records.size());
            double worst = 0.0;
            for (const PathRecord& r : records) {
                xs.push_back(r.fs.x_stat);
                worst = std::max(worst, r.residual.at(1));
            }
            const MomentSummary m = moment_summary(xs);
            cell.mean_x = m.mean;
            cell.var_x = m.variance;
            cell.var_abs_error = std::fabs(m.variance - 1.0 / 12.0);
            cell.max_eq4_residual = worst;
            cells.push_back(cell);
        }
    }
    write_file(config.output_dir, "convergence.csv", convergence_csv(cells));
    return cells;
}

} // namespace excursion
