#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "excursion/experiments.hpp"

using namespace excursion;
namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path fresh_dir(const std::string& tag) {
    const fs::path dir = fs::temp_directory_path() / ("excursion_test_" + tag);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

ExperimentConfig tiny_config(const std::string& tag) {
    ExperimentConfig cfg;
    cfg.paths = 16;
    cfg.n_steps = 256;
    cfg.bin_width = 1.0 / 16.0;
    cfg.seed = 42;
    cfg.output_dir = fresh_dir(tag).string();
    return cfg;
}

int run_cli(std::vector<std::string> args) {
    std::vector<const char*> argv;
    argv.push_back("excursion-lab");
    for (const auto& a : args) argv.push_back(a.c_str());
    return cli_main(static_cast<int>(argv.size()), argv.data());
}

} // namespace

TEST_CASE("config validation") {
    ExperimentConfig cfg;
    CHECK_NOTHROW(validate_config(cfg));
    cfg.paths = 0;
    CHECK_THROWS_AS(validate_config(cfg), std::invalid_argument);
    cfg = ExperimentConfig{};
    cfg.alpha = 1.0;
    CHECK_THROWS_AS(validate_config(cfg), std::invalid_argument);
    cfg = ExperimentConfig{};
    cfg.orders = {};
    CHECK_THROWS_AS(validate_config(cfg), std::invalid_argument);
    cfg = ExperimentConfig{};
    cfg.marginal_times = {0.0};
    CHECK_THROWS_AS(validate_config(cfg), std::invalid_argument);
}

TEST_CASE("simulate writes a deterministic csv with the pinned header") {
    ExperimentConfig cfg = tiny_config("simulate");
    cfg.paths = 3;
    run_simulate(cfg);
    const std::string first = read_file(fs::path(cfg.output_dir) / "functionals.csv");
    run_simulate(cfg);
    const std::string second = read_file(fs::path(cfg.output_dir) / "functionals.csv");
    CHECK(first == second);

    std::istringstream lines(first);
    std::string header;
    std::getline(lines, header);
    CHECK(header ==
          "path_index,area,l2_half,x_stat,w1,min_1,min_2,min_3,prop_1,prop_2,prop_3,"
          "inv_fwd_0,inv_fwd_1,inv_fwd_2,inv_rev_1,inv_rev_2,max_r");
    int rows = 0;
    std::string line;
    while (std::getline(lines, line)) {
        if (!line.empty()) ++rows;
    }
    CHECK(rows == 3);

    // 17 significant digits round-trip: x_stat column equals area - l2_half.
    std::istringstream again(first);
    std::getline(again, line);
    std::getline(again, line);
    std::vector<double> fields;
    std::stringstream fieldstream(line);
    std::string cell;
    std::getline(fieldstream, cell, ','); // path_index
    while (std::getline(fieldstream, cell, ',')) fields.push_back(std::stod(cell));
    CHECK(fields[2] == fields[0] - fields[1]);
}

TEST_CASE("verify report structure and json determinism") {
    ExperimentConfig cfg = tiny_config("verify");
    cfg.paths = 200;
    cfg.n_steps = 128;
    cfg.bin_width = 1.0 / 8.0;
    const IdentitySuiteReport report = run_verify(cfg);

    bool all = true;
    for (const TestReport& t : report.tests) all = all && t.pass;
    CHECK(report.overall_pass == all);

    const std::string bytes = read_file(fs::path(cfg.output_dir) / "verify_report.json");
    run_verify(cfg);
    CHECK(bytes == read_file(fs::path(cfg.output_dir) / "verify_report.json"));

    const auto j = nlohmann::json::parse(bytes);
    CHECK(j.contains("config"));
    CHECK(j.contains("tests"));
    CHECK(j.contains("moments"));
    CHECK(j.contains("overall_pass"));
    CHECK(j["config"]["paths"] == 200);
    // overall_pass is recomputable from the persisted test list alone.
    bool recomputed = true;
    for (const auto& t : j["tests"]) recomputed = recomputed && t["pass"].get<bool>();
    CHECK(j["overall_pass"].get<bool>() == recomputed);
}

TEST_CASE("coarse discretization fails the suite") {
    ExperimentConfig cfg = tiny_config("coarse");
    cfg.paths = 2000;
    cfg.n_steps = 64;
    cfg.bin_width = 1.0 / 8.0;
    const IdentitySuiteReport report = run_verify(cfg);
    CHECK_FALSE(report.overall_pass);
}

TEST_CASE("convergence table has the full 4x4 sweep") {
    ExperimentConfig cfg = tiny_config("conv");
    cfg.paths = 8;
    const auto cells = run_convergence(cfg);
    REQUIRE(cells.size() == 16);
    CHECK(cells.front().n_steps == 1024);
    CHECK(cells.front().bin_width == doctest::Approx(1.0 / 32.0));
    CHECK(cells.back().n_steps == 65536);
    CHECK(cells.back().bin_width == doctest::Approx(1.0 / 256.0));

    const std::string csv = read_file(fs::path(cfg.output_dir) / "convergence.csv");
    int rows = -1; // discount header
    std::istringstream lines(csv);
    std::string line;
    while (std::getline(lines, line)) {
        if (!line.empty()) ++rows;
    }
    CHECK(rows == 16);
}

TEST_CASE("config file loading and flag precedence") {
    const fs::path dir = fresh_dir("cfgfile");
    const fs::path cfg_path = dir / "config.json";
    {
        std::ofstream out(cfg_path);
        out << R"({"paths": 5, "n_steps": 128, "bin_width": 0.125, "seed": 7, "orders": [1, 2]})";
    }
    ExperimentConfig cfg;
    const bool has_seed = apply_config_file(cfg_path.string(), cfg);
    CHECK(has_seed);
    CHECK(cfg.paths == 5);
    CHECK(cfg.n_steps == 128);
    CHECK(cfg.seed == 7);
    CHECK(cfg.orders == std::vector<int>{1, 2});
    CHECK(cfg.alpha == 0.001); // untouched default

    // Flags override the file.
    const int rc = run_cli({"simulate", "--config", cfg_path.string(), "--paths", "2", "--out",
                            (dir / "out").string()});
    CHECK(rc == 0);
    const std::string csv = read_file(dir / "out" / "functionals.csv");
    int rows = -1;
    std::istringstream lines(csv);
    std::string line;
    while (std::getline(lines, line)) {
        if (!line.empty()) ++rows;
    }
    CHECK(rows == 2);

    CHECK_THROWS_AS(apply_config_file((dir / "missing.json").string(), cfg), IoError);
    {
        std::ofstream out(dir / "broken.json");
        out << "{not json";
    }
    CHECK_THROWS_AS(apply_config_file((dir / "broken.json").string(), cfg), std::invalid_argument);
}

TEST_CASE("cli exit codes") {
    const fs::path dir = fresh_dir("cli");

    // Invalid arguments.
    CHECK(run_cli({"simulate", "--paths", "0", "--out", dir.string()}) == 2);
    CHECK(run_cli({"bogus-subcommand"}) == 2);

    // I/O error: output directory path collides with an existing file.
    const fs::path blocker = dir / "blocked";
    {
        std::ofstream out(blocker);
        out << "x";
    }
    CHECK(run_cli({"simulate", "--paths", "2", "--steps", "64", "--bin-width", "0.125", "--out",
                   blocker.string()}) == 3);

    // Statistical failure at absurdly coarse resolution exits 1.
    CHECK(run_cli({"verify", "--paths", "400", "--steps", "64", "--bin-width", "0.25", "--out",
                   (dir / "v").string()}) == 1);

    // A tiny simulate run succeeds.
    CHECK(run_cli({"simulate", "--paths", "2", "--steps", "64", "--bin-width", "0.125", "--out",
                   (dir / "s").string()}) == 0);
}

TEST_CASE("environment seed applies only when no flag or file seed is given") {
    const fs::path dir = fresh_dir("envseed");
    setenv("EXCURSION_SEED", "1234", 1);
    CHECK(run_cli({"simulate", "--paths", "2", "--steps", "64", "--bin-width", "0.125", "--out",
                   (dir / "env").string()}) == 0);
    CHECK(run_cli({"simulate", "--paths", "2", "--steps", "64", "--bin-width", "0.125", "--seed",
                   "1234", "--out", (dir / "flag").string()}) == 0);
    CHECK(run_cli({"simulate", "--paths", "2", "--steps", "64", "--bin-width", "0.125", "--seed",
                   "42", "--out", (dir / "other").string()}) == 0);
    unsetenv("EXCURSION_SEED");

    const std::string env_csv = read_file(dir / "env" / "functionals.csv");
    CHECK(env_csv == read_file(dir / "flag" / "functionals.csv"));
    CHECK(env_csv != read_file(dir / "other" / "functionals.csv"));

    setenv("EXCURSION_SEED", "not-a-number", 1);
    CHECK(run_cli({"simulate", "--paths", "2", "--steps", "64", "--bin-width", "0.125", "--out",
                   (dir / "bad").string()}) == 2);
    unsetenv("EXCURSION_SEED");
}
