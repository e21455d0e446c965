#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "mlsde/csv.hpp"
#include "mlsde/experiments.hpp"

using namespace mlsde;

namespace {

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) out.push_back(line);
    return out;
}

int columns_of(const std::string& line) {
    int n = 1;
    for (char c : line)
        if (c == ',') ++n;
    return n;
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace

TEST_SUITE("experiments") {

TEST_CASE("csv double formatting") {
    CHECK(format_double(0.5) == "0.5");
    CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(format_double(-std::numeric_limits<double>::infinity()) == "-inf");
    CHECK(format_double(std::numeric_limits<double>::quiet_NaN()) == "nan");
    // the shortest form must round-trip
    double v = 0.2880086013123456;
    CHECK(std::stod(format_double(v)) == v);
    CHECK(std::stod(format_double(1e300)) == 1e300);
}

TEST_CASE("parse_steps_list") {
    CHECK(parse_steps_list("2^1..2^4") == std::vector<int>{2, 4, 8, 16});
    CHECK(parse_steps_list("16,32,64") == std::vector<int>{16, 32, 64});
    CHECK(parse_steps_list("2^4,2^7") == std::vector<int>{16, 128});
    CHECK(parse_steps_list("4..16") == std::vector<int>{4, 8, 16});
    CHECK_THROWS_AS(parse_steps_list(""), std::invalid_argument);
    CHECK_THROWS_AS(parse_steps_list("3..12"), std::invalid_argument);
}

TEST_CASE("experiment name round-trip") {
    for (const char* name :
         {"fig_divergence_sigma1", "fig_converge_then_diverge_sigma01",
          "fig_converge_then_diverge_sigma033", "fig_ginzburg", "fig_langevin_benchmark",
          "mlmc_tamed_convergence"})
        CHECK(to_string(experiment_by_name(name)) == name);
    CHECK_THROWS_AS(experiment_by_name("fig_unknown"), std::invalid_argument);
}

TEST_CASE("divergence figure experiment") {
    ExperimentConfig cfg;
    cfg.experiment = ExperimentName::fig_divergence_sigma1;
    cfg.seed = 42;
    std::string csv = run_experiment_to_string(cfg);
    std::vector<std::string> rows = lines_of(csv);
    REQUIRE(rows.size() == 1 + 4 * 7);  // header + 4 replicates x N in 2^1..2^7

    int header_cols = columns_of(rows[0]);
    bool explosion_seen = false;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        CHECK(columns_of(rows[i]) == header_cols);
        double err = std::stod(split(rows[i])[9]);
        if (!std::isfinite(err) || err > 1e10) explosion_seen = true;
    }
    CHECK(explosion_seen);
}

TEST_CASE("replicates=0 yields a header-only csv") {
    ExperimentConfig cfg;
    cfg.experiment = ExperimentName::fig_divergence_sigma1;
    cfg.replicates = 0;
    std::string csv = run_experiment_to_string(cfg);
    CHECK(lines_of(csv).size() == 1);

    cfg.experiment = ExperimentName::mlmc_tamed_convergence;
    CHECK(lines_of(run_experiment_to_string(cfg)).size() == 1);
}

TEST_CASE("experiment output is byte-reproducible") {
    ExperimentConfig cfg;
    cfg.experiment = ExperimentName::fig_divergence_sigma1;
    cfg.seed = 7;
    cfg.replicates = 2;
    cfg.steps_range = {2, 4, 8, 16};
    std::string a = run_experiment_to_string(cfg);
    std::string b = run_experiment_to_string(cfg);
    CHECK(a == b);
    cfg.workers = 4;
    CHECK(run_experiment_to_string(cfg) == a);
    cfg.seed = 8;
    CHECK(run_experiment_to_string(cfg) != a);
}

TEST_CASE("small-noise experiment converges on a reduced range") {
    ExperimentConfig cfg;
    cfg.experiment = ExperimentName::fig_converge_then_diverge_sigma01;
    cfg.seed = 4;
    cfg.replicates = 2;
    cfg.steps_range = {1 << 6, 1 << 8};
    std::vector<std::string> rows = lines_of(run_experiment_to_string(cfg));
    REQUIRE(rows.size() == 5);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        std::vector<std::string> f = split(rows[i]);
        CHECK(f[10] == "0");               // no divergence flag
        CHECK(std::stod(f[9]) < 0.05);     // small absolute error
    }
}

TEST_CASE("benchmark experiment schema") {
    ExperimentConfig cfg;
    cfg.experiment = ExperimentName::mlmc_tamed_convergence;
    cfg.seed = 11;
    cfg.replicates = 2;
    cfg.steps_range = {1 << 4, 1 << 5};
    std::vector<std::string> rows = lines_of(run_experiment_to_string(cfg));
    REQUIRE(rows.size() == 3);
    CHECK(split(rows[0]).size() == 9);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        std::vector<std::string> f = split(rows[i]);
        REQUIRE(f.size() == 9);
        CHECK(f[2] == "tamed");
        CHECK(std::stod(f[6]) >= 0.0);  // rmse
        CHECK(f[8] == "0");             // diverged_count
    }
}

TEST_CASE("config validation and file errors") {
    ExperimentConfig cfg;
    cfg.experiment = ExperimentName::fig_divergence_sigma1;
    cfg.steps_range = {3};
    CHECK_THROWS_AS(run_experiment_to_string(cfg), std::invalid_argument);

    ExperimentConfig ok;
    ok.experiment = ExperimentName::fig_divergence_sigma1;
    ok.replicates = 1;
    ok.steps_range = {2};
    ok.output_path = "/nonexistent-dir/out.csv";
    CHECK_THROWS_AS(run_experiment(ok), std::runtime_error);
    ok.output_path.clear();
    CHECK_THROWS_AS(run_experiment(ok), std::invalid_argument);
}

}  // TEST_SUITE
