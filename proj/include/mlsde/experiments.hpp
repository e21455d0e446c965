#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace mlsde {

enum class ExperimentName {
    fig_divergence_sigma1,
    fig_converge_then_diverge_sigma01,
    fig_converge_then_diverge_sigma033,
    fig_ginzburg,
    fig_langevin_benchmark,
    mlmc_tamed_convergence,
};

ExperimentName experiment_by_name(const std::string& name);
std::string to_string(ExperimentName name);

struct ExperimentConfig {
    ExperimentName experiment = ExperimentName::fig_divergence_sigma1;
    std::uint64_t seed = 42;
    int replicates = -1;             // -1 picks the experiment default; 0 emits header only
    std::vector<int> steps_range;    // powers of two; empty picks the default
    std::string output_path;
    int workers = 1;

    void validate() const;
};

// Runs the named experiment and renders its CSV. Error-style experiments
// (the figure reproductions) emit one row per (replicate, N) with the
// absolute error against the reference value; benchmark-style experiments
// emit one row per (scheme, N) with rmse and mean runtime.
std::string run_experiment_to_string(const ExperimentConfig& cfg);

// Same, then writes the bytes to cfg.output_path.
void run_experiment(const ExperimentConfig& cfg);

// Parses "2^4..2^10", "2^4,2^7", or "16,32,64" into a list of step counts.
std::vector<int> parse_steps_list(const std::string& text);

}  // namespace mlsde
