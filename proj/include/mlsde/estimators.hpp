#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "mlsde/problems.hpp"
#include "mlsde/schemes.hpp"

namespace mlsde {

enum class Scheme { explicit_euler, tamed_euler, implicit_euler };

// |value| beyond this flags the run as diverged; the raw value is still
// reported. Explosions blow far past any such cutoff within a step or two,
// so the exact constant is not delicate.
inline constexpr double divergence_threshold = 1e12;

enum class DivergenceReason { non_finite, magnitude_exceeded };

struct LevelContribution {
    int level = 0;
    std::int64_t samples = 0;
    double sum = 0.0;           // raw sum of per-sample payoffs (or coupled differences)
    double contribution = 0.0;  // weighted term that enters the estimator value
};

struct EstimatorReport {
    double value = 0.0;
    std::vector<LevelContribution> per_level;
    std::int64_t total_samples = 0;
    bool diverged = false;
    std::optional<DivergenceReason> divergence_reason;
    double runtime_seconds = 0.0;
    std::uint64_t master_seed = 0;
};

// Average of the payoff over steps^2 independent explicit-Euler paths with
// `steps` time steps each.
EstimatorReport monte_carlo_euler(const SdeProblem& problem, const Payoff& payoff,
                                  int steps, std::uint64_t seed, int workers = 1);

// Multilevel estimator: N one-step samples at level 0 plus, for each level
// l = 1..log2(N), N/2^l coupled fine-minus-coarse samples weighted 2^l/N.
// Fine and coarse paths share the initial value and the Brownian path.
EstimatorReport mlmc(const SdeProblem& problem, Scheme scheme, const Payoff& payoff,
                     int steps, std::uint64_t seed, int workers = 1);

// One coupled sample: payoff(fine path, 2^level steps) - payoff(coarse path,
// 2^(level-1) steps) on the shared initial value and Brownian path.
double coupled_level_sample(const SdeProblem& problem, Scheme scheme,
                            const Payoff& payoff, int level, std::int64_t sample,
                            std::uint64_t seed);

struct RmseRow {
    int steps = 0;
    double rmse = 0.0;
    double mean_runtime_seconds = 0.0;
    int diverged_count = 0;
};

// Runs `replicates` independent mlmc estimates per N (seeds derived from
// `seed`) and reports the root mean square error against reference_value.
std::vector<RmseRow> rmse_curve(const SdeProblem& problem, Scheme scheme,
                                const Payoff& payoff, std::span<const int> steps_list,
                                int replicates, double reference_value,
                                std::uint64_t seed, int workers = 1);

}  // namespace mlsde
