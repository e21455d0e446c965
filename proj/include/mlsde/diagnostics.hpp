#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace mlsde {

// Realized initial values xi^{l,k} of one multilevel run: level l in
// {0..log2(N)} holds N/2^l samples.
struct InitialArray {
    double horizon = 1.0;
    double sigma_bar = 1.0;
    int steps = 2;                            // N, power of two
    std::vector<std::vector<double>> values;  // values[l][k-1]

    int levels() const;      // log2(steps)
    void validate() const;   // shape check
};

// Draws the array from the same (level, sample, initial) streams the
// estimators use, so the diagnostics describe an actual estimator run.
InitialArray sample_initial_array(double sigma_bar, double T, int steps,
                                  std::uint64_t seed);

// The level carrying the largest explosive initial value, the maximal
// magnitudes at that level and one below, and the four exceptional events
// used to locate which level dominates the multilevel sum.
struct LevelStats {
    int level = 1;       // L_N in {1..log2(N)}
    double eta = 0.0;    // max |xi^{L_N, k}|
    double theta = 0.0;  // max |xi^{L_N - 1, k}| (level 0 when L_N = 1)
    bool a1 = false;
    bool a2 = false;
    bool a3 = false;
    bool a4 = false;
    double delta = 0.25;
};

LevelStats compute_level_stats(const InitialArray& init, double delta);

// |xi| > (2 N / T)^{1/4}: above this the x5 Euler iterates grow strictly;
// at or below they contract.
bool explosion_predicate(double xi, int steps, double T);

struct TrendRow {
    int steps = 0;
    double mean_level = 0.0;      // mean L_N over replicates
    double union_fraction = 0.0;  // fraction with A1 | A2 | A3 | A4
};

std::vector<TrendRow> level_stats_trend(double sigma_bar, double T,
                                        std::span<const int> steps_list,
                                        int replicates, double delta,
                                        std::uint64_t seed);

}  // namespace mlsde
