#include "mlsde/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "mlsde/randomness.hpp"

namespace mlsde {

namespace {

int log2_exact_or_throw(int n) {
    if (n >= 2) {
        int l = 0;
        int v = n;
        while (v > 1 && v % 2 == 0) {
            v /= 2;
            ++l;
        }
        if (v == 1) return l;
    }
    throw std::invalid_argument("InitialArray: steps must be a power of two >= 2");
}

double max_abs(const std::vector<double>& xs) {
    double best = 0.0;
    for (double x : xs) best = std::max(best, std::abs(x));
    return best;
}

}  // namespace

int InitialArray::levels() const { return log2_exact_or_throw(steps); }

void InitialArray::validate() const {
    int L = log2_exact_or_throw(steps);
    if (static_cast<int>(values.size()) != L + 1)
        throw std::invalid_argument("InitialArray: expected one vector per level 0..log2(N)");
    for (int l = 0; l <= L; ++l) {
        if (static_cast<int>(values[static_cast<std::size_t>(l)].size()) != (steps >> l))
            throw std::invalid_argument("InitialArray: level " + std::to_string(l) +
                                        " must hold N/2^l samples");
    }
    if (!(horizon > 0.0)) throw std::invalid_argument("InitialArray: horizon must be > 0");
    if (sigma_bar < 0.0) throw std::invalid_argument("InitialArray: sigma_bar must be >= 0");
}

InitialArray sample_initial_array(double sigma_bar, double T, int steps,
                                  std::uint64_t seed) {
    InitialArray arr;
    arr.horizon = T;
    arr.sigma_bar = sigma_bar;
    arr.steps = steps;
    int L = log2_exact_or_throw(steps);
    arr.values.resize(static_cast<std::size_t>(L) + 1);
    for (int l = 0; l <= L; ++l) {
        int count = steps >> l;
        auto& level = arr.values[static_cast<std::size_t>(l)];
        level.resize(static_cast<std::size_t>(count));
        for (int k = 1; k <= count; ++k) {
            RngStream gen = derive_stream(seed, {static_cast<std::uint32_t>(l),
                                                 static_cast<std::uint64_t>(k),
                                                 StreamPurpose::initial});
            level[static_cast<std::size_t>(k) - 1] = sigma_bar * gen.next_normal();
        }
    }
    return arr;
}

LevelStats compute_level_stats(const InitialArray& init, double delta) {
    if (!(delta > 0.0 && delta < 0.5))
        throw std::invalid_argument("compute_level_stats: delta must lie in (0, 1/2)");
    init.validate();
    const int ld_n = init.levels();
    const double T = init.horizon;
    const double t_quarter = std::pow(T, -0.25);

    LevelStats stats;
    stats.delta = delta;

    // L_N = max({1} u {l >= 1 : some |xi^{l,k}| > 2^{l/4} T^{-1/4}})
    stats.level = 1;
    for (int l = 1; l <= ld_n; ++l) {
        double threshold = std::exp2(0.25 * l) * t_quarter;
        for (double x : init.values[static_cast<std::size_t>(l)]) {
            if (std::abs(x) > threshold) {
                stats.level = l;
                break;
            }
        }
    }
    stats.eta = max_abs(init.values[static_cast<std::size_t>(stats.level)]);
    stats.theta = max_abs(init.values[static_cast<std::size_t>(stats.level) - 1]);

    const double n = static_cast<double>(init.steps);
    // floor(2 ld(sb^2 sqrt(T) ln N)); -inf when sigma_bar == 0, kept literal.
    const double a1_floor =
        std::floor(2.0 * std::log2(init.sigma_bar * init.sigma_bar * std::sqrt(T) * std::log(n)));
    stats.a1 = static_cast<double>(stats.level) < a1_floor;

    stats.a2 = false;
    for (int l = 0; l <= ld_n && !stats.a2; ++l) {
        double threshold = std::exp2(0.25 * (l - 1)) * t_quarter * n;
        for (double x : init.values[static_cast<std::size_t>(l)]) {
            if (std::abs(x) >= threshold) {
                stats.a2 = true;
                break;
            }
        }
    }

    stats.a3 = false;
    {
        int lo = 1;
        if (a1_floor > 1.0) {
            if (a1_floor > static_cast<double>(ld_n) + 1.0) {
                lo = ld_n + 2;  // empty range
            } else {
                lo = static_cast<int>(a1_floor);
            }
        }
        for (int l = lo; l <= ld_n + 1; ++l) {
            double base = std::exp2(0.25 * l) * t_quarter;
            double band = base * (1.0 + std::pow(5.0, -delta * std::exp2(l - 1)));
            if (base <= stats.eta && stats.eta < band) {
                stats.a3 = true;
                break;
            }
        }
    }

    stats.a4 = std::abs(stats.eta - stats.theta) <=
               std::pow(4.0, -std::exp2(stats.level - 1)) * stats.eta;
    return stats;
}

bool explosion_predicate(double xi, int steps, double T) {
    if (steps < 1) throw std::invalid_argument("explosion_predicate: steps must be >= 1");
    return std::abs(xi) > std::pow(2.0 * steps / T, 0.25);
}

std::vector<TrendRow> level_stats_trend(double sigma_bar, double T,
                                        std::span<const int> steps_list,
                                        int replicates, double delta,
                                        std::uint64_t seed) {
    std::vector<TrendRow> rows;
    if (replicates <= 0) return rows;
    rows.reserve(steps_list.size());
    for (std::size_t i = 0; i < steps_list.size(); ++i) {
        const int N = steps_list[i];
        double level_sum = 0.0;
        int union_count = 0;
        for (int rep = 0; rep < replicates; ++rep) {
            std::uint64_t rep_seed = derive_seed(
                seed, static_cast<std::uint64_t>(i) * static_cast<std::uint64_t>(replicates) + rep);
            InitialArray arr = sample_initial_array(sigma_bar, T, N, rep_seed);
            LevelStats stats = compute_level_stats(arr, delta);
            level_sum += stats.level;
            union_count += (stats.a1 || stats.a2 || stats.a3 || stats.a4) ? 1 : 0;
        }
        rows.push_back({N, level_sum / replicates,
                        static_cast<double>(union_count) / replicates});
    }
    return rows;
}

}  // namespace mlsde
