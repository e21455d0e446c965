#include "mlsde/estimators.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "mlsde/accumulate.hpp"
#include "mlsde/parallel.hpp"
#include "mlsde/randomness.hpp"

namespace mlsde {

namespace {

int log2_exact(int n) {
    if (n < 2) return -1;
    int l = 0;
    int v = n;
    while (v > 1) {
        if (v % 2 != 0) return -1;
        v /= 2;
        ++l;
    }
    return l;
}

DiscretePath run_scheme(const SdeProblem& problem, Scheme scheme,
                        std::span<const double> init, const IncrementGrid& inc) {
    switch (scheme) {
        case Scheme::explicit_euler:
            return euler_maruyama(problem, init, inc);
        case Scheme::tamed_euler:
            return tamed_euler(problem, init, inc);
        case Scheme::implicit_euler:
            if (problem.name != "langevin")
                throw std::invalid_argument(
                    "implicit scheme is implemented only for the langevin problem");
            return implicit_euler_langevin(problem.dim, init, inc);
    }
    throw std::logic_error("run_scheme: unreachable");
}

// The stepping kernels never read the increments of a zero diffusion, so
// noise-free problems get an untouched all-zero grid instead of draws.
IncrementGrid path_increments(const SdeProblem& problem, RngStream& gen, int steps) {
    double dt = problem.horizon / steps;
    if (problem.diffusion_form == DiffusionForm::zero) {
        IncrementGrid grid;
        grid.steps = steps;
        grid.dt = dt;
        grid.noise_dim = problem.noise_dim;
        grid.data.assign(static_cast<std::size_t>(steps) * problem.noise_dim, 0.0);
        return grid;
    }
    return sample_increments(gen, steps, dt, problem.noise_dim);
}

// Payoff of a single path with `steps` steps drawn from the (level, sample)
// streams.
double single_path_payoff(const SdeProblem& problem, Scheme scheme,
                          const Payoff& payoff, std::uint32_t level,
                          std::int64_t sample, int steps, std::uint64_t seed) {
    RngStream init_gen = derive_stream(
        seed, {level, static_cast<std::uint64_t>(sample), StreamPurpose::initial});
    Vec init = sample_initial(problem, init_gen);
    RngStream inc_gen = derive_stream(
        seed, {level, static_cast<std::uint64_t>(sample), StreamPurpose::brownian});
    IncrementGrid inc = path_increments(problem, inc_gen, steps);
    return payoff_value(payoff, run_scheme(problem, scheme, init, inc));
}

void finalize(EstimatorReport& report) {
    KahanSum total;
    for (const LevelContribution& c : report.per_level) total.add(c.contribution);
    report.value = total.value();
    if (!std::isfinite(report.value)) {
        report.diverged = true;
        report.divergence_reason = DivergenceReason::non_finite;
    } else if (std::abs(report.value) > divergence_threshold) {
        report.diverged = true;
        report.divergence_reason = DivergenceReason::magnitude_exceeded;
    }
}

}  // namespace

EstimatorReport monte_carlo_euler(const SdeProblem& problem, const Payoff& payoff,
                                  int steps, std::uint64_t seed, int workers) {
    if (steps < 1) throw std::invalid_argument("monte_carlo_euler: steps must be >= 1");
    EstimatorReport report;
    report.master_seed = seed;
    const std::int64_t runs = static_cast<std::int64_t>(steps) * steps;

    auto start = std::chrono::steady_clock::now();
    std::vector<double> values(static_cast<std::size_t>(runs));
    parallel_for(runs, workers, [&](std::int64_t i) {
        values[static_cast<std::size_t>(i)] = single_path_payoff(
            problem, Scheme::explicit_euler, payoff, 0, i + 1, steps, seed);
    });
    KahanSum sum;
    for (double v : values) sum.add(v);
    report.runtime_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    LevelContribution c;
    c.level = 0;
    c.samples = runs;
    c.sum = sum.value();
    c.contribution = c.sum / static_cast<double>(runs);
    report.per_level.push_back(c);
    report.total_samples = runs;
    finalize(report);
    return report;
}

double coupled_level_sample(const SdeProblem& problem, Scheme scheme,
                            const Payoff& payoff, int level, std::int64_t sample,
                            std::uint64_t seed) {
    if (level < 1) throw std::invalid_argument("coupled_level_sample: level must be >= 1");
    RngStream init_gen =
        derive_stream(seed, {static_cast<std::uint32_t>(level),
                             static_cast<std::uint64_t>(sample), StreamPurpose::initial});
    Vec init = sample_initial(problem, init_gen);
    RngStream inc_gen =
        derive_stream(seed, {static_cast<std::uint32_t>(level),
                             static_cast<std::uint64_t>(sample), StreamPurpose::brownian});
    IncrementGrid fine = path_increments(problem, inc_gen, 1 << level);
    IncrementGrid coarse = coarsen(fine);
    double f_fine = payoff_value(payoff, run_scheme(problem, scheme, init, fine));
    double f_coarse = payoff_value(payoff, run_scheme(problem, scheme, init, coarse));
    return f_fine - f_coarse;
}

EstimatorReport mlmc(const SdeProblem& problem, Scheme scheme, const Payoff& payoff,
                     int steps, std::uint64_t seed, int workers) {
    const int levels = log2_exact(steps);
    if (levels < 1)
        throw std::invalid_argument("mlmc: steps must be a power of two >= 2");
    EstimatorReport report;
    report.master_seed = seed;

    auto start = std::chrono::steady_clock::now();
    std::vector<double> values(static_cast<std::size_t>(steps));

    // level 0: N samples of a one-step path
    parallel_for(steps, workers, [&](std::int64_t i) {
        values[static_cast<std::size_t>(i)] =
            single_path_payoff(problem, scheme, payoff, 0, i + 1, 1, seed);
    });
    {
        KahanSum sum;
        for (std::int64_t k = 0; k < steps; ++k) sum.add(values[static_cast<std::size_t>(k)]);
        LevelContribution c;
        c.level = 0;
        c.samples = steps;
        c.sum = sum.value();
        c.contribution = c.sum / static_cast<double>(steps);
        report.per_level.push_back(c);
        report.total_samples += c.samples;
    }

    for (int l = 1; l <= levels; ++l) {
        const std::int64_t n_l = steps >> l;
        parallel_for(n_l, workers, [&](std::int64_t i) {
            values[static_cast<std::size_t>(i)] =
                coupled_level_sample(problem, scheme, payoff, l, i + 1, seed);
        });
        KahanSum sum;
        for (std::int64_t k = 0; k < n_l; ++k) sum.add(values[static_cast<std::size_t>(k)]);
        LevelContribution c;
        c.level = l;
        c.samples = n_l;
        c.sum = sum.value();
        c.contribution = c.sum * (static_cast<double>(1 << l) / static_cast<double>(steps));
        report.per_level.push_back(c);
        report.total_samples += c.samples;
    }
    report.runtime_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    finalize(report);
    return report;
}

std::vector<RmseRow> rmse_curve(const SdeProblem& problem, Scheme scheme,
                                const Payoff& payoff, std::span<const int> steps_list,
                                int replicates, double reference_value,
                                std::uint64_t seed, int workers) {
    if (replicates < 2) throw std::invalid_argument("rmse_curve: replicates must be >= 2");
    if (!std::isfinite(reference_value))
        throw std::invalid_argument("rmse_curve: reference value must be finite");
    std::vector<RmseRow> rows;
    rows.reserve(steps_list.size());
    for (std::size_t row = 0; row < steps_list.size(); ++row) {
        const int N = steps_list[row];
        KahanSum sq_err;
        KahanSum runtime;
        int diverged = 0;
        for (int rep = 0; rep < replicates; ++rep) {
            std::uint64_t run_seed = derive_seed(
                seed, static_cast<std::uint64_t>(row) * static_cast<std::uint64_t>(replicates) + rep);
            EstimatorReport r = mlmc(problem, scheme, payoff, N, run_seed, workers);
            double err = std::isfinite(r.value)
                             ? r.value - reference_value
                             : std::numeric_limits<double>::infinity();
            sq_err.add(err * err);
            runtime.add(r.runtime_seconds);
            diverged += r.diverged ? 1 : 0;
        }
        RmseRow out;
        out.steps = N;
        out.rmse = std::sqrt(sq_err.value() / replicates);
        out.mean_runtime_seconds = runtime.value() / replicates;
        out.diverged_count = diverged;
        rows.push_back(out);
    }
    return rows;
}

}  // namespace mlsde
