#pragma once

// Shared helpers for the unit and acceptance suites: independent oracles and
// statistics utilities. Everything here must stay independent of the library
// implementation paths it is used to check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "mlsde/diagnostics.hpp"
#include "mlsde/randomness.hpp"
#include "mlsde/schemes.hpp"

namespace testsupport {

inline double normal_cdf(double x) {
    return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

// Kolmogorov-Smirnov distance of a sample against the standard normal.
inline double ks_normal_stat(std::vector<double> xs) {
    std::sort(xs.begin(), xs.end());
    const double n = static_cast<double>(xs.size());
    double d = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double f = normal_cdf(xs[i]);
        d = std::max(d, std::abs((static_cast<double>(i) + 1.0) / n - f));
        d = std::max(d, std::abs(f - static_cast<double>(i) / n));
    }
    return d;
}

// Least-squares slope of log2(y) against log2(x).
inline double fit_log2_slope(const std::vector<int>& xs, const std::vector<double>& ys) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double lx = std::log2(static_cast<double>(xs[i]));
        double ly = std::log2(ys[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

struct MeanSe {
    double mean = 0.0;
    double se = 0.0;
};

inline MeanSe mean_se(const std::vector<double>& xs) {
    double sum = 0.0;
    for (double x : xs) sum += x;
    double mean = sum / static_cast<double>(xs.size());
    double sq = 0.0;
    for (double x : xs) sq += (x - mean) * (x - mean);
    double var = sq / (static_cast<double>(xs.size()) - 1.0);
    return {mean, std::sqrt(var / static_cast<double>(xs.size()))};
}

// lhs <= rhs up to a relative tolerance, with saturated infinities compared
// the way the underlying monotone quantities demand.
inline bool leq_tol(double lhs, double rhs, double tol) {
    if (std::isinf(rhs) && rhs > 0) return true;
    if (std::isinf(lhs) && lhs < 0) return true;
    return lhs <= rhs + tol * std::max(1.0, std::abs(rhs));
}

// ---------------------------------------------------------------------------
// Brute-force re-implementation of the level statistics, translated directly
// from the defining formulas with no shared code.
inline mlsde::LevelStats naive_level_stats(const mlsde::InitialArray& init, double delta) {
    const int ld_n = static_cast<int>(std::llround(std::log2(static_cast<double>(init.steps))));
    const double T = init.horizon;
    const double n = static_cast<double>(init.steps);

    int level = 1;
    for (int l = 1; l <= ld_n; ++l) {
        bool hit = false;
        for (double x : init.values[static_cast<std::size_t>(l)])
            if (std::abs(x) > std::pow(2.0, l / 4.0) * std::pow(T, -0.25)) hit = true;
        if (hit) level = std::max(level, l);
    }

    double eta = 0.0;
    for (double x : init.values[static_cast<std::size_t>(level)]) eta = std::max(eta, std::abs(x));
    double theta = 0.0;
    for (double x : init.values[static_cast<std::size_t>(level) - 1])
        theta = std::max(theta, std::abs(x));

    double floor_arg = std::floor(
        2.0 * std::log2(init.sigma_bar * init.sigma_bar * std::sqrt(T) * std::log(n)));

    bool a1 = static_cast<double>(level) < floor_arg;

    bool a2 = false;
    for (int l = 0; l <= ld_n; ++l)
        for (double x : init.values[static_cast<std::size_t>(l)])
            if (std::abs(x) >= std::pow(2.0, (l - 1) / 4.0) * std::pow(T, -0.25) * n) a2 = true;

    bool a3 = false;
    for (int l = 1; l <= ld_n + 1; ++l) {
        if (static_cast<double>(l) < floor_arg) continue;
        double lo = std::pow(2.0, l / 4.0) * std::pow(T, -0.25);
        double hi = lo * (1.0 + std::pow(5.0, -delta * std::pow(2.0, l - 1)));
        if (lo <= eta && eta < hi) a3 = true;
    }

    bool a4 = std::abs(eta - theta) <= std::pow(4.0, -std::pow(2.0, level - 1)) * eta;

    mlsde::LevelStats out;
    out.level = level;
    out.eta = eta;
    out.theta = theta;
    out.a1 = a1;
    out.a2 = a2;
    out.a3 = a3;
    out.a4 = a4;
    out.delta = delta;
    return out;
}

// ---------------------------------------------------------------------------
// Offset log-space iterate for initial values sitting just above the
// explosion threshold: with |x| = (2N/T)^{1/4} e^{b}, the magnitude satisfies
// b_{n+1} = b_n + log(2 e^{4 b_n} - 1) exactly, which resolves margins far
// below 1 ulp of log|x|.
inline double x5_offset_log_step(double b) {
    if (b > 10.0) return 5.0 * b + std::numbers::ln2 + std::log1p(-0.5 * std::exp(-4.0 * b));
    return b + std::log1p(2.0 * std::expm1(4.0 * b));
}

// ---------------------------------------------------------------------------
// Property suite for the deterministic x5 recursion lemmas, run in
// log-magnitude space. Returns the number of violated inequalities over
// `instances` randomized cases; exact statements, tolerance 1e-9.
inline int lemma_suite_violations(int instances, std::uint64_t seed) {
    using mlsde::x5_log_magnitudes;
    constexpr double tol = 1e-9;
    int violations = 0;
    mlsde::RngStream gen = mlsde::derive_stream(seed, {0, 1, mlsde::StreamPurpose::reference});

    for (int inst = 0; inst < instances; ++inst) {
        const int N = 1 << static_cast<int>(gen.next_uniform() * 10.99);  // 2^0 .. 2^10
        const double T = 0.25 + 3.75 * gen.next_uniform();
        const double log_thr = 0.25 * std::log(2.0 * N / T);

        // small initial values stay small (contraction below the threshold)
        {
            double a0 = log_thr - 5.0 * gen.next_uniform();
            std::vector<double> a = x5_log_magnitudes(a0, N, T);
            for (double an : a)
                if (!leq_tol(an, a0, tol)) ++violations;
        }

        // large initial values grow monotonically and follow the magnitude
        // identity |y_{n+1}| = |y_n| (h y_n^4 - 1), i.e. h y_n^4 >= 2 along
        // the way
        const double u = 1e-6 + 10.0 * gen.next_uniform();
        const double a0 = log_thr + u;
        std::vector<double> big = x5_log_magnitudes(a0, N, T);
        const double log_h = std::log(T / N);
        for (int n = 0; n <= N; ++n) {
            if (!leq_tol(a0, big[static_cast<std::size_t>(n)], tol)) ++violations;
            if (n < N && std::isfinite(big[static_cast<std::size_t>(n)])) {
                if (!leq_tol(std::numbers::ln2, log_h + 4.0 * big[static_cast<std::size_t>(n)], tol))
                    ++violations;
            }
        }

        // growth bound: h^{1/4} |y_n| <= (h^{1/4} |x|)^{5^n}
        {
            double base = 0.25 * log_h + a0;
            double p5 = 1.0;
            for (int n = 0; n <= N; ++n) {
                if (!leq_tol(0.25 * log_h + big[static_cast<std::size_t>(n)], p5 * base, tol))
                    ++violations;
                p5 *= 5.0;
            }
        }

        // monotonicity in the initial value
        {
            double a0_small = a0 - 3.0 * gen.next_uniform();
            std::vector<double> small = x5_log_magnitudes(a0_small, N, T);
            for (int n = 0; n <= N; ++n)
                if (!leq_tol(small[static_cast<std::size_t>(n)], big[static_cast<std::size_t>(n)], tol))
                    ++violations;
        }

        // multiples of the initial value: |y_n^{N,Mx}| >= M^{5^n} |y_n^{N,x}|
        // and |y_n^{N,x}| >= M^{5^n} (2N/T)^{1/4} when |x| >= M (2N/T)^{1/4}
        {
            double log_m = 2.0 * gen.next_uniform();  // M in [1, e^2]
            std::vector<double> scaled = x5_log_magnitudes(a0 + log_m, N, T);
            double p5 = 1.0;
            for (int n = 0; n <= N; ++n) {
                if (!leq_tol(p5 * log_m + big[static_cast<std::size_t>(n)],
                             scaled[static_cast<std::size_t>(n)], tol))
                    ++violations;
                if (!leq_tol(p5 * (log_m + u) + log_thr, scaled[static_cast<std::size_t>(n)], tol))
                    ++violations;
                p5 *= 5.0;
            }
        }

        // terminal lower bound for |x| >= (2N/T)^{1/4} (1 + 5^{-rN}), in
        // threshold-offset coordinates
        {
            const double r = gen.next_uniform() < 0.5 ? 0.25 : 0.5;
            const int nb = std::min(N, 512);
            double b = std::log1p(std::pow(5.0, -r * nb));
            for (int n = 0; n < nb; ++n) b = x5_offset_log_step(b);
            double bound = 0.5 * std::pow(5.0, (1.0 - r) * nb);
            if (!leq_tol(bound, b, tol)) ++violations;
        }
    }
    return violations;
}

}  // namespace testsupport
