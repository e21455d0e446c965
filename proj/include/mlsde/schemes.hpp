#pragma once

#include <span>
#include <vector>

#include "mlsde/problems.hpp"
#include "mlsde/randomness.hpp"

namespace mlsde {

enum class SchemeTag { explicit_euler, tamed_euler, implicit_euler, deterministic };

// Iterates Y_0..Y_N on the uniform grid t_n = n T / N, plus piecewise-linear
// interpolant access via interpolate().
struct DiscretePath {
    double horizon = 1.0;
    int dim = 1;
    SchemeTag tag = SchemeTag::explicit_euler;
    std::vector<double> times;   // N + 1
    std::vector<double> states;  // (N + 1) x dim, row-major

    int steps() const { return static_cast<int>(times.size()) - 1; }
    std::span<const double> state(int n) const {
        return {states.data() + static_cast<std::size_t>(n) * dim,
                static_cast<std::size_t>(dim)};
    }
    std::span<const double> terminal() const { return state(steps()); }
};

// Y_{n+1} = Y_n + mu(Y_n) h + sigma(Y_n) dW_n. Non-finite states propagate.
DiscretePath euler_maruyama(const SdeProblem& problem, std::span<const double> init,
                            const IncrementGrid& inc);

// Same with the drift increment replaced by mu h / (1 + ||mu h||); the drift
// move per step has norm < 1, the diffusion term is untouched.
DiscretePath tamed_euler(const SdeProblem& problem, std::span<const double> init,
                         const IncrementGrid& inc);

// Backward Euler specialized to the Langevin drift x - ||x||^2 x. Each step
// reduces to the scalar monotone equation h r^3 + (1-h) r = ||Y_n + dW||
// solved by safeguarded Newton; requires h <= 1 so the equation stays
// monotone (the linear coefficient vanishes at h = 1).
DiscretePath implicit_euler_langevin(int dim, std::span<const double> init,
                                     const IncrementGrid& inc, double tol = 1e-12,
                                     int max_iter = 100);

// Solves h r^3 + (1-h) r = b_norm for the unique nonnegative root. Exposed
// for direct residual checks.
double solve_radial_implicit_step(double b_norm, double h, double tol = 1e-12,
                                  int max_iter = 100);

// y_{n+1} = y_n - y_n^5 h; identical, bit for bit, to euler_maruyama on the
// noise-free x5 problem started at x.
DiscretePath deterministic_x5_path(double x, int steps, double T);

// log |y_n| for the same recursion, computed entirely in log-magnitude space:
// a' = a + log|1 - h e^{4a}|. Stays meaningful long after |y_n| overflows
// doubles; saturates to +inf beyond that. a_0 = log|x| is passed in so callers
// can start from virtual magnitudes with log|x| up to ~1e300.
std::vector<double> x5_log_magnitudes(double log_abs_x, int steps, double T);

// Piecewise-linear value at t; exact at grid points. t may miss [0, T] by at
// most 1e-12 before this errors.
Vec interpolate(const DiscretePath& path, double t);

// Payoff functional applied to a discrete path. path_sup_square_norm is the
// max of ||.||^2 over the vertices, which is exact for the piecewise-linear
// interpolant.
double payoff_value(const Payoff& payoff, const DiscretePath& path);

}  // namespace mlsde
