#pragma once

#include <cstdint>
#include <vector>

#include "mlsde/randomness.hpp"

namespace mlsde {

// Quadrature rule used to integrate payoffs of the x5 closed-form solution
// against the normal initial law.
struct QuadratureSpec {
    enum class Rule { adaptive_simpson, gauss_hermite };
    Rule rule = Rule::adaptive_simpson;
    int nodes = 64;                  // gauss_hermite: >= 16
    double abs_tol = 1e-8;           // adaptive_simpson
    double range_multiplier = 12.0;  // adaptive_simpson: integrate over [-k sb, k sb]

    void validate() const;
};

// X_t = xi / (1 + 4 t xi^4)^{1/4}; evaluated via the reciprocal form for
// |xi| > 1 so xi^4 never overflows.
double exact_x5_terminal(double xi, double t);

// E[ |X_T|^p ] for X_0 ~ N(0, sigma_bar^2) under the closed-form solution.
double x5_expectation(double sigma_bar, double T, double p,
                      const QuadratureSpec& spec = QuadratureSpec{});

// Pathwise exact Ginzburg-Landau solution X_t = exp(2 W_t) / sqrt(1 + 2
// int_0^t exp(4 W_s) ds) evaluated on the grid; the integral uses the
// trapezoid rule on the same grid. Requires a scalar grid spanning [0, 1].
std::vector<double> gl_exact_path(const IncrementGrid& fine);
double gl_exact_terminal(const IncrementGrid& fine);

struct ReferenceEstimate {
    double value = 0.0;
    double standard_error = 0.0;  // NaN when samples == 1
    std::int64_t samples = 0;
};

// Monte Carlo mean of gl_exact_terminal^2 over independent fine Brownian
// grids; requires fine_steps >= 4096.
ReferenceEstimate gl_reference_value(std::int64_t samples, int fine_steps,
                                     std::uint64_t seed, int workers = 1);

}  // namespace mlsde
