#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace mlsde {

using Vec = std::vector<double>;

enum class InitialKind { point_mass, normal };

// Law of the initial value: a fixed point, or centered normal with the given
// per-coordinate standard deviation.
struct InitialLaw {
    InitialKind kind = InitialKind::point_mass;
    Vec point;                // point_mass
    double sigma_bar = 0.0;   // normal

    static InitialLaw at_point(Vec x) { return {InitialKind::point_mass, std::move(x), 0.0}; }
    static InitialLaw centered_normal(double sigma_bar) {
        return {InitialKind::normal, {}, sigma_bar};
    }
};

// Structure of the diffusion matrix, used by the stepping kernels to skip
// work for the degenerate forms.
enum class DiffusionForm { zero, identity, general };

// dX_t = drift(X_t) dt + diffusion(X_t) dW_t on [0, horizon], X_0 ~ initial_law.
// drift maps R^d -> R^d; diffusion fills a row-major d x m matrix.
// Coefficients are evaluated in plain double arithmetic: extreme states
// overflow to IEEE infinities instead of trapping, since observing explosion
// is part of the contract.
struct SdeProblem {
    std::string name;
    int dim = 1;         // d
    int noise_dim = 1;   // m
    double horizon = 1.0;
    std::function<void(std::span<const double>, std::span<double>)> drift;
    DiffusionForm diffusion_form = DiffusionForm::general;
    std::function<void(std::span<const double>, std::span<double>)> diffusion;
    InitialLaw initial_law;
};

// Drift of the quintic test problem; shared so the deterministic recursion
// and the generic kernels agree bit for bit.
inline double x5_drift(double x) {
    double x2 = x * x;
    return -(x2 * x2 * x);
}

// dX = -X^5 dt, X_0 ~ N(0, sigma_bar^2), no noise.
SdeProblem make_x5_problem(double sigma_bar, double T);

// dX = (2X - X^3) dt + 2X dW, X_0 = 1, T = 1.
SdeProblem make_ginzburg_landau();

// dX = (X - ||X||^2 X) dt + dW in R^d, X_0 = 0, T = 1.
SdeProblem make_langevin(int dim);

// Registry for CLI selection; modifiers are applied where the problem uses
// them (sigma_bar and horizon for x5, dim for langevin).
SdeProblem problem_by_name(const std::string& name, double sigma_bar, int dim,
                           double horizon);

enum class PayoffKind { terminal_power, terminal_square_norm, path_sup_square_norm };

struct Payoff {
    PayoffKind kind = PayoffKind::terminal_square_norm;
    double exponent = 2.0;  // terminal_power only

    static Payoff terminal_power(double p);
    static Payoff terminal_square_norm() { return {PayoffKind::terminal_square_norm, 2.0}; }
    static Payoff path_sup_square_norm() { return {PayoffKind::path_sup_square_norm, 2.0}; }
};

}  // namespace mlsde
