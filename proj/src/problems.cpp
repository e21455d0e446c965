#include "mlsde/problems.hpp"

#include <cmath>
#include <stdexcept>

namespace mlsde {

SdeProblem make_x5_problem(double sigma_bar, double T) {
    if (sigma_bar < 0.0) throw std::invalid_argument("x5 problem: sigma_bar must be >= 0");
    if (!(T > 0.0)) throw std::invalid_argument("x5 problem: horizon must be > 0");
    SdeProblem p;
    p.name = "x5";
    p.dim = 1;
    p.noise_dim = 1;
    p.horizon = T;
    p.drift = [](std::span<const double> x, std::span<double> out) {
        out[0] = x5_drift(x[0]);
    };
    p.diffusion_form = DiffusionForm::zero;
    p.diffusion = [](std::span<const double>, std::span<double> out) { out[0] = 0.0; };
    p.initial_law = InitialLaw::centered_normal(sigma_bar);
    return p;
}

SdeProblem make_ginzburg_landau() {
    SdeProblem p;
    p.name = "ginzburg-landau";
    p.dim = 1;
    p.noise_dim = 1;
    p.horizon = 1.0;
    p.drift = [](std::span<const double> x, std::span<double> out) {
        out[0] = 2.0 * x[0] - x[0] * x[0] * x[0];
    };
    p.diffusion_form = DiffusionForm::general;
    p.diffusion = [](std::span<const double> x, std::span<double> out) {
        out[0] = 2.0 * x[0];
    };
    p.initial_law = InitialLaw::at_point({1.0});
    return p;
}

SdeProblem make_langevin(int dim) {
    if (dim < 1) throw std::invalid_argument("langevin problem: dim must be >= 1");
    SdeProblem p;
    p.name = "langevin";
    p.dim = dim;
    p.noise_dim = dim;
    p.horizon = 1.0;
    p.drift = [dim](std::span<const double> x, std::span<double> out) {
        double norm2 = 0.0;
        for (int i = 0; i < dim; ++i) norm2 += x[i] * x[i];
        for (int i = 0; i < dim; ++i) out[i] = x[i] - norm2 * x[i];
    };
    p.diffusion_form = DiffusionForm::identity;
    p.diffusion = [dim](std::span<const double>, std::span<double> out) {
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j) out[static_cast<std::size_t>(i) * dim + j] = (i == j) ? 1.0 : 0.0;
    };
    p.initial_law = InitialLaw::at_point(Vec(static_cast<std::size_t>(dim), 0.0));
    return p;
}

SdeProblem problem_by_name(const std::string& name, double sigma_bar, int dim,
                           double horizon) {
    if (name == "x5") return make_x5_problem(sigma_bar, horizon);
    if (name == "ginzburg-landau") return make_ginzburg_landau();
    if (name == "langevin") return make_langevin(dim);
    throw std::invalid_argument("unknown problem: " + name);
}

Payoff Payoff::terminal_power(double p) {
    if (!(p > 0.0)) throw std::invalid_argument("terminal_power: exponent must be > 0");
    return {PayoffKind::terminal_power, p};
}

}  // namespace mlsde
