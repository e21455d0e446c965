#include "mlsde/schemes.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace mlsde {

namespace {

void check_grid(const SdeProblem& problem, std::span<const double> init,
                const IncrementGrid& inc, const char* who) {
    if (static_cast<int>(init.size()) != problem.dim)
        throw std::invalid_argument(std::string(who) + ": initial value has wrong dimension");
    if (inc.noise_dim != problem.noise_dim)
        throw std::invalid_argument(std::string(who) + ": increment grid has wrong noise dimension");
    double span = static_cast<double>(inc.steps) * inc.dt;
    if (std::abs(span - problem.horizon) > 1e-12 * std::abs(problem.horizon))
        throw std::invalid_argument(std::string(who) + ": grid does not span the problem horizon");
}

DiscretePath make_path(double horizon, int dim, int steps, SchemeTag tag) {
    DiscretePath path;
    path.horizon = horizon;
    path.dim = dim;
    path.tag = tag;
    double h = horizon / steps;
    path.times.resize(static_cast<std::size_t>(steps) + 1);
    for (int n = 0; n <= steps; ++n) path.times[static_cast<std::size_t>(n)] = n * h;
    path.states.resize((static_cast<std::size_t>(steps) + 1) * dim);
    return path;
}

DiscretePath run_explicit(const SdeProblem& problem, std::span<const double> init,
                          const IncrementGrid& inc, bool tamed) {
    check_grid(problem, init, inc, tamed ? "tamed_euler" : "euler_maruyama");
    const int d = problem.dim;
    const int m = problem.noise_dim;
    const double h = inc.dt;
    DiscretePath path = make_path(problem.horizon, d, inc.steps,
                                  tamed ? SchemeTag::tamed_euler : SchemeTag::explicit_euler);

    std::vector<double> mu(static_cast<std::size_t>(d));
    std::vector<double> sigma(static_cast<std::size_t>(d) * m);
    double* y = path.states.data();
    for (int i = 0; i < d; ++i) y[i] = init[i];

    for (int n = 0; n < inc.steps; ++n) {
        const double* cur = path.states.data() + static_cast<std::size_t>(n) * d;
        double* next = path.states.data() + (static_cast<std::size_t>(n) + 1) * d;
        problem.drift({cur, static_cast<std::size_t>(d)}, mu);
        if (tamed) {
            double norm2 = 0.0;
            for (int i = 0; i < d; ++i) {
                mu[static_cast<std::size_t>(i)] *= h;
                norm2 += mu[static_cast<std::size_t>(i)] * mu[static_cast<std::size_t>(i)];
            }
            double denom = 1.0 + std::sqrt(norm2);
            for (int i = 0; i < d; ++i) next[i] = cur[i] + mu[static_cast<std::size_t>(i)] / denom;
        } else {
            for (int i = 0; i < d; ++i) next[i] = cur[i] + mu[static_cast<std::size_t>(i)] * h;
        }
        std::span<const double> dw = inc.increment(n);
        switch (problem.diffusion_form) {
            case DiffusionForm::zero:
                break;
            case DiffusionForm::identity:
                for (int i = 0; i < d; ++i) next[i] += dw[static_cast<std::size_t>(i)];
                break;
            case DiffusionForm::general:
                problem.diffusion({cur, static_cast<std::size_t>(d)}, sigma);
                for (int i = 0; i < d; ++i) {
                    double acc = 0.0;
                    const double* row = sigma.data() + static_cast<std::size_t>(i) * m;
                    for (int j = 0; j < m; ++j) acc += row[j] * dw[static_cast<std::size_t>(j)];
                    next[i] += acc;
                }
                break;
        }
    }
    return path;
}

}  // namespace

DiscretePath euler_maruyama(const SdeProblem& problem, std::span<const double> init,
                            const IncrementGrid& inc) {
    return run_explicit(problem, init, inc, false);
}

DiscretePath tamed_euler(const SdeProblem& problem, std::span<const double> init,
                         const IncrementGrid& inc) {
    return run_explicit(problem, init, inc, true);
}

double solve_radial_implicit_step(double b_norm, double h, double tol, int max_iter) {
    if (b_norm == 0.0) return 0.0;
    auto g = [h](double r) { return h * r * r * r + (1.0 - h) * r; };
    // g(b_norm + 1) = (b+1)(h(b+1)^2 + 1 - h) >= b + 1 > b, so the root
    // always lies in [0, b_norm + 1].
    double lo = 0.0;
    double hi = b_norm + 1.0;
    double r = b_norm;
    double res = g(r) - b_norm;
    for (int iter = 0; iter < max_iter; ++iter) {
        if (std::abs(res) <= tol) return r;
        if (res > 0.0) hi = r; else lo = r;
        double dg = 3.0 * h * r * r + (1.0 - h);
        double next = r - res / dg;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        r = next;
        res = g(r) - b_norm;
    }
    if (std::abs(res) <= tol) return r;
    throw std::runtime_error("implicit step did not converge; residual " + std::to_string(res));
}

DiscretePath implicit_euler_langevin(int dim, std::span<const double> init,
                                     const IncrementGrid& inc, double tol, int max_iter) {
    if (static_cast<int>(init.size()) != dim)
        throw std::invalid_argument("implicit_euler_langevin: initial value has wrong dimension");
    if (inc.noise_dim != dim)
        throw std::invalid_argument("implicit_euler_langevin: increment grid has wrong noise dimension");
    const double h = inc.dt;
    if (h > 1.0)
        throw std::invalid_argument("implicit_euler_langevin: requires T/N <= 1");
    if (!(tol > 0.0))
        throw std::invalid_argument("implicit_euler_langevin: tol must be > 0");
    double horizon = static_cast<double>(inc.steps) * h;
    DiscretePath path = make_path(horizon, dim, inc.steps, SchemeTag::implicit_euler);
    for (int i = 0; i < dim; ++i) path.states[static_cast<std::size_t>(i)] = init[i];

    std::vector<double> b(static_cast<std::size_t>(dim));
    for (int n = 0; n < inc.steps; ++n) {
        const double* cur = path.states.data() + static_cast<std::size_t>(n) * dim;
        double* next = path.states.data() + (static_cast<std::size_t>(n) + 1) * dim;
        std::span<const double> dw = inc.increment(n);
        double norm2 = 0.0;
        for (int i = 0; i < dim; ++i) {
            b[static_cast<std::size_t>(i)] = cur[i] + dw[static_cast<std::size_t>(i)];
            norm2 += b[static_cast<std::size_t>(i)] * b[static_cast<std::size_t>(i)];
        }
        double b_norm = std::sqrt(norm2);
        if (b_norm == 0.0) {
            for (int i = 0; i < dim; ++i) next[i] = 0.0;
            continue;
        }
        double r = solve_radial_implicit_step(b_norm, h, tol, max_iter);
        double scale = r / b_norm;
        for (int i = 0; i < dim; ++i) next[i] = b[static_cast<std::size_t>(i)] * scale;
    }
    return path;
}

DiscretePath deterministic_x5_path(double x, int steps, double T) {
    if (steps < 1) throw std::invalid_argument("deterministic_x5_path: steps must be >= 1");
    DiscretePath path = make_path(T, 1, steps, SchemeTag::deterministic);
    double h = T / steps;
    double y = x;
    path.states[0] = y;
    for (int n = 0; n < steps; ++n) {
        y = y + x5_drift(y) * h;
        path.states[static_cast<std::size_t>(n) + 1] = y;
    }
    return path;
}

std::vector<double> x5_log_magnitudes(double log_abs_x, int steps, double T) {
    if (steps < 1) throw std::invalid_argument("x5_log_magnitudes: steps must be >= 1");
    const double log_h = std::log(T / steps);
    std::vector<double> out(static_cast<std::size_t>(steps) + 1);
    double a = log_abs_x;
    out[0] = a;
    for (int n = 0; n < steps; ++n) {
        if (!(std::isinf(a) && a < 0.0)) {
            double u = log_h + 4.0 * a;  // log(h |y|^4)
            if (u == 0.0) {
                a = -std::numeric_limits<double>::infinity();  // 1 - h y^4 == 0
            } else if (u > 0.0) {
                a = a + u + std::log1p(-std::exp(-u));  // |1 - h y^4| = h y^4 - 1
            } else {
                a = a + std::log1p(-std::exp(u));
            }
        }
        out[static_cast<std::size_t>(n) + 1] = a;
    }
    return out;
}

Vec interpolate(const DiscretePath& path, double t) {
    const double T = path.horizon;
    if (t < 0.0) {
        if (t < -1e-12) throw std::out_of_range("interpolate: t below 0");
        t = 0.0;
    } else if (t > T) {
        if (t > T + 1e-12) throw std::out_of_range("interpolate: t beyond horizon");
        t = T;
    }
    const int N = path.steps();
    const double h = T / N;
    int n = static_cast<int>(t / h);
    if (n >= N) n = N - 1;
    Vec out(static_cast<std::size_t>(path.dim));
    std::span<const double> a = path.state(n);
    std::span<const double> b = path.state(n + 1);
    if (t == path.times[static_cast<std::size_t>(n)]) {
        for (int i = 0; i < path.dim; ++i) out[static_cast<std::size_t>(i)] = a[static_cast<std::size_t>(i)];
        return out;
    }
    if (t == path.times[static_cast<std::size_t>(n) + 1]) {
        for (int i = 0; i < path.dim; ++i) out[static_cast<std::size_t>(i)] = b[static_cast<std::size_t>(i)];
        return out;
    }
    double frac = (t - path.times[static_cast<std::size_t>(n)]) / h;
    for (int i = 0; i < path.dim; ++i)
        out[static_cast<std::size_t>(i)] =
            a[static_cast<std::size_t>(i)] + frac * (b[static_cast<std::size_t>(i)] - a[static_cast<std::size_t>(i)]);
    return out;
}

double payoff_value(const Payoff& payoff, const DiscretePath& path) {
    switch (payoff.kind) {
        case PayoffKind::terminal_power: {
            if (path.dim != 1)
                throw std::invalid_argument("terminal_power payoff requires a scalar problem");
            return std::pow(std::abs(path.terminal()[0]), payoff.exponent);
        }
        case PayoffKind::terminal_square_norm: {
            std::span<const double> x = path.terminal();
            double acc = 0.0;
            for (double v : x) acc += v * v;
            return acc;
        }
        case PayoffKind::path_sup_square_norm: {
            double best = 0.0;
            bool saw_nan = false;
            for (int n = 0; n <= path.steps(); ++n) {
                std::span<const double> x = path.state(n);
                double acc = 0.0;
                for (double v : x) acc += v * v;
                if (std::isnan(acc)) saw_nan = true;
                if (acc > best) best = acc;
            }
            return saw_nan ? std::numeric_limits<double>::quiet_NaN() : best;
        }
    }
    throw std::logic_error("payoff_value: unreachable");
}

}  // namespace mlsde
