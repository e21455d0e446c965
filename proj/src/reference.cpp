#include "mlsde/reference.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "mlsde/accumulate.hpp"
#include "mlsde/parallel.hpp"

namespace mlsde {

namespace {

struct SimpsonState {
    double abs_tol;
    int max_depth = 48;
    long budget = 2000000;  // refinement nodes before declaring a stall
    double worst_error = 0.0;

    template <typename F>
    double recurse(const F& f, double a, double b, double fa, double fm, double fb,
                   double whole, double tol, int depth) {
        double m = 0.5 * (a + b);
        double lm = 0.5 * (a + m);
        double rm = 0.5 * (m + b);
        double flm = f(lm);
        double frm = f(rm);
        double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        double err = (left + right - whole) / 15.0;
        --budget;
        if (std::abs(err) <= tol || depth >= max_depth || budget <= 0) {
            if (std::abs(err) > tol) worst_error = std::max(worst_error, std::abs(err));
            return left + right + err;
        }
        return recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
               recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
    }

    // Pre-split into fixed panels so a peaked integrand cannot fool the
    // top-level error estimate into early acceptance.
    template <typename F>
    double integrate(const F& f, double a, double b) {
        const int panels = 32;
        const double h = (b - a) / panels;
        const double tol = abs_tol / panels;
        double total = 0.0;
        for (int i = 0; i < panels; ++i) {
            double lo = a + i * h;
            double hi = (i == panels - 1) ? b : a + (i + 1) * h;
            double flo = f(lo);
            double fhi = f(hi);
            double fm = f(0.5 * (lo + hi));
            double whole = (hi - lo) / 6.0 * (flo + 4.0 * fm + fhi);
            total += recurse(f, lo, hi, flo, fm, fhi, whole, tol, 0);
        }
        return total;
    }
};

// Gauss-Hermite nodes and weights for int exp(-x^2) f(x) dx, by Newton
// iteration on the orthonormal Hermite recurrence.
void gauss_hermite_rule(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    nodes.assign(static_cast<std::size_t>(n), 0.0);
    weights.assign(static_cast<std::size_t>(n), 0.0);
    const double pim4 = 0.7511255444649425;  // pi^{-1/4}
    double z = 0.0;
    for (int i = 0; i < (n + 1) / 2; ++i) {
        if (i == 0) {
            z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -1.0 / 6.0);
        } else if (i == 1) {
            z -= 1.14 * std::pow(n, 0.426) / z;
        } else if (i == 2) {
            z = 1.86 * z - 0.86 * nodes[0];
        } else if (i == 3) {
            z = 1.91 * z - 0.91 * nodes[1];
        } else {
            z = 2.0 * z - nodes[static_cast<std::size_t>(i) - 2];
        }
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p1 = pim4;
            double p2 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p3 = p2;
                p2 = p1;
                p1 = z * std::sqrt(2.0 / (j + 1)) * p2 - std::sqrt(static_cast<double>(j) / (j + 1)) * p3;
            }
            pp = std::sqrt(2.0 * n) * p2;
            double dz = p1 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-14) break;
        }
        nodes[static_cast<std::size_t>(i)] = z;
        nodes[static_cast<std::size_t>(n) - 1 - i] = -z;
        weights[static_cast<std::size_t>(i)] = 2.0 / (pp * pp);
        weights[static_cast<std::size_t>(n) - 1 - i] = weights[static_cast<std::size_t>(i)];
    }
}

void check_gl_grid(const IncrementGrid& fine) {
    if (fine.noise_dim != 1)
        throw std::invalid_argument("gl_exact_path: grid must be scalar");
    if (fine.steps < 1 || std::abs(fine.steps * fine.dt - 1.0) > 1e-12)
        throw std::invalid_argument("gl_exact_path: grid must span [0, 1]");
}

}  // namespace

void QuadratureSpec::validate() const {
    if (rule == Rule::gauss_hermite && nodes < 16)
        throw std::invalid_argument("QuadratureSpec: gauss_hermite needs >= 16 nodes");
    if (rule == Rule::adaptive_simpson) {
        if (!(abs_tol > 0.0))
            throw std::invalid_argument("QuadratureSpec: abs_tol must be > 0");
        if (range_multiplier < 8.0)
            throw std::invalid_argument("QuadratureSpec: range_multiplier must be >= 8");
    }
}

double exact_x5_terminal(double xi, double t) {
    if (t < 0.0) throw std::invalid_argument("exact_x5_terminal: t must be >= 0");
    if (xi == 0.0) return 0.0;
    double a = std::abs(xi);
    double mag;
    if (a <= 1.0) {
        double a4 = a * a * a * a;
        mag = a / std::pow(1.0 + 4.0 * t * a4, 0.25);
    } else {
        double inv4 = 1.0 / (a * a * a * a);  // avoids overflow of xi^4
        mag = 1.0 / std::pow(inv4 + 4.0 * t, 0.25);
    }
    return std::copysign(mag, xi);
}

double x5_expectation(double sigma_bar, double T, double p, const QuadratureSpec& spec) {
    spec.validate();
    if (!(sigma_bar > 0.0))
        throw std::invalid_argument("x5_expectation: sigma_bar must be > 0");
    if (spec.rule == QuadratureSpec::Rule::gauss_hermite) {
        std::vector<double> nodes, weights;
        gauss_hermite_rule(spec.nodes, nodes, weights);
        // E[g(xi)] = pi^{-1/2} sum w_i g(sqrt(2) sb t_i)
        KahanSum acc;
        double scale = std::numbers::sqrt2 * sigma_bar;
        for (std::size_t i = 0; i < nodes.size(); ++i)
            acc.add(weights[i] * std::pow(std::abs(exact_x5_terminal(scale * nodes[i], T)), p));
        return acc.value() / std::sqrt(std::numbers::pi);
    }
    double inv_norm = 1.0 / (sigma_bar * std::sqrt(2.0 * std::numbers::pi));
    auto integrand = [&](double x) {
        double density = inv_norm * std::exp(-0.5 * (x / sigma_bar) * (x / sigma_bar));
        return std::pow(std::abs(exact_x5_terminal(x, T)), p) * density;
    };
    double half_range = spec.range_multiplier * sigma_bar;
    SimpsonState simpson{spec.abs_tol};
    double value = simpson.integrate(integrand, -half_range, half_range);
    if (simpson.worst_error > 0.0)
        throw std::runtime_error("x5_expectation: adaptive rule stalled; achieved tolerance " +
                                 std::to_string(simpson.worst_error));
    return value;
}

std::vector<double> gl_exact_path(const IncrementGrid& fine) {
    check_gl_grid(fine);
    const int N = fine.steps;
    std::vector<double> out(static_cast<std::size_t>(N) + 1);
    double w = 0.0;
    double integral = 0.0;
    double prev_exp = 1.0;  // exp(4 W_0)
    out[0] = 1.0;           // X_0 = exp(0)/sqrt(1 + 0)
    const double dt = fine.dt;
    for (int j = 0; j < N; ++j) {
        w += fine.data[static_cast<std::size_t>(j)];
        double cur_exp = std::exp(4.0 * w);
        integral += 0.5 * dt * (prev_exp + cur_exp);
        prev_exp = cur_exp;
        out[static_cast<std::size_t>(j) + 1] =
            std::exp(2.0 * w) / std::sqrt(1.0 + 2.0 * integral);
    }
    return out;
}

double gl_exact_terminal(const IncrementGrid& fine) {
    check_gl_grid(fine);
    const int N = fine.steps;
    double w = 0.0;
    double integral = 0.0;
    double prev_exp = 1.0;
    const double dt = fine.dt;
    for (int j = 0; j < N; ++j) {
        w += fine.data[static_cast<std::size_t>(j)];
        double cur_exp = std::exp(4.0 * w);
        integral += 0.5 * dt * (prev_exp + cur_exp);
        prev_exp = cur_exp;
    }
    return std::exp(2.0 * w) / std::sqrt(1.0 + 2.0 * integral);
}

ReferenceEstimate gl_reference_value(std::int64_t samples, int fine_steps,
                                     std::uint64_t seed, int workers) {
    if (samples < 1)
        throw std::invalid_argument("gl_reference_value: samples must be >= 1");
    if (fine_steps < 4096)
        throw std::invalid_argument("gl_reference_value: fine_steps must be >= 4096");
    std::vector<double> values(static_cast<std::size_t>(samples));
    const double dt = 1.0 / fine_steps;
    parallel_for(samples, workers, [&](std::int64_t k) {
        RngStream gen = derive_stream(
            seed, {0, static_cast<std::uint64_t>(k) + 1, StreamPurpose::reference});
        thread_local IncrementGrid grid;
        fill_increments(gen, fine_steps, dt, 1, grid);
        double x1 = gl_exact_terminal(grid);
        values[static_cast<std::size_t>(k)] = x1 * x1;
    });
    KahanSum sum;
    for (double v : values) sum.add(v);
    ReferenceEstimate est;
    est.samples = samples;
    est.value = sum.value() / static_cast<double>(samples);
    if (samples == 1) {
        est.standard_error = std::numeric_limits<double>::quiet_NaN();
        return est;
    }
    KahanSum sq;
    for (double v : values) {
        double d = v - est.value;
        sq.add(d * d);
    }
    est.standard_error =
        std::sqrt(sq.value() / (static_cast<double>(samples) - 1.0) / static_cast<double>(samples));
    return est;
}

}  // namespace mlsde
