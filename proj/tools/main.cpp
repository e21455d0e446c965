#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "mlsde/csv.hpp"
#include "mlsde/diagnostics.hpp"
#include "mlsde/estimators.hpp"
#include "mlsde/experiments.hpp"
#include "mlsde/problems.hpp"
#include "mlsde/randomness.hpp"
#include "mlsde/reference.hpp"

namespace {

using namespace mlsde;

struct CommonOpts {
    std::uint64_t seed = default_master_seed;
    int threads = 1;
    std::string out;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--seed", opts.seed, "master seed")->envname("MLMC_SEED");
    cmd->add_option("--threads", opts.threads, "worker threads");
    cmd->add_option("--out", opts.out, "output file (default: stdout)");
}

void emit(const CommonOpts& opts, const CsvWriter& csv) {
    if (opts.out.empty()) {
        std::cout << csv.str();
    } else {
        csv.write_file(opts.out);
    }
}

struct ProblemOpts {
    std::string name = "x5";
    double sigma_bar = 1.0;
    int dim = 10;
    double horizon = 1.0;
};

void add_problem(CLI::App* cmd, ProblemOpts& opts) {
    cmd->add_option("--problem", opts.name, "x5 | ginzburg-landau | langevin")
        ->check(CLI::IsMember({"x5", "ginzburg-landau", "langevin"}));
    cmd->add_option("--sigma-bar", opts.sigma_bar, "stddev of the normal initial law (x5)");
    cmd->add_option("--dim", opts.dim, "state dimension (langevin)");
    cmd->add_option("--horizon", opts.horizon, "time horizon (x5)");
}

Payoff payoff_by_name(const std::string& name) {
    if (name == "p2") return Payoff::terminal_square_norm();
    if (name == "supnorm2") return Payoff::path_sup_square_norm();
    throw CLI::ValidationError("--payoff", "expected p2 or supnorm2");
}

Scheme scheme_by_name(const std::string& name) {
    if (name == "euler") return Scheme::explicit_euler;
    if (name == "tamed") return Scheme::tamed_euler;
    if (name == "implicit") return Scheme::implicit_euler;
    throw CLI::ValidationError("--scheme", "expected euler, tamed or implicit");
}

void estimator_header(CsvWriter& csv) {
    for (const char* col :
         {"estimator", "problem", "scheme", "N", "seed", "value", "diverged", "runtime_seconds"})
        csv.field(col);
    csv.end_row();
}

void estimator_row(CsvWriter& csv, const char* estimator, const std::string& problem,
                   const std::string& scheme, int steps, const EstimatorReport& report) {
    csv.field(estimator);
    csv.field(problem);
    csv.field(scheme);
    csv.field(steps);
    csv.field(report.master_seed);
    csv.field(report.value);
    csv.field(report.diverged);
    csv.field(report.runtime_seconds);
    csv.end_row();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Monte Carlo and multilevel Monte Carlo estimators for SDEs with "
                 "superlinear drift"};
    app.require_subcommand(1);

    // mc / mlmc
    CommonOpts mc_common, mlmc_common;
    ProblemOpts mc_problem, mlmc_problem;
    int mc_steps = 128, mlmc_steps = 1024;
    int mc_replicates = 1, mlmc_replicates = 1;
    std::string mc_payoff = "p2", mlmc_payoff = "p2";
    std::string mlmc_scheme = "euler";

    CLI::App* mc = app.add_subcommand("mc", "classical Monte Carlo Euler estimator");
    add_common(mc, mc_common);
    add_problem(mc, mc_problem);
    mc->add_option("--steps", mc_steps, "time steps N (N^2 samples)")->required();
    mc->add_option("--payoff", mc_payoff, "p2 | supnorm2");
    mc->add_option("--replicates", mc_replicates, "independent repeats");

    CLI::App* ml = app.add_subcommand("mlmc", "multilevel Monte Carlo estimator");
    add_common(ml, mlmc_common);
    add_problem(ml, mlmc_problem);
    ml->add_option("--steps", mlmc_steps, "finest level steps N (power of two)")->required();
    ml->add_option("--scheme", mlmc_scheme, "euler | tamed | implicit");
    ml->add_option("--payoff", mlmc_payoff, "p2 | supnorm2");
    ml->add_option("--replicates", mlmc_replicates, "independent repeats");

    // reference
    CommonOpts ref_common;
    std::string ref_problem = "x5";
    double ref_sigma_bar = 1.0, ref_horizon = 1.0, ref_power = 2.0, ref_abs_tol = 1e-8;
    std::int64_t ref_samples = 1000000;
    int ref_fine_steps = 1 << 14, ref_nodes = 64;
    std::string ref_rule = "simpson";

    CLI::App* ref = app.add_subcommand("reference", "ground-truth reference values");
    add_common(ref, ref_common);
    ref->add_option("--problem", ref_problem, "x5 | ginzburg-landau")
        ->check(CLI::IsMember({"x5", "ginzburg-landau"}));
    ref->add_option("--sigma-bar", ref_sigma_bar, "stddev of the x5 initial law");
    ref->add_option("--horizon", ref_horizon, "time horizon (x5)");
    ref->add_option("--power", ref_power, "payoff exponent p (x5)");
    ref->add_option("--rule", ref_rule, "simpson | gauss-hermite (x5)")
        ->check(CLI::IsMember({"simpson", "gauss-hermite"}));
    ref->add_option("--nodes", ref_nodes, "gauss-hermite nodes");
    ref->add_option("--abs-tol", ref_abs_tol, "adaptive simpson tolerance");
    ref->add_option("--samples", ref_samples, "Monte Carlo samples (ginzburg-landau)");
    ref->add_option("--fine-steps", ref_fine_steps, "fine grid steps (ginzburg-landau)");

    // diagnose
    CommonOpts diag_common;
    double diag_sigma_bar = 1.0, diag_horizon = 1.0, diag_delta = 0.25;
    int diag_replicates = 1;
    std::string diag_steps = "2^4..2^16";

    CLI::App* diag = app.add_subcommand(
        "diagnose", "level statistics L_N, eta_N, theta_N and the A1..A4 events");
    add_common(diag, diag_common);
    diag->add_option("--sigma-bar", diag_sigma_bar, "stddev of the initial law");
    diag->add_option("--horizon", diag_horizon, "time horizon");
    diag->add_option("--steps-list", diag_steps, "e.g. 2^4..2^16 or 16,64,256");
    diag->add_option("--replicates", diag_replicates, "independent arrays per N");
    diag->add_option("--delta", diag_delta, "band exponent in (0, 1/2)");

    // experiment
    CommonOpts exp_common;
    std::string exp_name;
    int exp_replicates = -1;
    std::string exp_steps;

    CLI::App* exp = app.add_subcommand("experiment", "scripted experiment writing CSV");
    add_common(exp, exp_common);
    exp->add_option("--name", exp_name,
                    "fig_divergence_sigma1 | fig_converge_then_diverge_sigma01 | "
                    "fig_converge_then_diverge_sigma033 | fig_ginzburg | "
                    "fig_langevin_benchmark | mlmc_tamed_convergence")
        ->required();
    exp->add_option("--replicates", exp_replicates, "replicates (default per experiment)");
    exp->add_option("--steps-list", exp_steps, "override the N range, e.g. 2^1..2^7");

    try {
        app.parse(argc, argv);

        if (mc->parsed()) {
            SdeProblem problem = problem_by_name(mc_problem.name, mc_problem.sigma_bar,
                                                 mc_problem.dim, mc_problem.horizon);
            Payoff payoff = payoff_by_name(mc_payoff);
            CsvWriter csv;
            estimator_header(csv);
            for (int rep = 0; rep < mc_replicates; ++rep) {
                std::uint64_t seed = mc_replicates == 1
                                         ? mc_common.seed
                                         : derive_seed(mc_common.seed, static_cast<std::uint64_t>(rep));
                EstimatorReport r =
                    monte_carlo_euler(problem, payoff, mc_steps, seed, mc_common.threads);
                estimator_row(csv, "mc", problem.name, "euler", mc_steps, r);
            }
            emit(mc_common, csv);
        } else if (ml->parsed()) {
            SdeProblem problem = problem_by_name(mlmc_problem.name, mlmc_problem.sigma_bar,
                                                 mlmc_problem.dim, mlmc_problem.horizon);
            Payoff payoff = payoff_by_name(mlmc_payoff);
            Scheme scheme = scheme_by_name(mlmc_scheme);
            CsvWriter csv;
            estimator_header(csv);
            for (int rep = 0; rep < mlmc_replicates; ++rep) {
                std::uint64_t seed = mlmc_replicates == 1
                                         ? mlmc_common.seed
                                         : derive_seed(mlmc_common.seed, static_cast<std::uint64_t>(rep));
                EstimatorReport r = mlmc(problem, scheme, payoff, mlmc_steps, seed, mlmc_common.threads);
                estimator_row(csv, "mlmc", problem.name, mlmc_scheme, mlmc_steps, r);
            }
            emit(mlmc_common, csv);
        } else if (ref->parsed()) {
            CsvWriter csv;
            for (const char* col : {"problem", "method", "value", "standard_error", "samples",
                                    "fine_steps", "sigma_bar", "power"})
                csv.field(col);
            csv.end_row();
            if (ref_problem == "x5") {
                QuadratureSpec spec;
                if (ref_rule == "gauss-hermite") {
                    spec.rule = QuadratureSpec::Rule::gauss_hermite;
                    spec.nodes = ref_nodes;
                } else {
                    spec.abs_tol = ref_abs_tol;
                }
                double value = x5_expectation(ref_sigma_bar, ref_horizon, ref_power, spec);
                csv.field("x5");
                csv.field(ref_rule == "gauss-hermite" ? "quadrature-gauss-hermite"
                                                      : "quadrature-simpson");
                csv.field(value);
                csv.field(0.0);
                csv.field(static_cast<std::int64_t>(0));
                csv.field(0);
                csv.field(ref_sigma_bar);
                csv.field(ref_power);
                csv.end_row();
            } else {
                ReferenceEstimate est =
                    gl_reference_value(ref_samples, ref_fine_steps, ref_common.seed, ref_common.threads);
                csv.field("ginzburg-landau");
                csv.field("exact-solution-mc");
                csv.field(est.value);
                csv.field(est.standard_error);
                csv.field(est.samples);
                csv.field(ref_fine_steps);
                csv.field(0.0);
                csv.field(2.0);
                csv.end_row();
            }
            emit(ref_common, csv);
        } else if (diag->parsed()) {
            std::vector<int> steps = parse_steps_list(diag_steps);
            CsvWriter csv;
            for (const char* col : {"N", "replicate", "L_N", "eta_N", "theta_N", "A1", "A2",
                                    "A3", "A4"})
                csv.field(col);
            csv.end_row();
            for (std::size_t i = 0; i < steps.size(); ++i) {
                for (int rep = 0; rep < diag_replicates; ++rep) {
                    std::uint64_t rep_seed =
                        derive_seed(diag_common.seed,
                                    i * static_cast<std::uint64_t>(diag_replicates) + rep);
                    InitialArray arr =
                        sample_initial_array(diag_sigma_bar, diag_horizon, steps[i], rep_seed);
                    LevelStats stats = compute_level_stats(arr, diag_delta);
                    csv.field(steps[i]);
                    csv.field(rep);
                    csv.field(stats.level);
                    csv.field(stats.eta);
                    csv.field(stats.theta);
                    csv.field(stats.a1);
                    csv.field(stats.a2);
                    csv.field(stats.a3);
                    csv.field(stats.a4);
                    csv.end_row();
                }
            }
            emit(diag_common, csv);
        } else if (exp->parsed()) {
            ExperimentConfig cfg;
            cfg.experiment = experiment_by_name(exp_name);
            cfg.seed = exp_common.seed;
            cfg.replicates = exp_replicates;
            cfg.workers = exp_common.threads;
            if (!exp_steps.empty()) cfg.steps_range = parse_steps_list(exp_steps);
            if (exp_common.out.empty()) {
                std::cout << run_experiment_to_string(cfg);
            } else {
                cfg.output_path = exp_common.out;
                run_experiment(cfg);
            }
        }
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
