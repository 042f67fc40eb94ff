// Command-line front end for the measurement-test linear solver experiments.
//
// Subcommands: solve, convergence, scaling, fig5, variance-compare,
// gen-instance. Every flag overrides the matching key of --config. Exit
// codes: 0 success/converged, 2 solve did not converge, 1 usage or IO error.

#include "CLI11.hpp"

#include "mta/errors.hpp"
#include "mta/harness.hpp"
#include "mta/io.hpp"
#include "mta/problem.hpp"

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

namespace {

struct CommonFlags {
    std::string config_path;
    std::string system_path;
    std::string matrix_path;
    std::string rhs_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> n_qubits;
    std::optional<double> kappa_max;
    std::optional<std::uint64_t> shots;
    std::optional<std::size_t> modules;
    std::string m_qubits; // integer or "auto"
    std::string backend;
    std::optional<std::size_t> max_iters;
    std::optional<std::size_t> replicas;
    std::optional<std::uint64_t> root_seed;
    std::string out_dir;
};

void add_common_flags(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--config", flags.config_path, "Experiment config JSON");
    cmd->add_option("--system", flags.system_path, "Instance JSON produced by gen-instance");
    cmd->add_option("--matrix", flags.matrix_path, "Matrix CSV (one row per line)");
    cmd->add_option("--rhs", flags.rhs_path, "Right-hand side CSV");
    cmd->add_option("--seed", flags.seed, "Instance seed");
    cmd->add_option("--n", flags.n_qubits, "Input register qubits (system dimension 2^n)");
    cmd->add_option("--kappa-max", flags.kappa_max, "Condition-number cap for generated instances");
    cmd->add_option("--shots", flags.shots, "Measurements per objective evaluation");
    cmd->add_option("--modules", flags.modules, "Ansatz modules k");
    cmd->add_option("--m-qubits", flags.m_qubits, "Output register size, integer or 'auto'");
    cmd->add_option("--backend", flags.backend, "projective | spectral | circuit");
    cmd->add_option("--max-iters", flags.max_iters, "Iteration cap");
    cmd->add_option("--replicas", flags.replicas, "Replica count (convergence)");
    cmd->add_option("--root-seed", flags.root_seed, "Root seed for all derived streams");
    cmd->add_option("--out", flags.out_dir, "Output directory");
}

mta::harness::ExperimentConfig build_config(const CommonFlags& flags, mta::harness::Mode mode) {
    mta::harness::ExperimentConfig cfg;
    if (!flags.config_path.empty()) cfg = mta::harness::load_config(flags.config_path);
    cfg.mode = mode;
    if (!flags.system_path.empty()) cfg.system.system_path = flags.system_path;
    if (!flags.matrix_path.empty()) cfg.system.matrix_path = flags.matrix_path;
    if (!flags.rhs_path.empty()) cfg.system.rhs_path = flags.rhs_path;
    if (flags.seed) cfg.system.seed = *flags.seed;
    if (flags.n_qubits) cfg.system.n_qubits = *flags.n_qubits;
    if (flags.kappa_max) cfg.system.kappa_max = *flags.kappa_max;
    if (flags.shots) cfg.schedule.shots_initial = *flags.shots;
    if (flags.modules) cfg.k_modules = *flags.modules;
    if (!flags.m_qubits.empty()) {
        if (flags.m_qubits == "auto")
            cfg.m_qubits = -1;
        else
            cfg.m_qubits = std::stol(flags.m_qubits);
    }
    if (!flags.backend.empty())
        cfg.backend = mta::measurement::backend_from_string(flags.backend);
    if (flags.max_iters) cfg.schedule.max_iterations = *flags.max_iters;
    if (flags.replicas) cfg.replicas = *flags.replicas;
    if (flags.root_seed) cfg.root_seed = *flags.root_seed;
    if (!flags.out_dir.empty()) {
        cfg.out_dir = flags.out_dir;
    } else if (cfg.out_dir.empty()) {
        // The only environment variable honored: default output directory.
        if (const char* env = std::getenv("MTA_OUT_DIR")) cfg.out_dir = env;
    }
    return cfg;
}

int run_mode(const mta::harness::ExperimentConfig& cfg) {
    using mta::harness::Mode;
    switch (cfg.mode) {
        case Mode::solve: {
            const auto report = mta::harness::run_solve(cfg);
            std::cout << "kappa " << report.system.kappa << ", m = " << report.m_qubits
                      << ", iterations " << report.trace.iterations.size() << '\n';
            std::cout << "asymptotic F_T " << report.asymptotic_f << " (a = " << report.a_value
                      << ")\n";
            if (report.solution_valid)
                std::cout << "relative residual " << report.solution.relative_residual << '\n';
            std::cout << (report.converged ? "converged" : "did not converge") << '\n';
            return report.converged ? 0 : 2;
        }
        case Mode::convergence: {
            const auto report = mta::harness::run_convergence(cfg);
            std::cout << "replicas " << report.traces.size() << ", gamma " << report.fit.gamma
                      << ", fit rms " << report.fit.rms_residual << '\n';
            return 0;
        }
        case Mode::scaling: {
            const auto report = mta::harness::run_scaling(cfg);
            for (const auto& row : report.rows) {
                std::cout << "N " << row.shots << ": F_T " << row.asymptotic_f << ", 1-4/N "
                          << row.heisenberg_bound << ", a " << row.a_value << '\n';
            }
            return 0;
        }
        case Mode::fig5: {
            const auto report = mta::harness::run_fig5(cfg);
            for (const auto& row : report.rows) {
                std::cout << "p0 " << row.p0 << ": sigma " << row.sigma_empirical
                          << " (theory " << row.sigma_theory << ")\n";
            }
            return 0;
        }
        case Mode::variance_compare: {
            const auto report = mta::harness::run_variance_compare(cfg);
            for (std::size_t i = 0; i < report.pauli_counts.size(); ++i) {
                std::cout << "T " << report.pauli_counts[i] << ": median sigma_rel MTA "
                          << report.median_sigma_mta[i] << ", VQLS "
                          << report.median_sigma_vqls[i] << '\n';
            }
            std::cout << "Spearman(T, median VQLS) " << report.spearman_vqls_medians
                      << ", Spearman(T, MTA all points) " << report.spearman_mta_all << '\n';
            return 0;
        }
    }
    return 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Variational linear-system solver driven by simulated "
                 "phase-estimation measurements"};
    app.require_subcommand(1);

    CommonFlags flags;
    auto* solve = app.add_subcommand("solve", "Solve one system end to end");
    auto* convergence =
        app.add_subcommand("convergence", "Replica-averaged convergence curves");
    auto* scaling = app.add_subcommand("scaling", "Asymptotic fidelity vs shot count");
    auto* fig5 = app.add_subcommand("fig5", "Estimator standard deviation vs p0");
    auto* variance =
        app.add_subcommand("variance-compare", "Shot-noise comparison against the VQLS cost");
    for (auto* cmd : {solve, convergence, scaling, fig5, variance}) add_common_flags(cmd, flags);

    auto* gen = app.add_subcommand("gen-instance", "Generate a random symmetric instance");
    std::size_t gen_n = 4;
    std::uint64_t gen_seed = 1;
    double gen_kappa_max = 100.0;
    std::optional<double> gen_kappa;
    std::string gen_out;
    gen->add_option("--n", gen_n, "Input register qubits");
    gen->add_option("--seed", gen_seed, "Generator seed");
    gen->add_option("--kappa-max", gen_kappa_max, "Condition-number cap");
    gen->add_option("--kappa", gen_kappa, "Remap spectrum to this exact condition number");
    gen->add_option("--out", gen_out, "Output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) {
            if (gen_out.empty()) {
                if (const char* env = std::getenv("MTA_OUT_DIR")) gen_out = env;
            }
            if (gen_out.empty()) {
                std::cerr << "gen-instance requires --out (or MTA_OUT_DIR)\n";
                return 1;
            }
            const mta::problem::LinearSystem sys =
                gen_kappa ? mta::problem::random_instance_with_kappa(gen_n, gen_seed, *gen_kappa)
                          : mta::problem::random_instance(gen_n, gen_seed, gen_kappa_max);
            std::filesystem::create_directories(gen_out);
            const auto dir = std::filesystem::path(gen_out);
            mta::io::save_system((dir / "instance.json").string(), sys);
            mta::io::write_matrix_csv((dir / "matrix.csv").string(), sys.m);
            mta::io::write_vector_csv((dir / "rhs.csv").string(), sys.b);
            std::cout << "instance with kappa " << sys.kappa << " written to " << gen_out << '\n';
            return 0;
        }

        mta::harness::Mode mode = mta::harness::Mode::solve;
        if (convergence->parsed()) mode = mta::harness::Mode::convergence;
        if (scaling->parsed()) mode = mta::harness::Mode::scaling;
        if (fig5->parsed()) mode = mta::harness::Mode::fig5;
        if (variance->parsed()) mode = mta::harness::Mode::variance_compare;
        return run_mode(build_config(flags, mode));
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
