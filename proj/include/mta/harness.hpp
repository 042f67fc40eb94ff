#pragma once

#include "mta/measurement.hpp"
#include "mta/optimizer.hpp"
#include "mta/problem.hpp"
#include "mta/vqls.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace mta::harness {

enum class Mode { solve, convergence, scaling, fig5, variance_compare };

Mode mode_from_string(const std::string& name);
std::string to_string(Mode mode);

// Where the linear system comes from: an instance file (JSON), a matrix/rhs
// CSV pair, or a seeded random instance.
struct SystemSource {
    std::string system_path;
    std::string matrix_path;
    std::string rhs_path;
    std::uint64_t seed = 1;
    std::size_t n_qubits = 4;
    double kappa_max = 100.0;
    std::optional<double> kappa_exact; // remap spectrum to this condition number

    bool from_files() const { return !system_path.empty() || !matrix_path.empty(); }
};

struct ExperimentConfig {
    Mode mode = Mode::solve;
    SystemSource system;

    std::size_t k_modules = 3;
    long m_qubits = -1; // -1: auto via required_pointer_qubits
    std::size_t guard_qubits = 2;
    measurement::Backend backend = measurement::Backend::spectral;
    optimizer::ScheduleConfig schedule;
    double residual_tol = 0.05; // residual level accepted as "converged"

    std::size_t replicas = 1;
    std::size_t max_workers = 0; // 0: one per hardware thread
    std::uint64_t root_seed = 1;
    std::string out_dir;

    std::vector<std::uint64_t> shots_list = {100, 1000, 10000}; // scaling mode

    std::vector<double> p0_grid = {0.1, 0.3, 0.5, 0.7, 0.9}; // fig5 mode
    std::size_t fig5_repetitions = 500;
    std::uint64_t fig5_shots = 1000;

    std::vector<std::size_t> pauli_counts = {2, 4, 8, 16}; // variance mode
    std::size_t variance_matrices = 10;
    std::size_t variance_repetitions = 50;
    std::uint64_t variance_shots_total = 100000;
    std::size_t variance_n_qubits = 2;
};

std::string config_to_json(const ExperimentConfig& cfg);
ExperimentConfig config_from_json(const std::string& text);
ExperimentConfig load_config(const std::string& path);

// Load or generate the linear system named by the config.
problem::LinearSystem resolve_system(const ExperimentConfig& cfg);

// Explicit m from the config, or the kappa rule. Sets `warning` when the
// chosen register cannot resolve the kappa^-2 eigenvalue gap.
std::size_t resolve_pointer_qubits(const ExperimentConfig& cfg,
                                   const problem::LinearSystem& system, bool& warning);

// Mean exact fidelity over the last 10% of [begin, end).
double asymptotic_fidelity(const std::vector<optimizer::IterationRecord>& iterations,
                           std::size_t begin, std::size_t end);

// a = sqrt(N (1-F) / F) from the accuracy relation F = N / (N + a^2).
double inferred_noise_constant(std::uint64_t shots, double fidelity);

struct SolveReport {
    problem::LinearSystem system;
    std::size_t m_qubits = 0;
    bool resolution_warning = false;
    optimizer::OptimizerTrace trace;
    ansatz::AnsatzParameters final_params;
    bool solution_valid = false;
    problem::SolutionRecord solution;
    bool converged = false;
    double final_fidelity = 0.0;
    double asymptotic_f = 0.0;
    double a_value = 0.0;
};

// Full pipeline: build the observable, optimize, reconstruct x. Writes
// trace.csv, report.json, solution.json under cfg.out_dir (if set).
SolveReport run_solve(const ExperimentConfig& cfg);

struct ScalingRow {
    std::uint64_t shots = 0;
    double asymptotic_f = 0.0;
    double heisenberg_bound = 0.0; // 1 - 4/N
    double a_value = 0.0;
};

struct ScalingReport {
    std::vector<ScalingRow> rows;
    problem::LinearSystem system;
    std::size_t m_qubits = 0;
};

// One optimization per shot count on a fixed instance; writes scaling.csv.
ScalingReport run_scaling(const ExperimentConfig& cfg);

struct ConvergenceReport {
    std::vector<optimizer::OptimizerTrace> traces;
    std::vector<double> mean_fidelity; // padded to the longest trace
    std::vector<double> mean_rel_freq;
    bool padded = false;
    optimizer::ExponentialFit fit;
    double envelope_gap = 0.0; // max_t (trailing max - mean F)
};

// Replica-parallel runs on distinct random instances; aggregates the mean
// curves and fits the exponential rise. Writes convergence.csv and the
// per-replica traces.
ConvergenceReport run_convergence(const ExperimentConfig& cfg);

struct Fig5Row {
    double p0 = 0.0;
    double sigma_empirical = 0.0;
    double sigma_theory = 0.0;
};

struct Fig5Report {
    std::vector<Fig5Row> rows;
    std::uint64_t shots = 0;
    std::size_t repetitions = 0;
};

// Estimator standard deviation across a p0 grid; writes fig5.csv.
Fig5Report run_fig5(const ExperimentConfig& cfg);

// Pauli-count sweep (delegates to vqls); writes variance.csv with one row
// per (T, matrix) plus a median row per T.
vqls::VarianceReport run_variance_compare(const ExperimentConfig& cfg);

} // namespace mta::harness
