#include "mta/harness.hpp"

#include "mta/errors.hpp"
#include "mta/io.hpp"
#include "mta/rng.hpp"
#include "mta/stats.hpp"

#include "json.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <functional>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

namespace mta::harness {

using nlohmann::json;

namespace {

// Fixed stream offsets under the root seed; every consumer of randomness in
// an experiment draws through one of these, so replica scheduling order can
// never change a result.
constexpr std::uint64_t kStreamInitialAngles = 1;
constexpr std::uint64_t kStreamOptimizer = 2;
constexpr std::uint64_t kStreamReplicaSystem = 100;
constexpr std::uint64_t kStreamReplicaAngles = 200;
constexpr std::uint64_t kStreamReplicaOptimizer = 300;
constexpr std::uint64_t kStreamScaling = 400;
constexpr std::uint64_t kStreamVariance = 500;
constexpr std::uint64_t kStreamFig5 = 600;

void ensure_out_dir(const std::string& dir) {
    if (dir.empty()) return;
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory " + dir + ": " + ec.message());
}

std::string join_path(const std::string& dir, const std::string& name) {
    return (std::filesystem::path(dir) / name).string();
}

void run_pool(std::size_t jobs, std::size_t max_workers, const std::function<void(std::size_t)>& body) {
    std::size_t workers = max_workers == 0 ? std::thread::hardware_concurrency() : max_workers;
    workers = std::max<std::size_t>(1, std::min(workers, jobs));
    if (workers == 1) {
        for (std::size_t i = 0; i < jobs; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr failure;
    std::mutex failure_mutex;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&]() {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= jobs) return;
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

json schedule_to_json(const optimizer::ScheduleConfig& s) {
    return json{{"shots", s.shots_initial},
                {"shots_escalated", s.shots_escalated},
                {"escalate_after_stall", s.escalate_after_stall},
                {"max_iterations", s.max_iterations},
                {"terminate_window", s.terminate_window},
                {"terminate_threshold", s.terminate_threshold}};
}

void schedule_from_json(const json& doc, optimizer::ScheduleConfig& s) {
    if (doc.contains("shots")) s.shots_initial = doc["shots"].get<std::uint64_t>();
    if (doc.contains("shots_escalated")) s.shots_escalated = doc["shots_escalated"].get<std::uint64_t>();
    if (doc.contains("escalate_after_stall"))
        s.escalate_after_stall = doc["escalate_after_stall"].get<std::size_t>();
    if (doc.contains("max_iterations")) s.max_iterations = doc["max_iterations"].get<std::size_t>();
    if (doc.contains("terminate_window")) s.terminate_window = doc["terminate_window"].get<std::size_t>();
    if (doc.contains("terminate_threshold"))
        s.terminate_threshold = doc["terminate_threshold"].get<double>();
}

} // namespace

Mode mode_from_string(const std::string& name) {
    if (name == "solve") return Mode::solve;
    if (name == "convergence") return Mode::convergence;
    if (name == "scaling") return Mode::scaling;
    if (name == "fig5") return Mode::fig5;
    if (name == "variance-compare") return Mode::variance_compare;
    throw InvalidInputError("unknown mode '" + name + "'");
}

std::string to_string(Mode mode) {
    switch (mode) {
        case Mode::solve: return "solve";
        case Mode::convergence: return "convergence";
        case Mode::scaling: return "scaling";
        case Mode::fig5: return "fig5";
        case Mode::variance_compare: return "variance-compare";
    }
    return "?";
}

std::string config_to_json(const ExperimentConfig& cfg) {
    json doc;
    doc["mode"] = to_string(cfg.mode);
    json sys;
    if (!cfg.system.system_path.empty()) sys["system"] = cfg.system.system_path;
    if (!cfg.system.matrix_path.empty()) sys["matrix"] = cfg.system.matrix_path;
    if (!cfg.system.rhs_path.empty()) sys["rhs"] = cfg.system.rhs_path;
    sys["seed"] = cfg.system.seed;
    sys["n"] = cfg.system.n_qubits;
    sys["kappa_max"] = cfg.system.kappa_max;
    if (cfg.system.kappa_exact) sys["kappa_exact"] = *cfg.system.kappa_exact;
    doc["system"] = std::move(sys);
    doc["modules"] = cfg.k_modules;
    doc["m_qubits"] = cfg.m_qubits;
    doc["guard_qubits"] = cfg.guard_qubits;
    doc["backend"] = measurement::to_string(cfg.backend);
    doc["schedule"] = schedule_to_json(cfg.schedule);
    doc["residual_tol"] = cfg.residual_tol;
    doc["replicas"] = cfg.replicas;
    doc["max_workers"] = cfg.max_workers;
    doc["root_seed"] = cfg.root_seed;
    if (!cfg.out_dir.empty()) doc["out_dir"] = cfg.out_dir;
    doc["scaling"] = json{{"shots_list", cfg.shots_list}};
    doc["fig5"] = json{{"p0_grid", cfg.p0_grid},
                       {"repetitions", cfg.fig5_repetitions},
                       {"shots", cfg.fig5_shots}};
    doc["variance"] = json{{"pauli_counts", cfg.pauli_counts},
                           {"matrices", cfg.variance_matrices},
                           {"repetitions", cfg.variance_repetitions},
                           {"shots_total", cfg.variance_shots_total},
                           {"n", cfg.variance_n_qubits}};
    return doc.dump(2);
}

ExperimentConfig config_from_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw IoError(std::string("invalid config JSON: ") + e.what());
    }
    ExperimentConfig cfg;
    if (doc.contains("mode")) cfg.mode = mode_from_string(doc["mode"].get<std::string>());
    if (doc.contains("system")) {
        const json& sys = doc["system"];
        if (sys.contains("system")) cfg.system.system_path = sys["system"].get<std::string>();
        if (sys.contains("matrix")) cfg.system.matrix_path = sys["matrix"].get<std::string>();
        if (sys.contains("rhs")) cfg.system.rhs_path = sys["rhs"].get<std::string>();
        if (sys.contains("seed")) cfg.system.seed = sys["seed"].get<std::uint64_t>();
        if (sys.contains("n")) cfg.system.n_qubits = sys["n"].get<std::size_t>();
        if (sys.contains("kappa_max")) cfg.system.kappa_max = sys["kappa_max"].get<double>();
        if (sys.contains("kappa_exact")) cfg.system.kappa_exact = sys["kappa_exact"].get<double>();
    }
    if (doc.contains("modules")) cfg.k_modules = doc["modules"].get<std::size_t>();
    if (doc.contains("m_qubits")) {
        if (doc["m_qubits"].is_string()) {
            const std::string s = doc["m_qubits"].get<std::string>();
            if (s != "auto") throw IoError("m_qubits must be an integer or \"auto\"");
            cfg.m_qubits = -1;
        } else {
            cfg.m_qubits = doc["m_qubits"].get<long>();
        }
    }
    if (doc.contains("guard_qubits")) cfg.guard_qubits = doc["guard_qubits"].get<std::size_t>();
    if (doc.contains("backend"))
        cfg.backend = measurement::backend_from_string(doc["backend"].get<std::string>());
    if (doc.contains("schedule")) schedule_from_json(doc["schedule"], cfg.schedule);
    if (doc.contains("residual_tol")) cfg.residual_tol = doc["residual_tol"].get<double>();
    if (doc.contains("replicas")) cfg.replicas = doc["replicas"].get<std::size_t>();
    if (doc.contains("max_workers")) cfg.max_workers = doc["max_workers"].get<std::size_t>();
    if (doc.contains("root_seed")) cfg.root_seed = doc["root_seed"].get<std::uint64_t>();
    if (doc.contains("out_dir")) cfg.out_dir = doc["out_dir"].get<std::string>();
    if (doc.contains("scaling") && doc["scaling"].contains("shots_list"))
        cfg.shots_list = doc["scaling"]["shots_list"].get<std::vector<std::uint64_t>>();
    if (doc.contains("fig5")) {
        const json& f = doc["fig5"];
        if (f.contains("p0_grid")) cfg.p0_grid = f["p0_grid"].get<std::vector<double>>();
        if (f.contains("repetitions")) cfg.fig5_repetitions = f["repetitions"].get<std::size_t>();
        if (f.contains("shots")) cfg.fig5_shots = f["shots"].get<std::uint64_t>();
    }
    if (doc.contains("variance")) {
        const json& v = doc["variance"];
        if (v.contains("pauli_counts"))
            cfg.pauli_counts = v["pauli_counts"].get<std::vector<std::size_t>>();
        if (v.contains("matrices")) cfg.variance_matrices = v["matrices"].get<std::size_t>();
        if (v.contains("repetitions"))
            cfg.variance_repetitions = v["repetitions"].get<std::size_t>();
        if (v.contains("shots_total"))
            cfg.variance_shots_total = v["shots_total"].get<std::uint64_t>();
        if (v.contains("n")) cfg.variance_n_qubits = v["n"].get<std::size_t>();
    }
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    return config_from_json(io::read_text_file(path));
}

problem::LinearSystem resolve_system(const ExperimentConfig& cfg) {
    const SystemSource& src = cfg.system;
    if (!src.system_path.empty()) return io::load_system(src.system_path);
    if (!src.matrix_path.empty()) {
        if (src.rhs_path.empty())
            throw InvalidInputError("a matrix file requires a right-hand side file");
        return problem::make_system(io::load_matrix_csv(src.matrix_path),
                                    io::load_vector_csv(src.rhs_path));
    }
    if (src.kappa_exact)
        return problem::random_instance_with_kappa(src.n_qubits, src.seed, *src.kappa_exact);
    return problem::random_instance(src.n_qubits, src.seed, src.kappa_max);
}

std::size_t resolve_pointer_qubits(const ExperimentConfig& cfg,
                                   const problem::LinearSystem& system, bool& warning) {
    const std::size_t needed = problem::required_pointer_qubits(system.kappa, 0);
    std::size_t m;
    if (cfg.m_qubits < 0) {
        m = problem::required_pointer_qubits(system.kappa, cfg.guard_qubits);
    } else {
        m = static_cast<std::size_t>(cfg.m_qubits);
    }
    warning = m < needed;
    if (warning) {
        std::cerr << "warning: m = " << m << " output qubits cannot resolve lambda_1 ~ 1/kappa^2"
                  << " (kappa = " << system.kappa << " needs m >= " << needed << ")\n";
    }
    return m;
}

double asymptotic_fidelity(const std::vector<optimizer::IterationRecord>& iterations,
                           std::size_t begin, std::size_t end) {
    end = std::min(end, iterations.size());
    if (begin >= end) return 0.0;
    const std::size_t span = end - begin;
    const std::size_t tail = std::max<std::size_t>(1, span / 10);
    double acc = 0.0;
    for (std::size_t i = end - tail; i < end; ++i) acc += iterations[i].exact_fidelity;
    return acc / static_cast<double>(tail);
}

double inferred_noise_constant(std::uint64_t shots, double fidelity) {
    if (fidelity <= 0.0) return 0.0;
    return std::sqrt(static_cast<double>(shots) * (1.0 - fidelity) / fidelity);
}

namespace {

struct SingleRun {
    optimizer::OptimizerTrace trace;
    ansatz::AnsatzParameters params;
    problem::ObjectiveObservable obs;
};

SingleRun run_single(const ExperimentConfig& cfg, const problem::LinearSystem& system,
                     std::size_t m_qubits, const optimizer::ScheduleConfig& schedule,
                     std::uint64_t angle_seed, std::uint64_t optimizer_seed) {
    SingleRun out;
    out.obs = problem::build_objective(system, m_qubits);
    const ansatz::AnsatzParameters initial =
        ansatz::random_parameters(system.n_qubits, cfg.k_modules, angle_seed);
    optimizer::OptimizeOptions opts;
    opts.backend = cfg.backend;
    const measurement::PointerConfig pcfg{m_qubits};
    auto [trace, params] = optimizer::optimize(out.obs, initial, schedule, pcfg, optimizer_seed, opts);
    out.trace = std::move(trace);
    out.params = std::move(params);
    return out;
}

json solution_to_json(const problem::SolutionRecord& rec) {
    json doc;
    doc["x"] = rec.x;
    doc["z"] = json{{"re", rec.z.real()}, {"im", rec.z.imag()}};
    doc["relative_residual"] = rec.relative_residual;
    doc["dropped_imag_norm"] = rec.dropped_imag_norm;
    json y = json::array();
    for (const Complex& c : rec.y) y.push_back(json{{"re", c.real()}, {"im", c.imag()}});
    doc["y"] = std::move(y);
    return doc;
}

} // namespace

SolveReport run_solve(const ExperimentConfig& cfg) {
    SolveReport report;
    report.system = resolve_system(cfg);
    report.m_qubits = resolve_pointer_qubits(cfg, report.system, report.resolution_warning);

    const SingleRun run =
        run_single(cfg, report.system, report.m_qubits, cfg.schedule,
                   seed_mix(cfg.root_seed, kStreamInitialAngles),
                   seed_mix(cfg.root_seed, kStreamOptimizer));
    report.trace = run.trace;
    report.final_params = run.params;
    report.final_fidelity = run.trace.iterations.back().exact_fidelity;
    report.asymptotic_f =
        asymptotic_fidelity(run.trace.iterations, 0, run.trace.iterations.size());
    report.a_value =
        inferred_noise_constant(run.trace.iterations.back().n_shots, report.asymptotic_f);

    const ansatz::StateVector psi = ansatz::prepare_state(run.params);
    try {
        report.solution = problem::reconstruct_solution(psi.amplitudes, report.system);
        report.solution_valid = true;
    } catch (const NonConvergenceError&) {
        report.solution_valid = false;
    }
    report.converged =
        run.trace.terminated_early ||
        (report.solution_valid && report.solution.relative_residual <= cfg.residual_tol);

    if (!cfg.out_dir.empty()) {
        ensure_out_dir(cfg.out_dir);
        io::write_trace_csv(join_path(cfg.out_dir, "trace.csv"), report.trace);
        io::write_text_file(join_path(cfg.out_dir, "parameters.json"),
                            io::parameters_to_json(report.final_params) + "\n");
        if (report.solution_valid)
            io::write_text_file(join_path(cfg.out_dir, "solution.json"),
                                solution_to_json(report.solution).dump(2) + "\n");

        json doc;
        doc["config"] = json::parse(config_to_json(cfg));
        doc["kappa"] = report.system.kappa;
        doc["m_qubits"] = report.m_qubits;
        doc["resolution_warning"] = report.resolution_warning;
        doc["converged"] = report.converged;
        doc["terminated_early"] = report.trace.terminated_early;
        doc["escalation_iter"] = report.trace.escalation_iter;
        doc["iterations"] = report.trace.iterations.size();
        doc["final_fidelity"] = report.final_fidelity;
        doc["asymptotic_fidelity"] = report.asymptotic_f;
        doc["a_value"] = report.a_value;
        if (report.solution_valid) {
            doc["relative_residual"] = report.solution.relative_residual;
            doc["dropped_imag_norm"] = report.solution.dropped_imag_norm;
        }
        io::write_text_file(join_path(cfg.out_dir, "report.json"), doc.dump(2) + "\n");
    }
    return report;
}

ScalingReport run_scaling(const ExperimentConfig& cfg) {
    if (cfg.shots_list.empty()) throw InvalidInputError("run_scaling: empty shot list");
    ScalingReport report;
    report.system = resolve_system(cfg);
    bool warning = false;
    report.m_qubits = resolve_pointer_qubits(cfg, report.system, warning);

    report.rows.resize(cfg.shots_list.size());
    run_pool(cfg.shots_list.size(), cfg.max_workers, [&](std::size_t i) {
        optimizer::ScheduleConfig schedule = cfg.schedule;
        schedule.shots_initial = cfg.shots_list[i];
        schedule.shots_escalated = 0; // single level per row
        const SingleRun run =
            run_single(cfg, report.system, report.m_qubits, schedule,
                       seed_mix(cfg.root_seed, kStreamInitialAngles),
                       seed_mix(cfg.root_seed, kStreamScaling + i));
        ScalingRow row;
        row.shots = cfg.shots_list[i];
        row.asymptotic_f = asymptotic_fidelity(run.trace.iterations, 0, run.trace.iterations.size());
        row.heisenberg_bound = 1.0 - 4.0 / static_cast<double>(row.shots);
        row.a_value = inferred_noise_constant(row.shots, row.asymptotic_f);
        report.rows[i] = row;
    });

    if (!cfg.out_dir.empty()) {
        ensure_out_dir(cfg.out_dir);
        std::ostringstream out;
        out << "N,F_T,one_minus_4_over_N,a\n";
        for (const auto& row : report.rows) {
            out << row.shots << ',' << io::format_double(row.asymptotic_f) << ','
                << io::format_double(row.heisenberg_bound) << ','
                << io::format_double(row.a_value) << '\n';
        }
        io::write_text_file(join_path(cfg.out_dir, "scaling.csv"), out.str());
    }
    return report;
}

ConvergenceReport run_convergence(const ExperimentConfig& cfg) {
    if (cfg.replicas < 2) throw InvalidInputError("run_convergence: needs at least 2 replicas");
    ConvergenceReport report;
    report.traces.resize(cfg.replicas);

    run_pool(cfg.replicas, cfg.max_workers, [&](std::size_t r) {
        ExperimentConfig local = cfg;
        local.system.seed = seed_mix(cfg.root_seed, kStreamReplicaSystem + r);
        const problem::LinearSystem system = resolve_system(local);
        bool warning = false;
        const std::size_t m_qubits = resolve_pointer_qubits(local, system, warning);
        const SingleRun run =
            run_single(cfg, system, m_qubits, cfg.schedule,
                       seed_mix(cfg.root_seed, kStreamReplicaAngles + r),
                       seed_mix(cfg.root_seed, kStreamReplicaOptimizer + r));
        report.traces[r] = run.trace;
    });

    std::size_t longest = 0;
    for (const auto& t : report.traces) longest = std::max(longest, t.iterations.size());
    report.mean_fidelity.assign(longest, 0.0);
    report.mean_rel_freq.assign(longest, 0.0);
    for (const auto& t : report.traces) {
        if (t.iterations.size() < longest) report.padded = true;
        for (std::size_t i = 0; i < longest; ++i) {
            const auto& rec = i < t.iterations.size() ? t.iterations[i] : t.iterations.back();
            report.mean_fidelity[i] += rec.exact_fidelity;
            report.mean_rel_freq[i] += rec.rel_freq;
        }
    }
    for (auto& v : report.mean_fidelity) v /= static_cast<double>(cfg.replicas);
    for (auto& v : report.mean_rel_freq) v /= static_cast<double>(cfg.replicas);

    report.fit = optimizer::fit_exponential_rise(report.mean_fidelity);
    double env = 0.0, gap = 0.0;
    for (double f : report.mean_fidelity) {
        env = std::max(env, f);
        gap = std::max(gap, env - f);
    }
    report.envelope_gap = gap;

    if (!cfg.out_dir.empty()) {
        ensure_out_dir(cfg.out_dir);
        std::ostringstream out;
        out << "iter,mean_F_T,mean_r\n";
        for (std::size_t i = 0; i < longest; ++i) {
            out << (i + 1) << ',' << io::format_double(report.mean_fidelity[i]) << ','
                << io::format_double(report.mean_rel_freq[i]) << '\n';
        }
        io::write_text_file(join_path(cfg.out_dir, "convergence.csv"), out.str());
        for (std::size_t r = 0; r < cfg.replicas; ++r) {
            std::ostringstream name;
            name << "trace_" << r << ".csv";
            io::write_trace_csv(join_path(cfg.out_dir, name.str()), report.traces[r]);
        }
        json doc;
        doc["config"] = json::parse(config_to_json(cfg));
        doc["gamma"] = report.fit.gamma;
        doc["fit_rms_residual"] = report.fit.rms_residual;
        doc["fit_points"] = report.fit.points;
        doc["envelope_gap"] = report.envelope_gap;
        doc["padded"] = report.padded;
        io::write_text_file(join_path(cfg.out_dir, "report.json"), doc.dump(2) + "\n");
    }
    return report;
}

Fig5Report run_fig5(const ExperimentConfig& cfg) {
    Fig5Report report;
    report.shots = cfg.fig5_shots;
    report.repetitions = cfg.fig5_repetitions;
    for (std::size_t i = 0; i < cfg.p0_grid.size(); ++i) {
        const double p0 = cfg.p0_grid[i];
        if (p0 < 0.0 || p0 > 1.0) throw InvalidInputError("run_fig5: p0 outside [0,1]");
        const measurement::PointerDistribution two_outcome{{p0, 1.0 - p0}};
        std::vector<double> rs;
        rs.reserve(cfg.fig5_repetitions);
        for (std::size_t rep = 0; rep < cfg.fig5_repetitions; ++rep) {
            rs.push_back(measurement::sample_zero_frequency(
                             two_outcome, cfg.fig5_shots,
                             seed_mix(cfg.root_seed, kStreamFig5 + i * cfg.fig5_repetitions + rep))
                             .rel_freq);
        }
        Fig5Row row;
        row.p0 = p0;
        row.sigma_empirical = stats::sample_std(rs);
        row.sigma_theory = std::sqrt(p0 * (1.0 - p0) / static_cast<double>(cfg.fig5_shots));
        report.rows.push_back(row);
    }
    if (!cfg.out_dir.empty()) {
        ensure_out_dir(cfg.out_dir);
        std::ostringstream out;
        out << "p0,sigma_empirical,sigma_theory\n";
        for (const auto& row : report.rows) {
            out << io::format_double(row.p0) << ',' << io::format_double(row.sigma_empirical)
                << ',' << io::format_double(row.sigma_theory) << '\n';
        }
        io::write_text_file(join_path(cfg.out_dir, "fig5.csv"), out.str());
    }
    return report;
}

vqls::VarianceReport run_variance_compare(const ExperimentConfig& cfg) {
    const vqls::VarianceReport report = vqls::variance_comparison(
        cfg.variance_n_qubits, cfg.pauli_counts, cfg.variance_matrices, cfg.variance_repetitions,
        cfg.variance_shots_total, seed_mix(cfg.root_seed, kStreamVariance));

    if (!cfg.out_dir.empty()) {
        ensure_out_dir(cfg.out_dir);
        std::ostringstream out;
        out << "# cost estimator decomposes A = M^H (I - |b><b|) M and M^H M into Pauli terms;"
               " budget split evenly across all terms\n";
        out << "T,matrix,sigma_rel_mta,sigma_rel_vqls,repetitions,N_total\n";
        for (std::size_t ci = 0; ci < report.pauli_counts.size(); ++ci) {
            for (const auto& row : report.rows) {
                if (row.n_pauli_terms != report.pauli_counts[ci]) continue;
                out << row.n_pauli_terms << ',' << row.matrix_index << ','
                    << io::format_double(row.sigma_rel_mta) << ','
                    << io::format_double(row.sigma_rel_vqls) << ',' << row.repetitions << ','
                    << row.shot_budget << '\n';
            }
            out << report.pauli_counts[ci] << ",median,"
                << io::format_double(report.median_sigma_mta[ci]) << ','
                << io::format_double(report.median_sigma_vqls[ci]) << ','
                << report.repetitions << ',' << report.shot_budget << '\n';
        }
        io::write_text_file(join_path(cfg.out_dir, "variance.csv"), out.str());
        json doc;
        doc["config"] = json::parse(config_to_json(cfg));
        doc["spearman_vqls_medians"] = report.spearman_vqls_medians;
        doc["spearman_mta_medians"] = report.spearman_mta_medians;
        doc["spearman_mta_all"] = report.spearman_mta_all;
        io::write_text_file(join_path(cfg.out_dir, "report.json"), doc.dump(2) + "\n");
    }
    return report;
}

} // namespace mta::harness
