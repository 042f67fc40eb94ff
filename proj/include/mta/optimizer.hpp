#pragma once

#include "mta/ansatz.hpp"
#include "mta/measurement.hpp"
#include "mta/problem.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace mta::optimizer {

// One coordinate update. `rel_freq` is the shot estimate of the zero-outcome
// probability at the parameters entering the iteration; `exact_fidelity` is
// the diagnostic |<a_0|psi>|^2 of the state the iteration produced.
struct IterationRecord {
    std::size_t iter = 0;        // 1-based, strictly increasing
    std::size_t param_index = 0; // coordinate updated in this iteration
    double rel_freq = 0.0;
    double exact_fidelity = 0.0;
    std::uint64_t n_shots = 0;
};

struct OptimizerTrace {
    std::vector<IterationRecord> iterations;
    bool terminated_early = false;   // stop rule fired before max_iterations
    std::size_t escalation_iter = 0; // first iteration at escalated shots, 0 = never
};

// Shot budget and loop control. Escalation is enabled whenever
// shots_escalated > shots_initial.
struct ScheduleConfig {
    std::uint64_t shots_initial = 1000;
    std::uint64_t shots_escalated = 100000; // default x100
    std::size_t escalate_after_stall = 1500;
    std::size_t max_iterations = 10000;
    std::size_t terminate_window = 200;
    double terminate_threshold = 0.5;
};

struct OptimizeOptions {
    measurement::Backend backend = measurement::Backend::spectral;
    bool exact_objective = false; // replace shot estimates by exact fidelity
};

// Closed-form coordinate maximizer for objectives of the form
// f(theta) = a + b cos(theta - phi) + c sin(theta - phi). Samples f at the
// current angle and at +-pi/2 around it, then jumps to the analytic maximum.
// Flat directions (|b|, |c| < 1e-12) leave the angle unchanged. Writes the
// new angle back into `angles` and returns it, reduced to (-pi, pi].
double rotosolve_step(std::vector<double>& angles, std::size_t d,
                      const std::function<double(double)>& evaluate);

// Cyclic Rotosolve over all coordinates, maximizing the shot-estimated
// zero-outcome frequency (three fresh shot batches per iteration). Escalates
// the budget after a stall in the running-best estimate and stops early when
// the estimate saturates at 1 for terminate_threshold of the trailing window
// (only once the final shot level is active). Deterministic per seed.
std::pair<OptimizerTrace, ansatz::AnsatzParameters>
optimize(const problem::ObjectiveObservable& obs, const ansatz::AnsatzParameters& initial,
         const ScheduleConfig& schedule, const measurement::PointerConfig& pointer_cfg,
         std::uint64_t seed, const OptimizeOptions& options = {});

struct ExponentialFit {
    double gamma = 0.0;
    double rms_residual = 0.0;
    std::size_t points = 0;
};

// Least-squares fit of F(t) ~ 1 - exp(-gamma t) over the pre-saturation
// prefix (F < 0.99). Needs at least 10 such points.
ExponentialFit fit_exponential_rise(const std::vector<double>& fidelity);
ExponentialFit fit_exponential_rise(const OptimizerTrace& trace);

} // namespace mta::optimizer
