#include "mta/optimizer.hpp"

#include "mta/errors.hpp"
#include "mta/rng.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>

namespace mta::optimizer {

double rotosolve_step(std::vector<double>& angles, std::size_t d,
                      const std::function<double(double)>& evaluate) {
    if (d >= angles.size()) throw InvalidInputError("rotosolve_step: parameter index out of range");
    const double phi0 = angles[d];
    const double f0 = evaluate(phi0);
    const double fp = evaluate(phi0 + 0.5 * std::numbers::pi);
    const double fm = evaluate(phi0 - 0.5 * std::numbers::pi);

    const double a = 0.5 * (fp + fm);
    const double b = f0 - a;
    const double c = 0.5 * (fp - fm);
    constexpr double kFlat = 1e-12;
    if (std::abs(b) < kFlat && std::abs(c) < kFlat) return angles[d];

    const double theta = ansatz::reduce_angle(phi0 + std::atan2(c, b));
    angles[d] = theta;
    return theta;
}

std::pair<OptimizerTrace, ansatz::AnsatzParameters>
optimize(const problem::ObjectiveObservable& obs, const ansatz::AnsatzParameters& initial,
         const ScheduleConfig& schedule, const measurement::PointerConfig& pointer_cfg,
         std::uint64_t seed, const OptimizeOptions& options) {
    ansatz::AnsatzParameters params = initial;
    const std::size_t dim = params.angles.size();
    if (dim == 0) throw InvalidInputError("optimize: no parameters to optimize");

    const bool escalation_enabled = schedule.shots_escalated > schedule.shots_initial;
    const std::uint64_t final_shots =
        escalation_enabled ? schedule.shots_escalated : schedule.shots_initial;

    OptimizerTrace trace;
    trace.iterations.reserve(schedule.max_iterations);

    std::uint64_t shots = schedule.shots_initial;
    double best_estimate = -1.0;
    std::size_t stall = 0;
    std::deque<bool> saturated_window;
    std::size_t saturated_count = 0;

    for (std::size_t t = 1; t <= schedule.max_iterations; ++t) {
        const std::size_t d = (t - 1) % dim;
        std::size_t eval_index = 0;
        double first_estimate = 0.0;
        const auto evaluate = [&](double theta) {
            const double saved = params.angles[d];
            params.angles[d] = theta;
            const ansatz::StateVector psi = ansatz::prepare_state(params);
            params.angles[d] = saved;
            double value;
            if (options.exact_objective) {
                value = measurement::exact_target_fidelity(obs, psi);
            } else {
                const double p0 = measurement::zero_outcome_probability(obs, psi, pointer_cfg,
                                                                        options.backend);
                const std::uint64_t stream = 3 * (t - 1) + eval_index;
                value = measurement::sample_zero_frequency(p0, shots, seed_mix(seed, stream))
                            .rel_freq;
            }
            if (eval_index == 0) first_estimate = value;
            ++eval_index;
            return value;
        };

        rotosolve_step(params.angles, d, evaluate);

        IterationRecord rec;
        rec.iter = t;
        rec.param_index = d;
        rec.rel_freq = first_estimate;
        rec.exact_fidelity =
            measurement::exact_target_fidelity(obs, ansatz::prepare_state(params));
        rec.n_shots = shots;
        trace.iterations.push_back(rec);

        if (first_estimate > best_estimate) {
            best_estimate = first_estimate;
            stall = 0;
        } else {
            ++stall;
        }
        if (escalation_enabled && shots < schedule.shots_escalated &&
            stall >= schedule.escalate_after_stall) {
            shots = schedule.shots_escalated;
            trace.escalation_iter = t + 1;
            stall = 0;
            best_estimate = -1.0;
        }

        saturated_window.push_back(first_estimate >= 1.0);
        if (saturated_window.back()) ++saturated_count;
        if (saturated_window.size() > schedule.terminate_window) {
            if (saturated_window.front()) --saturated_count;
            saturated_window.pop_front();
        }
        if (shots >= final_shots && saturated_window.size() == schedule.terminate_window &&
            static_cast<double>(saturated_count) >=
                schedule.terminate_threshold * static_cast<double>(schedule.terminate_window)) {
            trace.terminated_early = true;
            break;
        }
    }
    return {std::move(trace), std::move(params)};
}

ExponentialFit fit_exponential_rise(const std::vector<double>& fidelity) {
    // Pre-saturation prefix: stop at the first point with F >= 0.99.
    std::vector<double> ts, fs;
    for (std::size_t i = 0; i < fidelity.size(); ++i) {
        if (fidelity[i] >= 0.99) break;
        ts.push_back(static_cast<double>(i + 1));
        fs.push_back(fidelity[i]);
    }
    if (ts.size() < 10)
        throw InsufficientDataError("fit_exponential_rise: fewer than 10 pre-saturation points");

    // Log-linear initial guess, then Gauss-Newton in F-space.
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        num += ts[i] * std::log(std::max(1e-12, 1.0 - fs[i]));
        den += ts[i] * ts[i];
    }
    double gamma = std::max(1e-9, -num / den);
    for (int it = 0; it < 100; ++it) {
        double jr = 0.0, jj = 0.0;
        for (std::size_t i = 0; i < ts.size(); ++i) {
            const double e = std::exp(-gamma * ts[i]);
            const double r = fs[i] - (1.0 - e);
            const double jac = ts[i] * e; // d(1-e)/dgamma
            jr += jac * r;
            jj += jac * jac;
        }
        if (jj == 0.0) break;
        const double step = jr / jj;
        gamma = std::max(1e-12, gamma + step);
        if (std::abs(step) < 1e-14 * std::max(1.0, gamma)) break;
    }

    ExponentialFit fit;
    fit.gamma = gamma;
    fit.points = ts.size();
    double ss = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const double r = fs[i] - (1.0 - std::exp(-gamma * ts[i]));
        ss += r * r;
    }
    fit.rms_residual = std::sqrt(ss / static_cast<double>(ts.size()));
    return fit;
}

ExponentialFit fit_exponential_rise(const OptimizerTrace& trace) {
    std::vector<double> f;
    f.reserve(trace.iterations.size());
    for (const auto& rec : trace.iterations) f.push_back(rec.exact_fidelity);
    return fit_exponential_rise(f);
}

} // namespace mta::optimizer
