#include "doctest.h"

#include "mta/errors.hpp"
#include "mta/measurement.hpp"
#include "mta/optimizer.hpp"
#include "mta/problem.hpp"

#include "oracles.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace mta;
using namespace mta::optimizer;

namespace {

// Exact-fidelity evaluator for one coordinate of an ansatz.
auto coordinate_objective(ansatz::AnsatzParameters& params, std::size_t d,
                          const problem::ObjectiveObservable& obs) {
    return [&params, d, &obs](double theta) {
        const double saved = params.angles[d];
        params.angles[d] = theta;
        const auto psi = ansatz::prepare_state(params);
        params.angles[d] = saved;
        return measurement::exact_target_fidelity(obs, psi);
    };
}

} // namespace

TEST_CASE("rotosolve_step: analytic maxima of pure sinusoids") {
    std::vector<double> angles = {std::numbers::pi / 2.0};
    const double t1 = rotosolve_step(angles, 0, [](double t) { return std::cos(t); });
    CHECK(t1 == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(angles[0] == doctest::Approx(0.0).epsilon(1e-12));

    angles = {0.0};
    const double t2 = rotosolve_step(angles, 0, [](double t) { return std::sin(t); });
    CHECK(t2 == doctest::Approx(std::numbers::pi / 2.0).epsilon(1e-12));
}

TEST_CASE("rotosolve_step: flat direction leaves the angle unchanged") {
    std::vector<double> angles = {0.7};
    const double t = rotosolve_step(angles, 0, [](double) { return 0.25; });
    CHECK(t == doctest::Approx(0.7));
}

TEST_CASE("rotosolve_step: beats a dense grid search on exact fidelity") {
    const auto sys = problem::random_instance(2, 6, 100.0);
    const auto obs = problem::build_objective(sys, 4);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        ansatz::AnsatzParameters params = ansatz::random_parameters(2, 1, 40 + seed);
        const std::size_t d = seed % params.angles.size();
        auto f = coordinate_objective(params, d, obs);

        const double f0 = f(params.angles[d]);
        const double fp = f(params.angles[d] + std::numbers::pi / 2.0);
        const double fm = f(params.angles[d] - std::numbers::pi / 2.0);

        std::vector<double> work = params.angles;
        const double theta = rotosolve_step(work, d, f);
        const double achieved = f(theta);

        CHECK(achieved >= std::max({f0, fp, fm}) - 1e-10);

        // Dense grid oracle over (-pi, pi].
        double best = -1.0;
        for (int g = 0; g < 10000; ++g) {
            const double t = -std::numbers::pi + 2.0 * std::numbers::pi * (g + 1) / 10000.0;
            best = std::max(best, f(t));
        }
        CHECK(achieved >= best - 1e-6);
    }
}

TEST_CASE("sinusoid property: exact fidelity is a + b cos + c sin in each angle") {
    const auto sys = problem::random_instance(2, 14, 100.0);
    const auto obs = problem::build_objective(sys, 4);
    ansatz::AnsatzParameters params = ansatz::random_parameters(2, 1, 3);
    for (std::size_t d = 0; d < params.angles.size(); ++d) {
        auto f = coordinate_objective(params, d, obs);
        // Five equally spaced samples, least-squares fit of 3 coefficients.
        const std::size_t samples = 5;
        std::vector<double> ts(samples), fs(samples);
        for (std::size_t i = 0; i < samples; ++i) {
            ts[i] = -std::numbers::pi + 2.0 * std::numbers::pi * i / samples;
            fs[i] = f(ts[i]);
        }
        // Normal equations for columns [1, cos t, sin t].
        double g[3][3] = {};
        double rhs[3] = {};
        for (std::size_t i = 0; i < samples; ++i) {
            const double row[3] = {1.0, std::cos(ts[i]), std::sin(ts[i])};
            for (int a = 0; a < 3; ++a) {
                rhs[a] += row[a] * fs[i];
                for (int b = 0; b < 3; ++b) g[a][b] += row[a] * row[b];
            }
        }
        // Solve the 3x3 system by elimination.
        double m[3][4];
        for (int a = 0; a < 3; ++a) {
            for (int b = 0; b < 3; ++b) m[a][b] = g[a][b];
            m[a][3] = rhs[a];
        }
        for (int col = 0; col < 3; ++col) {
            int piv = col;
            for (int r2 = col + 1; r2 < 3; ++r2)
                if (std::abs(m[r2][col]) > std::abs(m[piv][col])) piv = r2;
            std::swap(m[col], m[piv]);
            for (int r2 = 0; r2 < 3; ++r2) {
                if (r2 == col) continue;
                const double fct = m[r2][col] / m[col][col];
                for (int c2 = col; c2 < 4; ++c2) m[r2][c2] -= fct * m[col][c2];
            }
        }
        const double coef[3] = {m[0][3] / m[0][0], m[1][3] / m[1][1], m[2][3] / m[2][2]};
        double residual = 0.0;
        for (std::size_t i = 0; i < samples; ++i) {
            const double fit = coef[0] + coef[1] * std::cos(ts[i]) + coef[2] * std::sin(ts[i]);
            residual = std::max(residual, std::abs(fit - fs[i]));
        }
        CHECK(residual <= 1e-9);
    }
}

TEST_CASE("rotosolve property: noise-free update never decreases the objective") {
    const auto sys = problem::random_instance(2, 23, 100.0);
    const auto obs = problem::build_objective(sys, 4);
    std::mt19937_64 pick(5);
    for (int rep = 0; rep < 100; ++rep) {
        ansatz::AnsatzParameters params = ansatz::random_parameters(2, 2, 1000 + rep);
        const std::size_t d = pick() % params.angles.size();
        auto f = coordinate_objective(params, d, obs);
        const double before = f(params.angles[d]);
        const double theta = rotosolve_step(params.angles, d, f);
        CHECK(f(theta) >= before - 1e-10);
    }
}

TEST_CASE("optimize: single-qubit system converges within one sweep (exact)") {
    const auto sys = problem::make_system(ComplexMatrix::identity(2), {1.0, 0.0});
    const auto obs = problem::build_objective(sys, 3);
    const auto params0 = ansatz::random_parameters(1, 1, 11);

    ScheduleConfig schedule;
    schedule.max_iterations = params0.angles.size(); // exactly one sweep
    schedule.shots_escalated = 0;                    // escalation off
    OptimizeOptions opts;
    opts.exact_objective = true;

    const auto [trace, params] = optimize(obs, params0, schedule, measurement::PointerConfig{3},
                                          1, opts);
    CHECK(trace.iterations.back().exact_fidelity >= 1.0 - 1e-9);
}

TEST_CASE("optimize: exact objective rises monotonically") {
    const auto sys = problem::random_instance(2, 8, 50.0);
    const auto obs = problem::build_objective(sys, 4);
    const auto params0 = ansatz::random_parameters(2, 2, 21);

    ScheduleConfig schedule;
    schedule.max_iterations = 400;
    schedule.shots_escalated = 0;
    OptimizeOptions opts;
    opts.exact_objective = true;

    const auto [trace, params] = optimize(obs, params0, schedule, measurement::PointerConfig{4},
                                          2, opts);
    for (std::size_t i = 1; i < trace.iterations.size(); ++i)
        CHECK(trace.iterations[i].exact_fidelity >= trace.iterations[i - 1].exact_fidelity - 1e-10);
    CHECK(trace.iterations.back().exact_fidelity >= 0.999);
}

TEST_CASE("optimize: deterministic per seed and trace invariants") {
    const auto sys = problem::random_instance(2, 9, 50.0);
    const auto obs = problem::build_objective(sys, 4);
    const auto params0 = ansatz::random_parameters(2, 2, 33);

    ScheduleConfig schedule;
    schedule.shots_initial = 200;
    schedule.shots_escalated = 0;
    schedule.max_iterations = 300;

    const auto [t1, p1] = optimize(obs, params0, schedule, measurement::PointerConfig{4}, 77);
    const auto [t2, p2] = optimize(obs, params0, schedule, measurement::PointerConfig{4}, 77);
    CHECK(p1.angles == p2.angles);
    REQUIRE(t1.iterations.size() == t2.iterations.size());
    for (std::size_t i = 0; i < t1.iterations.size(); ++i) {
        CHECK(t1.iterations[i].rel_freq == t2.iterations[i].rel_freq);
        CHECK(t1.iterations[i].iter == i + 1);
        CHECK(t1.iterations[i].rel_freq >= 0.0);
        CHECK(t1.iterations[i].rel_freq <= 1.0);
        CHECK(t1.iterations[i].exact_fidelity >= 0.0);
        CHECK(t1.iterations[i].exact_fidelity <= 1.0 + 1e-12);
    }

    const auto [t3, p3] = optimize(obs, params0, schedule, measurement::PointerConfig{4}, 78);
    CHECK(p1.angles != p3.angles);
}

TEST_CASE("optimize: shot escalation fires after a stall") {
    const auto sys = problem::random_instance(2, 10, 50.0);
    const auto obs = problem::build_objective(sys, 4);
    const auto params0 = ansatz::random_parameters(2, 2, 5);

    ScheduleConfig schedule;
    schedule.shots_initial = 100;
    schedule.shots_escalated = 10000;
    schedule.escalate_after_stall = 40;
    schedule.max_iterations = 600;
    schedule.terminate_window = 50;
    schedule.terminate_threshold = 0.9;

    const auto [trace, params] = optimize(obs, params0, schedule, measurement::PointerConfig{4}, 3);
    CHECK(trace.escalation_iter > 0);
    bool saw_small = false, saw_large = false;
    for (const auto& rec : trace.iterations) {
        if (rec.n_shots == 100) saw_small = true;
        if (rec.n_shots == 10000) saw_large = true;
    }
    CHECK(saw_small);
    CHECK(saw_large);
}

TEST_CASE("optimize: saturation termination on a trivial instance") {
    const auto sys = problem::make_system(ComplexMatrix::identity(2), {1.0, 0.0});
    const auto obs = problem::build_objective(sys, 3);
    const auto params0 = ansatz::random_parameters(1, 1, 2);

    ScheduleConfig schedule;
    schedule.shots_initial = 500;
    schedule.shots_escalated = 0;
    schedule.max_iterations = 2000;
    schedule.terminate_window = 40;
    schedule.terminate_threshold = 0.5;

    const auto [trace, params] = optimize(obs, params0, schedule, measurement::PointerConfig{3}, 4);
    CHECK(trace.terminated_early);
    CHECK(trace.iterations.size() < 2000);
    CHECK(trace.iterations.back().exact_fidelity >= 0.99);
}

TEST_CASE("fit_exponential_rise: exact and noisy synthetic traces") {
    std::vector<double> clean;
    for (int t = 1; t <= 600; ++t) clean.push_back(1.0 - std::exp(-0.014 * t));
    const auto fit = fit_exponential_rise(clean);
    CHECK(fit.gamma == doctest::Approx(0.014).epsilon(1e-6));
    CHECK(fit.rms_residual <= 1e-10);

    CHECK_THROWS_AS(fit_exponential_rise(std::vector<double>(100, 1.0)), InsufficientDataError);

    std::mt19937_64 eng(8);
    std::normal_distribution<double> noise(0.0, 0.01);
    std::vector<double> noisy;
    for (int t = 1; t <= 600; ++t) noisy.push_back(1.0 - std::exp(-0.014 * t) + noise(eng));
    const auto nfit = fit_exponential_rise(noisy);
    CHECK(nfit.gamma == doctest::Approx(0.014).epsilon(0.10));
}
