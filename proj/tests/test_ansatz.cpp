#include "doctest.h"

#include "mta/ansatz.hpp"
#include "mta/errors.hpp"
#include "mta/optimizer.hpp"

#include "oracles.hpp"

#include <cmath>
#include <numbers>

using namespace mta;
using namespace mta::ansatz;

TEST_CASE("angle bookkeeping: 36 angles per module at n = 4") {
    CHECK(module_angle_count(4) == 36);
    CHECK(module_angle_count(2) == 18);
    CHECK(module_angle_count(1) == 6);
    CHECK(total_angle_count(4, 3) == 108);
}

TEST_CASE("prepare_state: all-zero angles give |0...0> up to global phase") {
    for (std::size_t k : {std::size_t{1}, std::size_t{3}}) {
        const StateVector psi = prepare_state(zero_parameters(4, k));
        CHECK(std::abs(std::abs(psi.amplitudes[0]) - 1.0) <= 1e-12);
        for (std::size_t i = 1; i < psi.dimension(); ++i) CHECK(std::abs(psi.amplitudes[i]) <= 1e-12);
    }
}

TEST_CASE("prepare_state: single-qubit Ry(pi) flips |0> to |1>") {
    AnsatzParameters p = zero_parameters(1, 1);
    p.angles[1] = std::numbers::pi; // the Ry of the first Euler layer
    const StateVector psi = prepare_state(p);
    CHECK(std::abs(psi.amplitudes[0]) <= 1e-12);
    CHECK(std::abs(std::abs(psi.amplitudes[1]) - 1.0) <= 1e-12);
}

TEST_CASE("prepare_state: parameter length mismatch") {
    AnsatzParameters p = zero_parameters(2, 1);
    p.angles.pop_back();
    CHECK_THROWS_AS(prepare_state(p), InvalidInputError);
}

TEST_CASE("prepare_state: matches the dense-matrix circuit oracle") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const AnsatzParameters p = random_parameters(4, 3, seed);
        const StateVector psi = prepare_state(p);
        CHECK(std::abs(norm2(psi.amplitudes) - 1.0) <= 1e-12);

        const CVector expected = oracles::circuit_oracle_state(p);
        for (std::size_t i = 0; i < expected.size(); ++i)
            CHECK(std::abs(psi.amplitudes[i] - expected[i]) <= 1e-10);
    }
    // Also cover a non-four qubit count.
    const AnsatzParameters p2 = random_parameters(3, 2, 9);
    const StateVector psi2 = prepare_state(p2);
    const CVector exp2 = oracles::circuit_oracle_state(p2);
    for (std::size_t i = 0; i < exp2.size(); ++i)
        CHECK(std::abs(psi2.amplitudes[i] - exp2[i]) <= 1e-10);
}

TEST_CASE("prepare_state: statevector is 4pi-periodic in every angle") {
    const AnsatzParameters base = random_parameters(2, 1, 4);
    const StateVector ref = prepare_state(base);
    for (std::size_t d = 0; d < base.angles.size(); ++d) {
        AnsatzParameters shifted = base;
        shifted.angles[d] += 4.0 * std::numbers::pi;
        const StateVector psi = prepare_state(shifted);
        for (std::size_t i = 0; i < ref.dimension(); ++i)
            CHECK(std::abs(psi.amplitudes[i] - ref.amplitudes[i]) <= 1e-10);
    }
}

TEST_CASE("state_overlap: fixed values") {
    StateVector zero{{Complex(1.0, 0.0), Complex(0.0, 0.0)}};
    StateVector one{{Complex(0.0, 0.0), Complex(1.0, 0.0)}};
    StateVector plus{{Complex(1.0 / std::numbers::sqrt2, 0.0),
                      Complex(1.0 / std::numbers::sqrt2, 0.0)}};

    CHECK(std::abs(state_overlap(zero, zero) - Complex(1.0, 0.0)) <= 1e-15);
    CHECK(std::abs(state_overlap(zero, one)) <= 1e-15);
    CHECK(std::abs(state_overlap(plus, zero) - Complex(1.0 / std::numbers::sqrt2, 0.0)) <= 1e-15);

    StateVector bad{{Complex(1.0, 0.0)}};
    CHECK_THROWS_AS(state_overlap(zero, bad), InvalidInputError);
}

TEST_CASE("random_parameters: deterministic and in range") {
    const AnsatzParameters a = random_parameters(4, 3, 17);
    const AnsatzParameters b = random_parameters(4, 3, 17);
    CHECK(a.angles == b.angles);
    for (double t : a.angles) {
        CHECK(t > -std::numbers::pi);
        CHECK(t <= std::numbers::pi);
    }
}

TEST_CASE("expressibility: k = 3 modules reach random 16-dim targets") {
    // Exact-fidelity coordinate descent must reach fidelity >= 0.99 for at
    // least 95 of 100 random unit targets (observed headroom: all 100 within
    // 6 sweeps).
    int reached = 0;
    for (int target_i = 0; target_i < 100; ++target_i) {
        const CVector target = oracles::random_state(16, 9000 + target_i);
        AnsatzParameters params = random_parameters(4, 3, 100 + target_i);
        const auto fidelity_at = [&](std::size_t d, double t) {
            const double saved = params.angles[d];
            params.angles[d] = t;
            const auto psi = prepare_state(params);
            params.angles[d] = saved;
            return std::norm(inner(target, psi.amplitudes));
        };
        bool ok = false;
        for (int sweep = 0; sweep < 50 && !ok; ++sweep) {
            for (std::size_t d = 0; d < params.angles.size() && !ok; ++d) {
                mta::optimizer::rotosolve_step(params.angles, d,
                                               [&](double t) { return fidelity_at(d, t); });
                ok = fidelity_at(d, params.angles[d]) >= 0.99;
            }
        }
        if (ok) ++reached;
    }
    CHECK(reached >= 95);
}

TEST_CASE("reduce_angle: canonical interval (-pi, pi]") {
    CHECK(reduce_angle(std::numbers::pi) == doctest::Approx(std::numbers::pi));
    CHECK(reduce_angle(-std::numbers::pi) == doctest::Approx(std::numbers::pi));
    CHECK(reduce_angle(3.0 * std::numbers::pi) == doctest::Approx(std::numbers::pi));
    CHECK(reduce_angle(0.25) == doctest::Approx(0.25));
    CHECK(reduce_angle(2.0 * std::numbers::pi + 0.25) == doctest::Approx(0.25));
}
