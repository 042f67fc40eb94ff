#include "mta/ansatz.hpp"

#include "mta/errors.hpp"
#include "mta/rng.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace mta::ansatz {

std::size_t module_angle_count(std::size_t n_qubits) {
    if (n_qubits == 0) throw InvalidInputError("module_angle_count: need at least one qubit");
    return n_qubits == 1 ? 6 : 9 * n_qubits;
}

std::size_t total_angle_count(std::size_t n_qubits, std::size_t k_modules) {
    return module_angle_count(n_qubits) * k_modules;
}

double reduce_angle(double theta) {
    double r = std::fmod(theta + std::numbers::pi, 2.0 * std::numbers::pi);
    if (r <= 0.0) r += 2.0 * std::numbers::pi;
    return r - std::numbers::pi;
}

AnsatzParameters random_parameters(std::size_t n_qubits, std::size_t k_modules,
                                   std::uint64_t seed) {
    AnsatzParameters p;
    p.n_qubits = n_qubits;
    p.k_modules = k_modules;
    p.angles.resize(total_angle_count(n_qubits, k_modules));
    std::mt19937_64 eng = make_engine(seed);
    std::uniform_real_distribution<double> uni(-std::numbers::pi, std::numbers::pi);
    for (auto& a : p.angles) a = reduce_angle(uni(eng));
    return p;
}

AnsatzParameters zero_parameters(std::size_t n_qubits, std::size_t k_modules) {
    AnsatzParameters p;
    p.n_qubits = n_qubits;
    p.k_modules = k_modules;
    p.angles.assign(total_angle_count(n_qubits, k_modules), 0.0);
    return p;
}

void apply_ry(CVector& amps, std::size_t qubit, double theta) {
    const double c = std::cos(0.5 * theta);
    const double s = std::sin(0.5 * theta);
    const std::size_t mask = std::size_t{1} << qubit;
    for (std::size_t i = 0; i < amps.size(); ++i) {
        if (i & mask) continue;
        const Complex a0 = amps[i];
        const Complex a1 = amps[i | mask];
        amps[i] = c * a0 - s * a1;
        amps[i | mask] = s * a0 + c * a1;
    }
}

void apply_rz(CVector& amps, std::size_t qubit, double theta) {
    const Complex low(std::cos(0.5 * theta), -std::sin(0.5 * theta));
    const Complex high = std::conj(low);
    const std::size_t mask = std::size_t{1} << qubit;
    for (std::size_t i = 0; i < amps.size(); ++i) amps[i] *= (i & mask) ? high : low;
}

void apply_hadamard(CVector& amps, std::size_t qubit) {
    const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
    const std::size_t mask = std::size_t{1} << qubit;
    for (std::size_t i = 0; i < amps.size(); ++i) {
        if (i & mask) continue;
        const Complex a0 = amps[i];
        const Complex a1 = amps[i | mask];
        amps[i] = inv_sqrt2 * (a0 + a1);
        amps[i | mask] = inv_sqrt2 * (a0 - a1);
    }
}

void apply_cx(CVector& amps, std::size_t control, std::size_t target) {
    const std::size_t cmask = std::size_t{1} << control;
    const std::size_t tmask = std::size_t{1} << target;
    for (std::size_t i = 0; i < amps.size(); ++i) {
        if ((i & cmask) && !(i & tmask)) std::swap(amps[i], amps[i | tmask]);
    }
}

namespace {

void euler_layer(CVector& amps, std::size_t n, const double* t) {
    for (std::size_t q = 0; q < n; ++q) apply_rz(amps, q, t[q]);
    for (std::size_t q = 0; q < n; ++q) apply_ry(amps, q, t[n + q]);
    for (std::size_t q = 0; q < n; ++q) apply_rz(amps, q, t[2 * n + q]);
}

void apply_module(CVector& amps, std::size_t n, const double* t) {
    euler_layer(amps, n, t);
    if (n >= 2) {
        const double* ring = t + 3 * n;
        for (std::size_t c = 0; c < n; ++c) {
            const std::size_t tgt = (c + 1) % n;
            apply_cx(amps, c, tgt);
            apply_rz(amps, c, ring[3 * c]);
            apply_ry(amps, tgt, ring[3 * c + 1]);
            apply_cx(amps, tgt, c);
            apply_ry(amps, tgt, ring[3 * c + 2]);
            apply_cx(amps, c, tgt);
        }
        euler_layer(amps, n, t + 6 * n);
    } else {
        euler_layer(amps, n, t + 3);
    }
}

} // namespace

StateVector prepare_state(const AnsatzParameters& params) {
    const std::size_t expected = total_angle_count(params.n_qubits, params.k_modules);
    if (params.angles.size() != expected)
        throw InvalidInputError("prepare_state: angle count does not match (n_qubits, k_modules)");

    StateVector psi;
    psi.amplitudes.assign(std::size_t{1} << params.n_qubits, Complex(0.0, 0.0));
    psi.amplitudes[0] = 1.0;
    const std::size_t per_module = module_angle_count(params.n_qubits);
    for (std::size_t k = 0; k < params.k_modules; ++k) {
        apply_module(psi.amplitudes, params.n_qubits, params.angles.data() + k * per_module);
    }
    return psi;
}

Complex state_overlap(const StateVector& psi, const StateVector& phi) {
    if (psi.dimension() != phi.dimension())
        throw InvalidInputError("state_overlap: dimension mismatch");
    return inner(phi.amplitudes, psi.amplitudes);
}

} // namespace mta::ansatz
