#pragma once

#include "mta/complex_matrix.hpp"

#include <cstdint>
#include <vector>

namespace mta::ansatz {

// Normalized n-qubit state. amplitudes[i] is the coefficient of basis state
// |i> with qubit q stored in bit q of the index (qubit 0 = least significant).
struct StateVector {
    CVector amplitudes;

    std::size_t dimension() const { return amplitudes.size(); }
};

// Rotation angles for k sequential copies of the entangling module.
//
// Canonical module layout (angle indices within one module, n >= 2):
//   1. Euler layer: Rz(t[q]) then Ry(t[n+q]) then Rz(t[2n+q]) on each qubit q
//      (3n angles).
//   2. Ring block: for each directed link c -> t = (c+1 mod n), c = 0..n-1:
//         CX(c,t); Rz(t[3n+3c])@c; Ry(t[3n+3c+1])@t; CX(t,c);
//         Ry(t[3n+3c+2])@t; CX(c,t)
//      (3n angles, 3n CX gates).
//   3. Euler layer as in 1 (3n angles).
// Total 9n angles per module (36 for n = 4). For n = 1 the ring block is
// empty and a module has 6 angles.
//
// Gate conventions: Ry(t) = exp(-i t Y / 2), Rz(t) = exp(-i t Z / 2).
struct AnsatzParameters {
    std::size_t n_qubits = 0;
    std::size_t k_modules = 0;
    std::vector<double> angles; // radians, reduced to (-pi, pi]
};

std::size_t module_angle_count(std::size_t n_qubits);
std::size_t total_angle_count(std::size_t n_qubits, std::size_t k_modules);

// Map an angle into the canonical interval (-pi, pi].
double reduce_angle(double theta);

// Uniform random angles on (-pi, pi], deterministic per seed.
AnsatzParameters random_parameters(std::size_t n_qubits, std::size_t k_modules,
                                   std::uint64_t seed);

AnsatzParameters zero_parameters(std::size_t n_qubits, std::size_t k_modules);

// Apply k copies of the module to |0...0> and return the statevector.
// Throws InvalidInputError when the angle count does not match (n, k).
StateVector prepare_state(const AnsatzParameters& params);

// <phi|psi>; the squared magnitude is the fidelity between the states.
Complex state_overlap(const StateVector& psi, const StateVector& phi);

// In-place single/two-qubit gates used by the circuit builders.
void apply_ry(CVector& amps, std::size_t qubit, double theta);
void apply_rz(CVector& amps, std::size_t qubit, double theta);
void apply_hadamard(CVector& amps, std::size_t qubit);
void apply_cx(CVector& amps, std::size_t control, std::size_t target);

} // namespace mta::ansatz
