#pragma once

#include "mta/ansatz.hpp"
#include "mta/complex_matrix.hpp"
#include "mta/problem.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace mta::measurement {

// Output-register geometry: K = 2^m pointer outcomes at resolution 2^-m.
struct PointerConfig {
    std::size_t m_qubits = 1;

    std::size_t bins() const { return std::size_t{1} << m_qubits; }
    double resolution() const { return 1.0 / static_cast<double>(bins()); }
};

// probs[j] is the probability of pointer outcome j, i.e. eigenvalue estimate
// j / 2^m read from the output register as a binary fraction (most
// significant fractional bit on the first output qubit).
struct PointerDistribution {
    std::vector<double> probs;

    double zero() const { return probs.empty() ? 0.0 : probs.front(); }
};

// One shot batch: N0 zero outcomes among N shots, relative frequency N0/N.
struct ShotRecord {
    std::uint64_t n_shots = 0;
    std::uint64_t n_zero = 0;
    double rel_freq = 0.0;
    std::uint64_t rng_seed = 0;
};

enum class Backend { projective, spectral, circuit };

Backend backend_from_string(const std::string& name);
std::string to_string(Backend b);

// Squared-Dirichlet phase-estimation kernel
//   F_K(delta) = sin^2(pi K delta) / (K^2 sin^2(pi delta)),
// with limit 1 at delta == 0 (mod 1). Sums to 1 over the grid {l/K}.
double phase_estimation_kernel(double delta, std::size_t K);

// Idealized backend: eigenstate weights |<a_i|psi>|^2 accumulated into the
// pointer bin nearest to lambda_i (ties round down); leakage neglected.
PointerDistribution pointer_distribution_projective(const problem::ObjectiveObservable& obs,
                                                    const ansatz::StateVector& psi,
                                                    const PointerConfig& cfg);

// Exact phase-estimation statistics computed analytically in the eigenbasis:
// p(l) = sum_i |<a_i|psi>|^2 F_K(lambda_i - l/K). Includes spectral leakage.
PointerDistribution pointer_distribution_spectral(const problem::ObjectiveObservable& obs,
                                                  const ansatz::StateVector& psi,
                                                  const PointerConfig& cfg);

// Full statevector simulation of the phase-estimation circuit: Hadamards on
// the output register, controlled powers of exp(2*pi*i*A), inverse QFT, then
// the marginal distribution of the output register. Requires n + m <= 26.
PointerDistribution pointer_distribution_circuit(const problem::ObjectiveObservable& obs,
                                                 const ansatz::StateVector& psi,
                                                 const PointerConfig& cfg);

PointerDistribution pointer_distribution(const problem::ObjectiveObservable& obs,
                                         const ansatz::StateVector& psi, const PointerConfig& cfg,
                                         Backend backend);

// Zero-outcome probability only; identical to pointer_distribution(...)
// .zero() but skips the other K-1 bins.
double zero_outcome_probability(const problem::ObjectiveObservable& obs,
                                const ansatz::StateVector& psi, const PointerConfig& cfg,
                                Backend backend);

// N0 ~ Binomial(N, p0) with a deterministic seeded generator.
ShotRecord sample_zero_frequency(const PointerDistribution& dist, std::uint64_t n_shots,
                                 std::uint64_t seed);
ShotRecord sample_zero_frequency(double p_zero, std::uint64_t n_shots, std::uint64_t seed);

// Full multinomial pointer histogram for distribution diagnostics.
std::vector<std::uint64_t> sample_pointer_counts(const PointerDistribution& dist,
                                                 std::uint64_t n_shots, std::uint64_t seed);

// Target fidelity |<a_0|psi>|^2 (the zero-outcome probability of the ideal
// measurement). Throws AmbiguityError when the null space is degenerate.
double exact_target_fidelity(const problem::ObjectiveObservable& obs,
                             const ansatz::StateVector& psi);

} // namespace mta::measurement
