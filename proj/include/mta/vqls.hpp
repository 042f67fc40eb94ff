#pragma once

#include "mta/ansatz.hpp"
#include "mta/complex_matrix.hpp"
#include "mta/measurement.hpp"
#include "mta/problem.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace mta::vqls {

// Weighted sum of Pauli strings. A string is one character per qubit from
// {I,X,Y,Z}; the leftmost character acts on the highest qubit, matching the
// |q_{n-1} ... q_0> index convention.
struct PauliDecomposition {
    struct Term {
        std::string ops;
        double coeff = 0.0;
    };
    std::vector<Term> terms;
    std::size_t n_qubits = 0;
};

// Dense 2^n x 2^n matrix of one Pauli string.
ComplexMatrix pauli_matrix(const std::string& ops);

// Expectation <psi|P|psi> via the one-nonzero-per-row structure of P.
double pauli_expectation(const std::string& ops, const CVector& psi);

// c_P = Tr(P m) / 2^n over all 4^n strings; terms below 1e-12 dropped.
// The input must be Hermitian (real coefficients).
PauliDecomposition pauli_decompose(const ComplexMatrix& m);

ComplexMatrix reconstruct(const PauliDecomposition& decomposition);

// Sum of n_terms distinct uniformly drawn Pauli strings with i.i.d. uniform
// [-1,1] coefficients. Hermitian by construction; deterministic per seed.
ComplexMatrix random_pauli_matrix(std::size_t n_qubits, std::size_t n_terms, std::uint64_t seed);

// sigma_rel switches to absolute sigma when |mean| < 1e-6 (the relative
// deviation diverges as the cost approaches zero at the solution).
struct SigmaEstimate {
    double mean = 0.0;
    double sigma_rel = 0.0;
    bool absolute_sigma = false;  // sigma_rel holds the absolute sigma
    std::size_t excluded = 0;     // repetitions dropped (denominator <= 0)
};

// Shot-noise model of the Hadamard-test estimate of the normalized cost
// <psi|A|psi> / <psi|M^H M|psi> with A = M^H (I - |b><b|) M. Both operators
// are decomposed into Pauli terms, the total budget is split evenly across
// all terms, and each term is estimated as the sample mean of +-1 draws
// with the exact expectation.
SigmaEstimate estimate_vqls_cost_sigma(const ComplexMatrix& m, const std::vector<double>& b,
                                       const ansatz::StateVector& psi,
                                       std::uint64_t n_shots_total, std::size_t repetitions,
                                       std::uint64_t seed);

// Shot-noise of the zero-outcome relative frequency with the full budget
// spent on every repetition.
SigmaEstimate estimate_mta_sigma(const problem::ObjectiveObservable& obs,
                                 const ansatz::StateVector& psi,
                                 const measurement::PointerConfig& cfg,
                                 std::uint64_t n_shots_total, std::size_t repetitions,
                                 std::uint64_t seed);

// One matrix of the Pauli-count sweep.
struct VarianceRow {
    std::size_t n_pauli_terms = 0;
    std::size_t matrix_index = 0;
    double sigma_rel_mta = 0.0;
    double sigma_rel_vqls = 0.0;
    std::size_t repetitions = 0;
    std::uint64_t shot_budget = 0;
};

struct VarianceReport {
    std::vector<VarianceRow> rows;
    std::vector<std::size_t> pauli_counts;
    std::vector<double> median_sigma_mta;
    std::vector<double> median_sigma_vqls;
    double spearman_vqls_medians = 0.0;
    double spearman_mta_medians = 0.0;
    double spearman_mta_all = 0.0; // over every (T, matrix) pair
    std::size_t repetitions = 0;
    std::uint64_t shot_budget = 0;
};

// Sweep over Pauli-term counts: per count, `matrices` random instances are
// drawn (resampled until invertible), probed with a state of fixed overlap
// 1/2 with the solution eigenvector, and both estimators run on the same
// budget.
VarianceReport variance_comparison(std::size_t n_qubits, const std::vector<std::size_t>& counts,
                                   std::size_t matrices, std::size_t repetitions,
                                   std::uint64_t n_shots_total, std::uint64_t seed);

} // namespace mta::vqls
