#pragma once

#include "mta/complex_matrix.hpp"
#include "mta/linalg.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace mta::problem {

// Real linear system M x = b with L = 2^n so the normalized solution fits an
// n-qubit register.
struct LinearSystem {
    ComplexMatrix m;       // L x L, real entries
    std::vector<double> b; // length L
    double b_norm = 0.0;
    double kappa = 0.0;
    std::size_t n_qubits = 0;
    std::optional<std::uint64_t> seed; // set when generated

    std::size_t dimension() const { return b.size(); }
};

// Construct a LinearSystem from raw data; computes norms, condition number
// and qubit count. Throws InvalidInputError unless the dimension is a power
// of two and shapes agree; SingularMatrixError if M is singular.
LinearSystem make_system(const ComplexMatrix& m, const std::vector<double>& b);

// Hermitian PSD observable whose one-dimensional null space carries the
// normalized solution. `a` and `spectrum` refer to the rescaled operator
// whose largest eigenvalue is 1 - 2^-m; the rescaling is equivalent to
// M -> M / scale_factor.
struct ObjectiveObservable {
    ComplexMatrix a;
    linalg::SpectralDecomposition spectrum;
    double scale_factor = 1.0;
    double lambda1 = 0.0; // second-smallest eigenvalue after rescaling

    std::size_t dimension() const { return a.rows(); }
    double lambda_max() const { return spectrum.eigenvalues.back(); }
    CVector null_vector() const { return spectrum.eigenvector(0); }
};

// A = M^H (I - |b><b|) M from the normalized b, rescaled so that
// lambda_max = 1 - 2^-m_qubits (eigenvalue 1 would alias to pointer 0 under
// the modular binary-fraction encoding).
ObjectiveObservable build_objective(const LinearSystem& system, std::size_t m_qubits);

// Same construction for a bare matrix/right-hand-side pair; accepts any
// square complex matrix (the system wrapper is restricted to real entries).
ObjectiveObservable build_objective(const ComplexMatrix& m, const std::vector<double>& b,
                                    std::size_t m_qubits);

// Wrap an arbitrary Hermitian matrix as an observable without rescaling.
// Diagnostic/test constructor; scale_factor is 1.
ObjectiveObservable observable_from_hermitian(const ComplexMatrix& a);

// Output-register size needed to resolve the second-smallest eigenvalue:
// ceil(2*log2(kappa)) + guard, clamped to at least 1.
std::size_t required_pointer_qubits(double kappa, std::size_t guard = 2);

struct SolutionRecord {
    CVector y;                     // converged ansatz state (unit)
    Complex z;                     // ||b|| / <b_hat| M |y>
    std::vector<double> x;         // recovered solution of M x = b
    double relative_residual = 0.0;// ||M x - b|| / ||b||
    double dropped_imag_norm = 0.0;// magnitude of discarded imaginary parts
};

// Reconstruct x = z*y from a converged state using the ORIGINAL (unscaled)
// system matrix. Invariant under a global phase on y. Throws
// NonConvergenceError when |<b_hat|M y>| <= 1e-12.
SolutionRecord reconstruct_solution(const CVector& y, const LinearSystem& system);

// Seeded random instance: entries i.i.d. uniform on [-1,1], symmetrized as
// (M + M^T)/2, resampled until nonsingular with kappa <= kappa_max; b uniform
// on [-1,1] with ||b|| >= 1e-6. Deterministic per (n_qubits, seed, kappa_max).
LinearSystem random_instance(std::size_t n_qubits, std::uint64_t seed, double kappa_max = 100.0);

// Seeded random symmetric instance whose condition number is remapped to the
// exact value `kappa` (eigenvalue magnitudes rescaled onto [1, kappa],
// signs preserved).
LinearSystem random_instance_with_kappa(std::size_t n_qubits, std::uint64_t seed, double kappa);

} // namespace mta::problem
