#pragma once

#include "mta/complex_matrix.hpp"

#include <vector>

namespace mta::linalg {

// Eigensystem of a Hermitian matrix. Eigenvalues ascending; eigenvector i is
// column i of `eigenvectors`. Each column's global phase is fixed so that its
// largest-magnitude component is real and positive; equal eigenvalues are
// ordered by lexicographic comparison of the phase-fixed columns.
struct SpectralDecomposition {
    std::vector<double> eigenvalues;
    ComplexMatrix eigenvectors;

    CVector eigenvector(std::size_t i) const { return eigenvectors.column(i); }
};

// Cyclic Jacobi diagonalization. Deterministic for a fixed input.
// Throws InvalidInputError for non-square or non-Hermitian (1e-12 abs) input.
SpectralDecomposition hermitian_eig(const ComplexMatrix& a);

// Singular values in descending order (via the eigenvalues of m^H m).
std::vector<double> singular_values(const ComplexMatrix& m);

// kappa = sigma_max / sigma_min. Throws SingularMatrixError when
// sigma_min < 1e-13 * sigma_max.
double condition_number(const ComplexMatrix& m);

// exp(2*pi*i*a) for Hermitian a, computed through the spectral decomposition.
ComplexMatrix unitary_exp(const ComplexMatrix& a);

// exp(x) for a general square complex matrix by Pade approximation with
// scaling and squaring. Alternative route cross-checked against unitary_exp.
ComplexMatrix matrix_exp_pade(const ComplexMatrix& x);

// Gaussian elimination with partial pivoting; complex right-hand side.
CVector lu_solve(const ComplexMatrix& a, const CVector& b);

// Direct solve of M x = b for a real-valued system; oracle for the
// variational pipeline. Throws SingularMatrixError on vanishing pivots.
std::vector<double> classical_solve(const ComplexMatrix& m, const std::vector<double>& b);

} // namespace mta::linalg
