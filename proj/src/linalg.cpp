#include "mta/linalg.hpp"

#include "mta/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace mta::linalg {

namespace {

double off_diagonal_norm(const ComplexMatrix& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (i != j) s += std::norm(a(i, j));
    return std::sqrt(s);
}

// Fix the global phase of v: largest-magnitude component becomes real and
// positive (first such index wins ties), then renormalize.
void fix_phase(CVector& v) {
    std::size_t best = 0;
    double best_mag = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double m = std::abs(v[i]);
        if (m > best_mag + 1e-15) {
            best_mag = m;
            best = i;
        }
    }
    if (best_mag == 0.0) return;
    const Complex phase = std::conj(v[best]) / best_mag;
    for (auto& z : v) z *= phase;
    const double n = norm2(v);
    for (auto& z : v) z /= n;
}

bool column_lex_less(const CVector& a, const CVector& b) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].real() != b[i].real()) return a[i].real() < b[i].real();
        if (a[i].imag() != b[i].imag()) return a[i].imag() < b[i].imag();
    }
    return false;
}

} // namespace

SpectralDecomposition hermitian_eig(const ComplexMatrix& input) {
    if (!input.square()) throw InvalidInputError("hermitian_eig: matrix must be square");
    if (!input.is_hermitian(1e-12)) throw InvalidInputError("hermitian_eig: matrix must be Hermitian");

    const std::size_t n = input.rows();
    ComplexMatrix a = input;
    ComplexMatrix v = ComplexMatrix::identity(n);
    const double scale = std::max(a.frobenius_norm(), 1e-300);
    const double target = scale * 1e-14;
    const double skip = scale * 1e-18;

    constexpr int kMaxSweeps = 100;
    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        if (off_diagonal_norm(a) <= target) break;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const Complex apq = a(p, q);
                const double mag = std::abs(apq);
                if (mag <= skip) {
                    a(p, q) = 0.0;
                    a(q, p) = 0.0;
                    continue;
                }
                const Complex phase = apq / mag; // e^{i arg(apq)}
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double tau = (aqq - app) / (2.0 * mag);
                double t;
                if (tau >= 0.0)
                    t = 1.0 / (tau + std::sqrt(1.0 + tau * tau));
                else
                    t = -1.0 / (-tau + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                // Unitary G on the (p,q) plane: col_p' = c*col_p - s*conj(phase)*col_q,
                // col_q' = s*col_p + c*conj(phase)*col_q, applied as G^H A G.
                const Complex sp = s * std::conj(phase);
                for (std::size_t i = 0; i < n; ++i) {
                    if (i == p || i == q) continue;
                    const Complex aip = a(i, p);
                    const Complex aiq = a(i, q);
                    a(i, p) = c * aip - sp * aiq;
                    a(i, q) = s * aip + c * std::conj(phase) * aiq;
                    a(p, i) = std::conj(a(i, p));
                    a(q, i) = std::conj(a(i, q));
                }
                a(p, p) = app - t * mag;
                a(q, q) = aqq + t * mag;
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                for (std::size_t i = 0; i < n; ++i) {
                    const Complex vip = v(i, p);
                    const Complex viq = v(i, q);
                    v(i, p) = c * vip - sp * viq;
                    v(i, q) = s * vip + c * std::conj(phase) * viq;
                }
            }
        }
    }

    std::vector<double> eigenvalues(n);
    std::vector<CVector> columns(n);
    for (std::size_t j = 0; j < n; ++j) {
        eigenvalues[j] = a(j, j).real();
        columns[j] = v.column(j);
        fix_phase(columns[j]);
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        if (eigenvalues[x] != eigenvalues[y]) return eigenvalues[x] < eigenvalues[y];
        return column_lex_less(columns[x], columns[y]);
    });

    SpectralDecomposition out;
    out.eigenvalues.resize(n);
    out.eigenvectors = ComplexMatrix(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        out.eigenvalues[j] = eigenvalues[order[j]];
        out.eigenvectors.set_column(j, columns[order[j]]);
    }
    return out;
}

std::vector<double> singular_values(const ComplexMatrix& m) {
    if (!m.square()) throw InvalidInputError("singular_values: matrix must be square");
    const ComplexMatrix gram = m.adjoint() * m;
    const SpectralDecomposition eig = hermitian_eig(gram);
    std::vector<double> sigma(eig.eigenvalues.size());
    for (std::size_t i = 0; i < sigma.size(); ++i)
        sigma[i] = std::sqrt(std::max(0.0, eig.eigenvalues[sigma.size() - 1 - i]));
    return sigma;
}

double condition_number(const ComplexMatrix& m) {
    const std::vector<double> sigma = singular_values(m);
    const double smax = sigma.front();
    const double smin = sigma.back();
    if (smin < 1e-13 * smax || smax == 0.0) {
        throw SingularMatrixError("condition_number: matrix is numerically singular");
    }
    return smax / smin;
}

ComplexMatrix unitary_exp(const ComplexMatrix& a) {
    if (!a.square()) throw InvalidInputError("unitary_exp: matrix must be square");
    if (!a.is_hermitian(1e-12)) throw InvalidInputError("unitary_exp: matrix must be Hermitian");
    const SpectralDecomposition eig = hermitian_eig(a);
    const std::size_t n = a.rows();
    ComplexMatrix u(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        const double theta = 2.0 * std::numbers::pi * eig.eigenvalues[k];
        const Complex w(std::cos(theta), std::sin(theta));
        const CVector vk = eig.eigenvector(k);
        for (std::size_t i = 0; i < n; ++i) {
            const Complex wi = w * vk[i];
            for (std::size_t j = 0; j < n; ++j) u(i, j) += wi * std::conj(vk[j]);
        }
    }
    return u;
}

namespace {

ComplexMatrix lu_solve_matrix(const ComplexMatrix& a, const ComplexMatrix& b) {
    const std::size_t n = a.rows();
    ComplexMatrix lhs = a;
    ComplexMatrix rhs = b;
    const double scale = std::max(lhs.max_abs(), 1e-300);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        double best = std::abs(lhs(col, col));
        for (std::size_t i = col + 1; i < n; ++i) {
            const double m = std::abs(lhs(i, col));
            if (m > best) {
                best = m;
                pivot = i;
            }
        }
        if (best < 1e-13 * scale) throw SingularMatrixError("lu_solve: vanishing pivot");
        if (pivot != col) {
            for (std::size_t j = 0; j < n; ++j) std::swap(lhs(col, j), lhs(pivot, j));
            for (std::size_t j = 0; j < rhs.cols(); ++j) std::swap(rhs(col, j), rhs(pivot, j));
        }
        const Complex inv = 1.0 / lhs(col, col);
        for (std::size_t i = col + 1; i < n; ++i) {
            const Complex f = lhs(i, col) * inv;
            if (f == Complex(0.0, 0.0)) continue;
            lhs(i, col) = 0.0;
            for (std::size_t j = col + 1; j < n; ++j) lhs(i, j) -= f * lhs(col, j);
            for (std::size_t j = 0; j < rhs.cols(); ++j) rhs(i, j) -= f * rhs(col, j);
        }
    }
    for (std::size_t col = n; col-- > 0;) {
        const Complex inv = 1.0 / lhs(col, col);
        for (std::size_t j = 0; j < rhs.cols(); ++j) {
            Complex acc = rhs(col, j);
            for (std::size_t k = col + 1; k < n; ++k) acc -= lhs(col, k) * rhs(k, j);
            rhs(col, j) = acc * inv;
        }
    }
    return rhs;
}

} // namespace

ComplexMatrix matrix_exp_pade(const ComplexMatrix& x) {
    if (!x.square()) throw InvalidInputError("matrix_exp_pade: matrix must be square");
    // Degree-13 Pade with scaling and squaring; standard coefficient set.
    static const double b[] = {64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
                               1187353796428800.0,  129060195264000.0,   10559470521600.0,
                               670442572800.0,      33522128640.0,       1323241920.0,
                               40840800.0,          960960.0,            16380.0,
                               182.0,               1.0};
    constexpr double kTheta13 = 5.371920351148152;

    const std::size_t n = x.rows();
    int squarings = 0;
    const double nrm = x.norm_one();
    if (nrm > kTheta13) {
        squarings = static_cast<int>(std::ceil(std::log2(nrm / kTheta13)));
    }
    ComplexMatrix a = (1.0 / std::ldexp(1.0, squarings)) * x;

    const ComplexMatrix eye = ComplexMatrix::identity(n);
    const ComplexMatrix a2 = a * a;
    const ComplexMatrix a4 = a2 * a2;
    const ComplexMatrix a6 = a4 * a2;

    ComplexMatrix u = a * (a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 + b[5] * a4 +
                           b[3] * a2 + b[1] * eye);
    ComplexMatrix v =
        a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * eye;

    ComplexMatrix r = lu_solve_matrix(v - u, v + u);
    for (int i = 0; i < squarings; ++i) r = r * r;
    return r;
}

CVector lu_solve(const ComplexMatrix& a, const CVector& b) {
    if (!a.square() || a.rows() != b.size()) throw InvalidInputError("lu_solve: shape mismatch");
    ComplexMatrix rhs(b.size(), 1);
    for (std::size_t i = 0; i < b.size(); ++i) rhs(i, 0) = b[i];
    const ComplexMatrix sol = lu_solve_matrix(a, rhs);
    return sol.column(0);
}

std::vector<double> classical_solve(const ComplexMatrix& m, const std::vector<double>& b) {
    if (!m.square() || m.rows() != b.size())
        throw InvalidInputError("classical_solve: shape mismatch");
    const CVector x = lu_solve(m, to_complex(b));
    return real_parts(x);
}

} // namespace mta::linalg
