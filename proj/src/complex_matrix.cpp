#include "mta/complex_matrix.hpp"

#include "mta/errors.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace mta {

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, CVector entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (data_.size() != rows_ * cols_) {
        throw InvalidInputError("matrix entry count does not match rows*cols");
    }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::diagonal(const std::vector<double>& diag) {
    ComplexMatrix m(diag.size(), diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
    return m;
}

ComplexMatrix ComplexMatrix::from_real(std::size_t rows, std::size_t cols,
                                       const std::vector<double>& entries) {
    if (entries.size() != rows * cols) {
        throw InvalidInputError("matrix entry count does not match rows*cols");
    }
    ComplexMatrix m(rows, cols);
    for (std::size_t i = 0; i < entries.size(); ++i) m.data_[i] = entries[i];
    return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix m(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) m(j, i) = std::conj((*this)(i, j));
    return m;
}

ComplexMatrix ComplexMatrix::transpose() const {
    ComplexMatrix m(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) m(j, i) = (*this)(i, j);
    return m;
}

bool ComplexMatrix::is_hermitian(double tol) const {
    if (!square()) return false;
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = i; j < cols_; ++j) {
            if (std::abs((*this)(i, j) - std::conj((*this)(j, i))) > tol) return false;
        }
    }
    return true;
}

double ComplexMatrix::frobenius_norm() const {
    double s = 0.0;
    for (const auto& z : data_) s += std::norm(z);
    return std::sqrt(s);
}

double ComplexMatrix::max_abs() const {
    double s = 0.0;
    for (const auto& z : data_) s = std::max(s, std::abs(z));
    return s;
}

double ComplexMatrix::norm_one() const {
    double best = 0.0;
    for (std::size_t j = 0; j < cols_; ++j) {
        double col = 0.0;
        for (std::size_t i = 0; i < rows_; ++i) col += std::abs((*this)(i, j));
        best = std::max(best, col);
    }
    return best;
}

CVector ComplexMatrix::column(std::size_t j) const {
    CVector v(rows_);
    for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
    return v;
}

void ComplexMatrix::set_column(std::size_t j, const CVector& v) {
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
}

static void check_same_shape(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw InvalidInputError("matrix shape mismatch");
    }
}

ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b) {
    check_same_shape(a, b);
    ComplexMatrix r(a.rows(), a.cols());
    for (std::size_t i = 0; i < r.data().size(); ++i) r.data()[i] = a.data()[i] + b.data()[i];
    return r;
}

ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b) {
    check_same_shape(a, b);
    ComplexMatrix r(a.rows(), a.cols());
    for (std::size_t i = 0; i < r.data().size(); ++i) r.data()[i] = a.data()[i] - b.data()[i];
    return r;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols() != b.rows()) throw InvalidInputError("matrix product shape mismatch");
    ComplexMatrix r(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const Complex aik = a(i, k);
            if (aik == Complex(0.0, 0.0)) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) r(i, j) += aik * b(k, j);
        }
    }
    return r;
}

ComplexMatrix operator*(Complex s, const ComplexMatrix& a) {
    ComplexMatrix r(a.rows(), a.cols());
    for (std::size_t i = 0; i < r.data().size(); ++i) r.data()[i] = s * a.data()[i];
    return r;
}

ComplexMatrix operator*(double s, const ComplexMatrix& a) { return Complex(s, 0.0) * a; }

CVector operator*(const ComplexMatrix& a, const CVector& v) {
    if (a.cols() != v.size()) throw InvalidInputError("matrix-vector shape mismatch");
    CVector r(a.rows(), Complex(0.0, 0.0));
    for (std::size_t i = 0; i < a.rows(); ++i) {
        Complex acc(0.0, 0.0);
        for (std::size_t j = 0; j < a.cols(); ++j) acc += a(i, j) * v[j];
        r[i] = acc;
    }
    return r;
}

Complex inner(const CVector& a, const CVector& b) {
    if (a.size() != b.size()) throw InvalidInputError("inner product length mismatch");
    Complex acc(0.0, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) acc += std::conj(a[i]) * b[i];
    return acc;
}

double norm2(const CVector& v) {
    double s = 0.0;
    for (const auto& z : v) s += std::norm(z);
    return std::sqrt(s);
}

CVector normalized(const CVector& v) {
    const double n = norm2(v);
    if (n == 0.0) throw InvalidInputError("cannot normalize zero vector");
    CVector r(v);
    for (auto& z : r) z /= n;
    return r;
}

CVector to_complex(const std::vector<double>& v) {
    CVector r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) r[i] = v[i];
    return r;
}

std::vector<double> real_parts(const CVector& v) {
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) r[i] = v[i].real();
    return r;
}

ComplexMatrix outer(const CVector& u, const CVector& v) {
    ComplexMatrix r(u.size(), v.size());
    for (std::size_t i = 0; i < u.size(); ++i)
        for (std::size_t j = 0; j < v.size(); ++j) r(i, j) = u[i] * std::conj(v[j]);
    return r;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix r(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t ia = 0; ia < a.rows(); ++ia)
        for (std::size_t ja = 0; ja < a.cols(); ++ja) {
            const Complex f = a(ia, ja);
            if (f == Complex(0.0, 0.0)) continue;
            for (std::size_t ib = 0; ib < b.rows(); ++ib)
                for (std::size_t jb = 0; jb < b.cols(); ++jb)
                    r(ia * b.rows() + ib, ja * b.cols() + jb) = f * b(ib, jb);
        }
    return r;
}

} // namespace mta
