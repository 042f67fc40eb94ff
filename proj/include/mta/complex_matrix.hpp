#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace mta {

using Complex = std::complex<double>;
using CVector = std::vector<Complex>;

// Dense row-major complex matrix. Values are immutable by convention once a
// matrix leaves its constructing function; all operations below are pure.
class ComplexMatrix {
  public:
    ComplexMatrix() = default;
    ComplexMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, Complex(0.0, 0.0)) {}
    ComplexMatrix(std::size_t rows, std::size_t cols, CVector entries);

    static ComplexMatrix identity(std::size_t n);
    static ComplexMatrix diagonal(const std::vector<double>& diag);
    static ComplexMatrix from_real(std::size_t rows, std::size_t cols,
                                   const std::vector<double>& entries);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool square() const { return rows_ == cols_ && rows_ > 0; }

    Complex& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Complex& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    const CVector& data() const { return data_; }
    CVector& data() { return data_; }

    ComplexMatrix adjoint() const;
    ComplexMatrix transpose() const;

    bool is_hermitian(double tol = 1e-12) const;
    double frobenius_norm() const;
    double max_abs() const;
    // Maximum column absolute sum.
    double norm_one() const;

    CVector column(std::size_t j) const;
    void set_column(std::size_t j, const CVector& v);

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    CVector data_;
};

ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(Complex s, const ComplexMatrix& a);
ComplexMatrix operator*(double s, const ComplexMatrix& a);

CVector operator*(const ComplexMatrix& a, const CVector& v);

// Inner product <a|b> = sum conj(a_i) b_i.
Complex inner(const CVector& a, const CVector& b);
double norm2(const CVector& v);
CVector normalized(const CVector& v);
CVector to_complex(const std::vector<double>& v);
std::vector<double> real_parts(const CVector& v);

// Outer product |u><v|.
ComplexMatrix outer(const CVector& u, const CVector& v);

// Kronecker product, a on the high-order bits.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

} // namespace mta
