#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace lfsim {

using cdouble = std::complex<double>;

/// Dense complex matrix, row-major. Vectors are n x 1 matrices.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    ComplexMatrix(std::size_t rows, std::size_t cols);
    ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cdouble> entries);

    static ComplexMatrix identity(std::size_t n);
    static ComplexMatrix column(std::span<const cdouble> v);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool empty() const noexcept { return data_.empty(); }

    cdouble& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const cdouble& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<const cdouble> data() const noexcept { return data_; }
    std::span<cdouble> data() noexcept { return data_; }

    ComplexMatrix adjoint() const;
    ComplexMatrix col(std::size_t c) const;
    double frobenius_norm() const;
    bool all_finite() const;

    ComplexMatrix& operator*=(cdouble s);

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<cdouble> data_;
};

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(cdouble s, ComplexMatrix m);

/// a^H b for equal-length vectors.
cdouble inner(std::span<const cdouble> a, std::span<const cdouble> b);
double norm2_squared(std::span<const cdouble> v);

/// Dense real matrix, row-major.
class RealMatrix {
public:
    RealMatrix() = default;
    RealMatrix(std::size_t rows, std::size_t cols, double fill = 0.0);
    RealMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries);

    static RealMatrix identity(std::size_t n);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<const double> data() const noexcept { return data_; }
    std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

    RealMatrix transpose() const;
    double frobenius_norm() const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

RealMatrix operator*(const RealMatrix& a, const RealMatrix& b);

/// Bessel function of the first kind, order zero. Absolute error below 1e-10
/// for |x| <= 200. Throws on non-finite input.
double bessel_j0(double x);

struct SymmetricEigen {
    std::vector<double> values;  // descending
    RealMatrix vectors;          // column k pairs with values[k]
};

/// Cyclic Jacobi eigensolver for real symmetric matrices. Rejects inputs whose
/// asymmetry exceeds 1e-12 * max(1, ||M||_F).
SymmetricEigen eig_symmetric(const RealMatrix& m);

/// log2 det(I + A) for Hermitian positive semidefinite A, through a Cholesky
/// factorization of I + A. Non-Hermitian (beyond 1e-10 relative) or
/// indefinite input is rejected.
double logdet_i_plus_hermitian(const ComplexMatrix& a);

/// Lower-triangular Cholesky factor of a Hermitian positive definite matrix.
/// Returns false when a non-positive pivot shows up.
bool cholesky(const ComplexMatrix& a, ComplexMatrix& lower);

/// Solves L X = B in place for lower-triangular L.
void solve_lower(const ComplexMatrix& lower, ComplexMatrix& b);

}  // namespace lfsim
