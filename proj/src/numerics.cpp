#include "lfsim/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "lfsim/error.hpp"

namespace lfsim {

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cdouble> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
    require(data_.size() == rows * cols, "matrix entry count does not match its shape");
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::column(std::span<const cdouble> v) {
    return ComplexMatrix(v.size(), 1, std::vector<cdouble>(v.begin(), v.end()));
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix out(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) out(c, r) = std::conj((*this)(r, c));
    return out;
}

ComplexMatrix ComplexMatrix::col(std::size_t c) const {
    ComplexMatrix out(rows_, 1);
    for (std::size_t r = 0; r < rows_; ++r) out(r, 0) = (*this)(r, c);
    return out;
}

double ComplexMatrix::frobenius_norm() const { return std::sqrt(norm2_squared(data_)); }

bool ComplexMatrix::all_finite() const {
    return std::all_of(data_.begin(), data_.end(),
                       [](cdouble z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

ComplexMatrix& ComplexMatrix::operator*=(cdouble s) {
    for (auto& z : data_) z *= s;
    return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    require(a.cols() == b.rows(), "matrix product shape mismatch");
    ComplexMatrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const cdouble aik = a(i, k);
            for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
        }
    return out;
}

ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b) {
    require(a.rows() == b.rows() && a.cols() == b.cols(), "matrix sum shape mismatch");
    ComplexMatrix out = a;
    auto d = out.data();
    auto s = b.data();
    for (std::size_t i = 0; i < d.size(); ++i) d[i] += s[i];
    return out;
}

ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b) {
    return a + cdouble(-1.0) * b;
}

ComplexMatrix operator*(cdouble s, ComplexMatrix m) {
    m *= s;
    return m;
}

cdouble inner(std::span<const cdouble> a, std::span<const cdouble> b) {
    cdouble acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += std::conj(a[i]) * b[i];
    return acc;
}

double norm2_squared(std::span<const cdouble> v) {
    double acc = 0.0;
    for (const auto& z : v) acc += std::norm(z);
    return acc;
}

RealMatrix::RealMatrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

RealMatrix::RealMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
    require(data_.size() == rows * cols, "matrix entry count does not match its shape");
}

RealMatrix RealMatrix::identity(std::size_t n) {
    RealMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

RealMatrix RealMatrix::transpose() const {
    RealMatrix out(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) out(c, r) = (*this)(r, c);
    return out;
}

double RealMatrix::frobenius_norm() const {
    return std::sqrt(std::inner_product(data_.begin(), data_.end(), data_.begin(), 0.0));
}

RealMatrix operator*(const RealMatrix& a, const RealMatrix& b) {
    require(a.cols() == b.rows(), "matrix product shape mismatch");
    RealMatrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
        }
    return out;
}

namespace {

constexpr double kSeriesLimit = 12.0;

double j0_series(double x) {
    const double q = -0.25 * x * x;
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 200; ++k) {
        term *= q / (double(k) * double(k));
        sum += term;
        if (std::abs(term) < 1e-18 * std::max(1.0, std::abs(sum))) break;
    }
    return sum;
}

// Hankel expansion J0(x) = sqrt(2/(pi x)) (P cos chi - Q sin chi), chi = x - pi/4,
// truncated at the smallest term.
double j0_asymptotic(double x) {
    const double z8 = 8.0 * x;
    double p = 1.0;
    double q = 0.0;
    double term = 1.0;
    double last = 1.0;
    for (int m = 1; m < 200; ++m) {
        const double odd = 2.0 * m - 1.0;
        term *= -(odd * odd) / (double(m) * z8);
        if (std::abs(term) >= last) break;
        last = std::abs(term);
        // m even contributes to P with sign (-1)^(m/2), odd to Q with (-1)^((m-1)/2)
        switch (m % 4) {
            case 0: p += term; break;
            case 1: q += term; break;
            case 2: p -= term; break;
            case 3: q -= term; break;
        }
        if (last < 1e-18) break;
    }
    const double chi = x - 0.25 * std::numbers::pi;
    return std::sqrt(2.0 / (std::numbers::pi * x)) * (p * std::cos(chi) - q * std::sin(chi));
}

}  // namespace

double bessel_j0(double x) {
    if (!std::isfinite(x)) fail(ErrorKind::InvalidArgument, "bessel_j0: non-finite argument");
    x = std::abs(x);
    return x <= kSeriesLimit ? j0_series(x) : j0_asymptotic(x);
}

SymmetricEigen eig_symmetric(const RealMatrix& m) {
    require(m.rows() == m.cols() && m.rows() > 0, "eig_symmetric: matrix must be square");
    const std::size_t n = m.rows();
    const double scale = std::max(1.0, m.frobenius_norm());
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (std::abs(m(i, j) - m(j, i)) > 1e-12 * scale)
                fail(ErrorKind::InvalidArgument, "eig_symmetric: matrix is not symmetric");

    RealMatrix a = m;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) a(i, j) = a(j, i) = 0.5 * (m(i, j) + m(j, i));
    RealMatrix v = RealMatrix::identity(n);

    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
        if (std::sqrt(off) <= 1e-16 * scale) break;

        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a(k, p);
                    const double akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a(p, k);
                    const double aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v(k, p);
                    const double vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return a(i, i) > a(j, j); });

    SymmetricEigen out{std::vector<double>(n), RealMatrix(n, n)};
    for (std::size_t k = 0; k < n; ++k) {
        out.values[k] = a(order[k], order[k]);
        for (std::size_t r = 0; r < n; ++r) out.vectors(r, k) = v(r, order[k]);
    }
    return out;
}

bool cholesky(const ComplexMatrix& a, ComplexMatrix& lower) {
    const std::size_t n = a.rows();
    lower = ComplexMatrix(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        double d = a(j, j).real();
        for (std::size_t k = 0; k < j; ++k) d -= std::norm(lower(j, k));
        if (!(d > 0.0)) return false;
        const double ljj = std::sqrt(d);
        lower(j, j) = ljj;
        for (std::size_t i = j + 1; i < n; ++i) {
            cdouble s = a(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= lower(i, k) * std::conj(lower(j, k));
            lower(i, j) = s / ljj;
        }
    }
    return true;
}

void solve_lower(const ComplexMatrix& lower, ComplexMatrix& b) {
    const std::size_t n = lower.rows();
    require(b.rows() == n, "solve_lower: shape mismatch");
    for (std::size_t c = 0; c < b.cols(); ++c)
        for (std::size_t i = 0; i < n; ++i) {
            cdouble s = b(i, c);
            for (std::size_t k = 0; k < i; ++k) s -= lower(i, k) * b(k, c);
            b(i, c) = s / lower(i, i);
        }
}

double logdet_i_plus_hermitian(const ComplexMatrix& a) {
    require(a.rows() == a.cols() && a.rows() > 0, "logdet: matrix must be square");
    const std::size_t n = a.rows();
    const double scale = std::max(1.0, a.frobenius_norm());
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j)
            if (std::abs(a(i, j) - std::conj(a(j, i))) > 1e-10 * scale)
                fail(ErrorKind::InvalidArgument, "logdet: matrix is not Hermitian");

    ComplexMatrix shifted = a;
    for (std::size_t i = 0; i < n; ++i) shifted(i, i) += 1e-10 * scale;
    ComplexMatrix lower;
    if (!cholesky(shifted, lower)) fail(ErrorKind::InvalidArgument, "logdet: matrix is indefinite");

    ComplexMatrix ipa = a;
    for (std::size_t i = 0; i < n; ++i) ipa(i, i) += 1.0;
    if (!cholesky(ipa, lower)) fail(ErrorKind::InvalidArgument, "logdet: I + A is not positive definite");
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += std::log2(lower(i, i).real());
    return 2.0 * acc;
}

}  // namespace lfsim
