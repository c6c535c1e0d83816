#pragma once

// Independent reference implementations used only by the tests.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <random>

#include "lfsim/numerics.hpp"

namespace oracle {

using CMat = Eigen::MatrixXcd;

inline CMat to_eigen(const lfsim::ComplexMatrix& m) {
    CMat out(m.rows(), m.cols());
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c) out(r, c) = m(r, c);
    return out;
}

inline lfsim::ComplexMatrix from_eigen(const CMat& m) {
    lfsim::ComplexMatrix out(m.rows(), m.cols());
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c) out(r, c) = m(r, c);
    return out;
}

/// log2 det(I + A) from the eigenvalues of Hermitian A.
inline double logdet_eig(const CMat& a) {
    Eigen::SelfAdjointEigenSolver<CMat> es(a);
    double s = 0.0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) s += std::log2(1.0 + es.eigenvalues()(i));
    return s;
}

inline lfsim::ComplexMatrix random_gaussian(std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
    std::normal_distribution<double> n(0.0, std::sqrt(0.5));
    lfsim::ComplexMatrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) m(r, c) = {n(rng), n(rng)};
    return m;
}

/// Truncated power series of J0, summed in long double.
inline double j0_series(double x) {
    long double term = 1.0L, sum = 1.0L;
    const long double q = -(long double)x * x / 4.0L;
    for (int k = 1; k < 200; ++k) {
        term *= q / ((long double)k * k);
        sum += term;
        if (std::fabs((double)term) < 1e-30) break;
    }
    return (double)sum;
}

}  // namespace oracle
