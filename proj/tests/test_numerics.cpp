#include <doctest.h>

#include <cmath>
#include <random>

#include "lfsim/error.hpp"
#include "lfsim/numerics.hpp"
#include "oracles.hpp"

using namespace lfsim;

TEST_CASE("bessel_j0 at the origin and the first zero") {
    CHECK(bessel_j0(0.0) == 1.0);
    CHECK(std::abs(bessel_j0(2.404825557695773)) <= 1e-9);
    CHECK(std::abs(bessel_j0(1.0) - 0.7651976866) <= 1e-9);
    CHECK(std::abs(bessel_j0(1.0) - oracle::j0_series(1.0)) <= 1e-12);
}

TEST_CASE("bessel_j0 first zero located by bisection on the series") {
    double lo = 2.0, hi = 3.0;
    for (int i = 0; i < 80; ++i) {
        const double mid = 0.5 * (lo + hi);
        (oracle::j0_series(lo) * oracle::j0_series(mid) <= 0.0 ? hi : lo) = mid;
    }
    CHECK(std::abs(bessel_j0(0.5 * (lo + hi))) <= 1e-9);
}

TEST_CASE("bessel_j0 matches the standard library over a wide range") {
    double worst = 0.0;
    for (double x = -60.0; x <= 60.0; x += 0.01) worst = std::max(worst, std::abs(bessel_j0(x) - std::cyl_bessel_j(0.0, std::abs(x))));
    CHECK(worst <= 1e-10);
    for (double x = 0.0; x <= 10.0; x += 0.25) CHECK(std::abs(bessel_j0(x) - oracle::j0_series(x)) <= 1e-10);
}

TEST_CASE("eig_symmetric on small matrices") {
    auto e = eig_symmetric(RealMatrix::identity(2));
    CHECK(e.values[0] == doctest::Approx(1.0));
    CHECK(e.values[1] == doctest::Approx(1.0));

    e = eig_symmetric(RealMatrix(2, 2, {0, 1, 1, 0}));
    CHECK(e.values[0] == doctest::Approx(1.0));
    CHECK(e.values[1] == doctest::Approx(-1.0));

    const RealMatrix p(2, 2, {0.9, 0.1, 0.1, 0.9});
    e = eig_symmetric(p * p.transpose());
    CHECK(e.values[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(e.values[1] == doctest::Approx(0.64).epsilon(1e-12));
    // Characteristic polynomial of [[0.82, 0.18], [0.18, 0.82]]: roots 0.82 +- 0.18.
    CHECK(e.values[1] == doctest::Approx(0.82 - 0.18).epsilon(1e-12));
}

TEST_CASE("eig_symmetric agrees with Eigen on random matrices") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 2 + trial % 7;
        RealMatrix m(n, n);
        Eigen::MatrixXd ref(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j <= i; ++j) {
                const double v = u(rng);
                m(i, j) = m(j, i) = v;
                ref(i, j) = ref(j, i) = v;
            }
        const auto e = eig_symmetric(m);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(ref);
        for (std::size_t k = 0; k < n; ++k) CHECK(e.values[k] == doctest::Approx(es.eigenvalues()(n - 1 - k)).epsilon(1e-10));
        for (std::size_t k = 1; k < n; ++k) CHECK(e.values[k - 1] >= e.values[k]);
    }
}

TEST_CASE("eig_symmetric rejects asymmetric input") {
    CHECK_THROWS_AS(eig_symmetric(RealMatrix(2, 2, {1, 0.5, 0.0, 1})), Error);
}

TEST_CASE("logdet_i_plus_hermitian") {
    CHECK(logdet_i_plus_hermitian(ComplexMatrix(3, 3)) == 0.0);
    ComplexMatrix d(2, 2);
    d(0, 0) = 1.0;
    d(1, 1) = 3.0;
    CHECK(logdet_i_plus_hermitian(d) == doctest::Approx(3.0).epsilon(1e-14));

    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        const ComplexMatrix b = oracle::random_gaussian(3, 3, rng);
        const ComplexMatrix a = b * b.adjoint();
        CHECK(std::abs(logdet_i_plus_hermitian(a) - oracle::logdet_eig(oracle::to_eigen(a))) <= 1e-9);
    }
}

TEST_CASE("logdet_i_plus_hermitian rejects non-Hermitian and indefinite input") {
    ComplexMatrix a(2, 2);
    a(0, 1) = 1.0;
    CHECK_THROWS_AS(logdet_i_plus_hermitian(a), Error);
    ComplexMatrix neg(1, 1);
    neg(0, 0) = -2.0;
    CHECK_THROWS_AS(logdet_i_plus_hermitian(neg), Error);
}

TEST_CASE("cholesky and solve_lower reproduce Eigen's solve") {
    std::mt19937_64 rng(9);
    const ComplexMatrix b = oracle::random_gaussian(4, 4, rng);
    const ComplexMatrix a = b * b.adjoint() + ComplexMatrix::identity(4);
    ComplexMatrix l;
    REQUIRE(cholesky(a, l));
    const ComplexMatrix back = l * l.adjoint();
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) CHECK(std::abs(back(i, j) - a(i, j)) <= 1e-12);

    ComplexMatrix x = oracle::random_gaussian(4, 2, rng);
    const oracle::CMat rhs = oracle::to_eigen(x);
    solve_lower(l, x);
    const oracle::CMat ref = oracle::to_eigen(l).triangularView<Eigen::Lower>().solve(rhs);
    CHECK((oracle::to_eigen(x) - ref).norm() <= 1e-12);

    ComplexMatrix bad(1, 1);
    bad(0, 0) = -1.0;
    CHECK_FALSE(cholesky(bad, l));
}

TEST_CASE("matrix products and adjoint") {
    std::mt19937_64 rng(11);
    const ComplexMatrix a = oracle::random_gaussian(3, 2, rng);
    const ComplexMatrix b = oracle::random_gaussian(2, 4, rng);
    CHECK((oracle::to_eigen(a * b) - oracle::to_eigen(a) * oracle::to_eigen(b)).norm() <= 1e-12);
    CHECK((oracle::to_eigen(a.adjoint()) - oracle::to_eigen(a).adjoint()).norm() == 0.0);
    CHECK(a.frobenius_norm() == doctest::Approx(oracle::to_eigen(a).norm()).epsilon(1e-14));
    CHECK_THROWS_AS(a * a, Error);
}
