#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <random>

#include "lfsim/error.hpp"
#include "lfsim/markov.hpp"
#include "oracles.hpp"

using namespace lfsim;

namespace {

StochasticMatrix two_state(double q) { return StochasticMatrix(RealMatrix(2, 2, {q, 1 - q, 1 - q, q})); }

StochasticMatrix random_ergodic(std::size_t n, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.05, 1.0);
    RealMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) s += (m(i, j) = u(rng));
        for (std::size_t j = 0; j < n; ++j) m(i, j) /= s;
    }
    return StochasticMatrix(m);
}

Eigen::MatrixXd to_eigen(const RealMatrix& m) {
    Eigen::MatrixXd out(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = m(i, j);
    return out;
}

}  // namespace

TEST_CASE("transition estimates from short sequences") {
    const std::vector<std::size_t> alt{0, 1, 0, 1, 0, 1};
    const StochasticMatrix p = estimate_transition_matrix(alt, 2);
    CHECK(p(0, 0) == 0.0);
    CHECK(p(0, 1) == 1.0);
    CHECK(p(1, 0) == 1.0);
    CHECK(p(1, 1) == 0.0);

    const std::vector<std::size_t> flat{0, 0, 0, 0};
    const StochasticMatrix q = estimate_transition_matrix(flat, 2);
    CHECK(q(0, 0) == 1.0);
    CHECK(q(0, 1) == 0.0);
    CHECK(q(1, 0) == 0.5);
    CHECK(q(1, 1) == 0.5);

    const std::vector<std::size_t> bad{0, 3};
    CHECK_THROWS_AS(estimate_transition_matrix(bad, 2), Error);
}

TEST_CASE("i.i.d. uniform states estimate a uniform matrix") {
    std::mt19937_64 rng(1);
    std::uniform_int_distribution<std::size_t> u(0, 3);
    std::vector<std::size_t> s(1000000);
    for (auto& x : s) x = u(rng);
    const StochasticMatrix p = estimate_transition_matrix(s, 4);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) CHECK(std::abs(p(i, j) - 0.25) <= 0.01);
}

TEST_CASE("transition counts merge by addition") {
    const std::vector<std::size_t> a{0, 1, 1, 2}, b{2, 0, 0};
    TransitionCounts ca(3), cb(3), all(3);
    ca.add_sequence(a);
    cb.add_sequence(b);
    all.add_sequence(a);
    all.add_sequence(b);
    ca.merge(cb);
    CHECK(ca.total() == all.total());
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) CHECK(ca.count(i, j) == all.count(i, j));
    TransitionCounts other(4);
    CHECK_THROWS_AS(ca.merge(other), Error);
}

TEST_CASE("stationary distribution") {
    const auto uni = stationary_distribution(StochasticMatrix::uniform(5));
    for (double x : uni) CHECK(x == doctest::Approx(0.2).epsilon(1e-12));

    const auto swap = stationary_distribution(StochasticMatrix(RealMatrix(2, 2, {0, 1, 1, 0})));
    CHECK(swap[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(swap[1] == doctest::Approx(0.5).epsilon(1e-12));

    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 10; ++trial) {
        const StochasticMatrix p = random_ergodic(4, rng);
        const auto pi = stationary_distribution(p);
        double residual = 0.0;
        for (std::size_t j = 0; j < 4; ++j) {
            double s = 0.0;
            for (std::size_t i = 0; i < 4; ++i) s += pi[i] * p(i, j);
            residual = std::max(residual, std::abs(s - pi[j]));
        }
        CHECK(residual <= 1e-9);
        // Left Perron vector from Eigen as the reference.
        Eigen::EigenSolver<Eigen::MatrixXd> es(to_eigen(p.matrix()).transpose());
        Eigen::Index top = 0;
        es.eigenvalues().real().maxCoeff(&top);
        Eigen::VectorXd v = es.eigenvectors().col(top).real();
        v /= v.sum();
        for (std::size_t j = 0; j < 4; ++j) CHECK(pi[j] == doctest::Approx(v(j)).epsilon(1e-9));
    }
}

TEST_CASE("reducible chains are rejected") {
    const StochasticMatrix id(RealMatrix::identity(2));
    CHECK_FALSE(is_irreducible(id));
    CHECK(is_irreducible(StochasticMatrix(RealMatrix(2, 2, {0, 1, 1, 0}))));
    CHECK_THROWS_AS(stationary_distribution(id), Error);
}

TEST_CASE("matrix power") {
    const StochasticMatrix p = two_state(0.9);
    const StochasticMatrix p0 = matrix_power(p, 0);
    CHECK(p0(0, 0) == 1.0);
    CHECK(p0(0, 1) == 0.0);
    const StochasticMatrix p1 = matrix_power(p, 1);
    CHECK(p1(0, 1) == p(0, 1));
    const StochasticMatrix u = matrix_power(StochasticMatrix::uniform(3), 7);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) CHECK(u(i, j) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    std::mt19937_64 rng(4);
    const StochasticMatrix r = random_ergodic(5, rng);
    Eigen::MatrixXd ref = Eigen::MatrixXd::Identity(5, 5);
    for (int k = 0; k < 13; ++k) ref *= to_eigen(r.matrix());
    const StochasticMatrix r13 = matrix_power(r, 13);
    for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = 0; j < 5; ++j) CHECK(r13(i, j) == doctest::Approx(ref(i, j)).epsilon(1e-12));
}

TEST_CASE("reversibilization") {
    const StochasticMatrix p = two_state(0.9);
    const std::vector<double> half{0.5, 0.5};
    const RealMatrix m = reversibilization(p, half);
    CHECK(m(0, 0) == doctest::Approx(0.82).epsilon(1e-12));
    CHECK(m(0, 1) == doctest::Approx(0.18).epsilon(1e-12));
    CHECK(m(1, 0) == doctest::Approx(0.18).epsilon(1e-12));

    // Doubly stochastic P has uniform pi, so M = P P^T; symmetric P gives M = P^2.
    const StochasticMatrix ds(RealMatrix(3, 3, {0.5, 0.3, 0.2, 0.2, 0.5, 0.3, 0.3, 0.2, 0.5}));
    const std::vector<double> third(3, 1.0 / 3.0);
    const RealMatrix md = reversibilization(ds, third);
    const RealMatrix ppt = ds.matrix() * ds.matrix().transpose();
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) CHECK(md(i, j) == doctest::Approx(ppt(i, j)).epsilon(1e-12));

    std::mt19937_64 rng(6);
    const StochasticMatrix r = random_ergodic(4, rng);
    const auto pi = stationary_distribution(r);
    const RealMatrix mr = reversibilization(r, pi);
    // Similar to P Ptilde with Ptilde_ij = pi_j P_ji / pi_i, so the spectra agree.
    Eigen::MatrixXd pt(4, 4);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) pt(i, j) = pi[j] * r(j, i) / pi[i];
    Eigen::VectorXcd ev = (to_eigen(r.matrix()) * pt).eigenvalues();
    std::vector<double> re;
    for (int i = 0; i < 4; ++i) re.push_back(ev(i).real());
    std::sort(re.rbegin(), re.rend());
    const auto e = eig_symmetric(mr);
    for (int i = 0; i < 4; ++i) CHECK(e.values[i] == doctest::Approx(re[i]).epsilon(1e-9));

    CHECK_THROWS_AS(reversibilization(r, std::vector<double>(4, 0.25)), Error);
}

TEST_CASE("second eigenvalue") {
    const StochasticMatrix u = StochasticMatrix::uniform(4);
    CHECK(second_eigenvalue(reversibilization(u, stationary_distribution(u))) == doctest::Approx(0.0).scale(1));
    const StochasticMatrix p = two_state(0.9);
    CHECK(second_eigenvalue(reversibilization(p, stationary_distribution(p))) == doctest::Approx(0.64).epsilon(1e-12));
    for (double q : {0.6, 0.75, 0.99}) {
        const StochasticMatrix s = two_state(q);
        CHECK(second_eigenvalue(reversibilization(s, stationary_distribution(s))) ==
              doctest::Approx((2 * q - 1) * (2 * q - 1)).epsilon(1e-12));
    }
}

TEST_CASE("convergence deviation and the convergence inequality") {
    const StochasticMatrix u = StochasticMatrix::uniform(3);
    const std::vector<double> third(3, 1.0 / 3.0);
    for (unsigned d = 1; d < 5; ++d) CHECK(convergence_deviation(u, third, d, 1) == doctest::Approx(0.0).scale(1));

    const StochasticMatrix id(RealMatrix::identity(2));
    const std::vector<double> half{0.5, 0.5};
    for (unsigned d = 0; d < 4; ++d) CHECK(convergence_deviation(id, half, d, 0) == doctest::Approx(1.0));

    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 10; ++trial) {
        TransitionCounts counts(4);
        const StochasticMatrix p = random_ergodic(4, rng);
        // Sample a path to exercise the counting route as well.
        std::vector<std::size_t> path{0};
        std::uniform_real_distribution<double> u01(0.0, 1.0);
        for (int n = 0; n < 20000; ++n) {
            double x = u01(rng), acc = 0.0;
            std::size_t next = 3;
            for (std::size_t j = 0; j < 4; ++j)
                if ((acc += p(path.back(), j)) >= x) {
                    next = j;
                    break;
                }
            path.push_back(next);
        }
        counts.add_sequence(path);
        const ChainAnalysis a = analyze_chain(counts);
        CHECK(a.transitions == 20000);
        for (unsigned d = 1; d <= 50; ++d)
            for (std::size_t l = 0; l < 4; ++l) {
                const double dev = convergence_deviation(a.p, a.pi, d, l);
                CHECK(dev * dev <= std::pow(a.lambda, d) / a.pi[l] + 1e-9);
            }
        CHECK(max_convergence_violation(a, 50) <= 1e-9);
    }
}

TEST_CASE("uniform deviation") {
    const std::vector<double> pi{0.2, 0.3, 0.5};
    CHECK(uniform_deviation(pi) == doctest::Approx(0.5 - 1.0 / 3.0));
}

TEST_CASE("stochastic matrices validate rows and round-trip through CSV") {
    CHECK_THROWS_AS(StochasticMatrix(RealMatrix(2, 2, {0.5, 0.4, 0.5, 0.5})), Error);
    CHECK_THROWS_AS(StochasticMatrix(RealMatrix(2, 2, {1.5, -0.5, 0.5, 0.5})), Error);
    std::mt19937_64 rng(10);
    const StochasticMatrix p = random_ergodic(6, rng);
    const auto path = (std::filesystem::temp_directory_path() / "lfsim_p_roundtrip.csv").string();
    write_stochastic_csv(p, path);
    const StochasticMatrix q = read_stochastic_csv(path);
    std::remove(path.c_str());
    REQUIRE(q.n_states() == 6);
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = 0; j < 6; ++j) CHECK(q(i, j) == p(i, j));
}
