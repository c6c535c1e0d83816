#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "lfsim/numerics.hpp"

namespace lfsim {

/// Row-stochastic N x N matrix (rows sum to 1 within 1e-9).
class StochasticMatrix {
public:
    StochasticMatrix() = default;
    explicit StochasticMatrix(RealMatrix entries);

    static StochasticMatrix uniform(std::size_t n);

    std::size_t n_states() const noexcept { return m_.rows(); }
    double operator()(std::size_t i, std::size_t j) const { return m_(i, j); }
    const RealMatrix& matrix() const noexcept { return m_; }

private:
    RealMatrix m_;
};

/// Transition counts between zero-based states. Shards of one index
/// sequence merge by addition.
class TransitionCounts {
public:
    explicit TransitionCounts(std::size_t n_states);

    std::size_t n_states() const noexcept { return n_; }
    void add(std::size_t from, std::size_t to);
    void add_sequence(std::span<const std::size_t> states);
    void merge(const TransitionCounts& other);

    std::uint64_t count(std::size_t from, std::size_t to) const { return counts_[from * n_ + to]; }
    std::uint64_t total() const noexcept { return total_; }

private:
    std::size_t n_;
    std::vector<std::uint64_t> counts_;
    std::uint64_t total_ = 0;
};

/// Row-normalized counts; rows that were never left become uniform.
StochasticMatrix estimate_transition_matrix(const TransitionCounts& counts);
StochasticMatrix estimate_transition_matrix(std::span<const std::size_t> states, std::size_t n_states);

/// True when the chain is irreducible: the boolean pattern of (I + P)/2
/// raised to N^2 is strictly positive.
bool is_irreducible(const StochasticMatrix& p);

/// Power iteration (by repeated squaring of the lazy chain (I + P)/2, which
/// shares pi with P). Result satisfies ||pi P - pi||_inf <= 1e-9.
std::vector<double> stationary_distribution(const StochasticMatrix& p);

/// P^d by repeated squaring.
StochasticMatrix matrix_power(const StochasticMatrix& p, unsigned d);

/// D^{1/2} P D^{-1} P^T D^{1/2} with D = diag(pi): symmetric and similar to
/// P * Ptilde, Ptilde_ij = pi_j P_ji / pi_i. Equals P P^T for uniform pi.
RealMatrix reversibilization(const StochasticMatrix& p, std::span<const double> pi);

/// Second-largest eigenvalue of a reversibilization, clamped to [0, 1].
double second_eigenvalue(const RealMatrix& m);

/// sum_m |[P^d]_lm - pi_m|.
double convergence_deviation(const StochasticMatrix& p, std::span<const double> pi, unsigned d, std::size_t l);

/// max_i |pi_i - 1/N|.
double uniform_deviation(std::span<const double> pi);

struct ChainAnalysis {
    StochasticMatrix p;
    std::vector<double> pi;
    double lambda = 0.0;
    std::uint64_t transitions = 0;
};

ChainAnalysis analyze_chain(const TransitionCounts& counts);

/// Largest violation of (sum_m |[P^d]_lm - pi_m|)^2 <= lambda^d / pi_l over
/// l and d = 1..max_d. Non-positive means the inequality holds everywhere.
double max_convergence_violation(const ChainAnalysis& chain, unsigned max_d);

/// CSV: `# n_states=N`, then N rows of N comma-separated probabilities.
void write_stochastic_csv(const StochasticMatrix& p, const std::string& path);
StochasticMatrix read_stochastic_csv(const std::string& path);

}  // namespace lfsim
