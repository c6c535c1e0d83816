#include "lfsim/markov.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "lfsim/error.hpp"

namespace lfsim {

StochasticMatrix::StochasticMatrix(RealMatrix entries) : m_(std::move(entries)) {
    require(m_.rows() == m_.cols() && m_.rows() >= 1, "stochastic matrix must be square");
    for (std::size_t i = 0; i < m_.rows(); ++i) {
        double sum = 0.0;
        for (double v : m_.row(i)) {
            require(std::isfinite(v) && v >= 0.0, "stochastic matrix entries must be finite and nonnegative");
            sum += v;
        }
        require(std::abs(sum - 1.0) <= 1e-9, "stochastic matrix row " + std::to_string(i + 1) + " does not sum to 1");
    }
}

StochasticMatrix StochasticMatrix::uniform(std::size_t n) {
    return StochasticMatrix(RealMatrix(n, n, 1.0 / static_cast<double>(n)));
}

TransitionCounts::TransitionCounts(std::size_t n_states) : n_(n_states), counts_(n_states * n_states, 0) {
    require(n_states >= 1, "transition counts need at least one state");
}

void TransitionCounts::add(std::size_t from, std::size_t to) {
    require(from < n_ && to < n_, "state index out of range");
    ++counts_[from * n_ + to];
    ++total_;
}

void TransitionCounts::add_sequence(std::span<const std::size_t> states) {
    for (std::size_t s : states) require(s < n_, "state index out of range");
    for (std::size_t t = 1; t < states.size(); ++t) ++counts_[states[t - 1] * n_ + states[t]];
    if (states.size() > 1) total_ += states.size() - 1;
}

void TransitionCounts::merge(const TransitionCounts& other) {
    require(other.n_ == n_, "cannot merge transition counts of different sizes");
    for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
    total_ += other.total_;
}

StochasticMatrix estimate_transition_matrix(const TransitionCounts& counts) {
    const std::size_t n = counts.n_states();
    RealMatrix p(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        std::uint64_t row = 0;
        for (std::size_t j = 0; j < n; ++j) row += counts.count(i, j);
        for (std::size_t j = 0; j < n; ++j)
            p(i, j) = row == 0 ? 1.0 / double(n) : double(counts.count(i, j)) / double(row);
    }
    return StochasticMatrix(std::move(p));
}

StochasticMatrix estimate_transition_matrix(std::span<const std::size_t> states, std::size_t n_states) {
    require(states.size() >= 2, "transition estimation needs at least two states");
    TransitionCounts counts(n_states);
    counts.add_sequence(states);
    return estimate_transition_matrix(counts);
}

namespace {

RealMatrix lazy(const StochasticMatrix& p) {
    RealMatrix q = p.matrix();
    const std::size_t n = q.rows();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) q(i, j) = 0.5 * q(i, j) + (i == j ? 0.5 : 0.0);
    return q;
}

}  // namespace

bool is_irreducible(const StochasticMatrix& p) {
    const std::size_t n = p.n_states();
    std::vector<char> b(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) b[i * n + j] = (i == j) || p(i, j) > 0.0;
    // Self-loops make the pattern powers monotone, so squaring until the
    // exponent reaches N^2 is enough.
    for (std::size_t power = 1; power < n * n; power *= 2) {
        std::vector<char> next(n * n, 0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < n; ++k) {
                if (!b[i * n + k]) continue;
                for (std::size_t j = 0; j < n; ++j) next[i * n + j] |= b[k * n + j];
            }
        b.swap(next);
    }
    return std::all_of(b.begin(), b.end(), [](char v) { return v != 0; });
}

std::vector<double> stationary_distribution(const StochasticMatrix& p) {
    if (!is_irreducible(p)) fail(ErrorKind::Invariant, "stationary_distribution: chain is not ergodic");
    const std::size_t n = p.n_states();
    RealMatrix q = lazy(p);
    for (int k = 0; k < 80; ++k) {
        double spread = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            double lo = q(0, j), hi = q(0, j);
            for (std::size_t i = 1; i < n; ++i) {
                lo = std::min(lo, q(i, j));
                hi = std::max(hi, q(i, j));
            }
            spread = std::max(spread, hi - lo);
        }
        if (spread < 1e-15) break;
        q = q * q;
    }
    std::vector<double> pi(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) pi[j] += q(i, j) / double(n);

    const RealMatrix l = lazy(p);
    double residual = 1.0;
    for (int it = 0; it < 10000 && residual > 1e-13; ++it) {
        std::vector<double> next(n, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) next[j] += pi[i] * l(i, j);
        double sum = 0.0;
        for (double v : next) sum += v;
        residual = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            next[j] /= sum;
            residual = std::max(residual, std::abs(next[j] - pi[j]));
        }
        pi.swap(next);
    }

    double worst = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        double v = 0.0;
        for (std::size_t i = 0; i < n; ++i) v += pi[i] * p(i, j);
        worst = std::max(worst, std::abs(v - pi[j]));
    }
    if (worst > 1e-9) fail(ErrorKind::Invariant, "stationary_distribution: power iteration did not converge");
    return pi;
}

StochasticMatrix matrix_power(const StochasticMatrix& p, unsigned d) {
    const std::size_t n = p.n_states();
    RealMatrix result = RealMatrix::identity(n);
    RealMatrix base = p.matrix();
    while (d > 0) {
        if (d & 1U) result = result * base;
        d >>= 1U;
        if (d) base = base * base;
    }
    // Renormalize rows against accumulated roundoff.
    for (std::size_t i = 0; i < n; ++i) {
        double sum = 0.0;
        for (std::size_t j = 0; j < n; ++j) sum += result(i, j);
        for (std::size_t j = 0; j < n; ++j) result(i, j) /= sum;
    }
    return StochasticMatrix(std::move(result));
}

RealMatrix reversibilization(const StochasticMatrix& p, std::span<const double> pi) {
    const std::size_t n = p.n_states();
    require(pi.size() == n, "reversibilization: pi has the wrong length");
    for (double v : pi) require(v > 0.0, "reversibilization: pi must be strictly positive");
    double worst = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        double v = 0.0;
        for (std::size_t i = 0; i < n; ++i) v += pi[i] * p(i, j);
        worst = std::max(worst, std::abs(v - pi[j]));
    }
    if (worst > 1e-6) fail(ErrorKind::InvalidArgument, "reversibilization: pi is not stationary for P");

    RealMatrix s(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            double acc = 0.0;
            for (std::size_t k = 0; k < n; ++k) acc += p(i, k) * p(j, k) / pi[k];
            acc *= std::sqrt(pi[i] * pi[j]);
            s(i, j) = s(j, i) = acc;
        }
    return s;
}

double second_eigenvalue(const RealMatrix& m) {
    require(m.rows() >= 2, "second_eigenvalue: need at least two states");
    const SymmetricEigen e = eig_symmetric(m);
    if (std::abs(e.values[0] - 1.0) > 1e-6)
        fail(ErrorKind::Invariant, "second_eigenvalue: top eigenvalue " + std::to_string(e.values[0]) +
                                       " is not 1; P and pi are inconsistent");
    double lambda = e.values[1];
    if (lambda < -1e-9 || lambda > 1.0 + 1e-9)
        fail(ErrorKind::Invariant, "second_eigenvalue: eigenvalue outside [0, 1]");
    return std::clamp(lambda, 0.0, 1.0);
}

double convergence_deviation(const StochasticMatrix& p, std::span<const double> pi, unsigned d, std::size_t l) {
    require(l < p.n_states() && pi.size() == p.n_states(), "convergence_deviation: state out of range");
    const StochasticMatrix pd = matrix_power(p, d);
    double acc = 0.0;
    for (std::size_t m = 0; m < p.n_states(); ++m) acc += std::abs(pd(l, m) - pi[m]);
    return acc;
}

double uniform_deviation(std::span<const double> pi) {
    double worst = 0.0;
    for (double v : pi) worst = std::max(worst, std::abs(v - 1.0 / double(pi.size())));
    return worst;
}

ChainAnalysis analyze_chain(const TransitionCounts& counts) {
    StochasticMatrix p = estimate_transition_matrix(counts);
    std::vector<double> pi = stationary_distribution(p);
    const double lambda = second_eigenvalue(reversibilization(p, pi));
    return ChainAnalysis{std::move(p), std::move(pi), lambda, counts.total()};
}

double max_convergence_violation(const ChainAnalysis& chain, unsigned max_d) {
    const std::size_t n = chain.p.n_states();
    RealMatrix pd = RealMatrix::identity(n);
    double worst = -std::numeric_limits<double>::infinity();
    for (unsigned d = 1; d <= max_d; ++d) {
        pd = pd * chain.p.matrix();
        for (std::size_t l = 0; l < n; ++l) {
            double dev = 0.0;
            for (std::size_t m = 0; m < n; ++m) dev += std::abs(pd(l, m) - chain.pi[m]);
            worst = std::max(worst, dev * dev - std::pow(chain.lambda, double(d)) / chain.pi[l]);
        }
    }
    return worst;
}

void write_stochastic_csv(const StochasticMatrix& p, const std::string& path) {
    std::ofstream out(path);
    if (!out) fail(ErrorKind::Data, "cannot open for writing: " + path);
    // Header row names the destination states, 1-based like every report.
    for (std::size_t j = 0; j < p.n_states(); ++j) out << (j ? "," : "") << "to_" << j + 1;
    out << '\n' << std::setprecision(17);
    for (std::size_t i = 0; i < p.n_states(); ++i) {
        for (std::size_t j = 0; j < p.n_states(); ++j) out << (j ? "," : "") << p(i, j);
        out << '\n';
    }
    if (!out) fail(ErrorKind::Data, "failed writing: " + path);
}

StochasticMatrix read_stochastic_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::Data, "cannot open stochastic matrix file: " + path);
    std::string line;
    std::size_t n = 0;
    if (!std::getline(in, line) || line.rfind("to_1", 0) != 0)
        fail(ErrorKind::Data, path + ": missing `to_1,...,to_N` header row");
    n = std::size_t(std::count(line.begin(), line.end(), ',')) + 1;
    if (n == 0) fail(ErrorKind::Data, path + ": n_states must be positive");
    std::vector<double> values;
    while (values.size() < n * n && std::getline(in, line)) {
        std::istringstream ls(line);
        std::string cell;
        std::size_t cols = 0;
        while (std::getline(ls, cell, ',')) {
            try {
                values.push_back(std::stod(cell));
            } catch (const std::exception&) {
                fail(ErrorKind::Data, path + ": malformed entry `" + cell + "`");
            }
            ++cols;
        }
        if (cols != n) fail(ErrorKind::Data, path + ": row with " + std::to_string(cols) + " columns");
    }
    if (values.size() != n * n) fail(ErrorKind::Data, path + ": expected " + std::to_string(n) + " rows");
    try {
        return StochasticMatrix(RealMatrix(n, n, std::move(values)));
    } catch (const Error& e) {
        fail(ErrorKind::Data, path + ": " + e.what());
    }
}

}  // namespace lfsim
