#include "lfsim/bounds.hpp"

#include <algorithm>
#include <cmath>

#include "lfsim/error.hpp"

namespace lfsim {

BoundCoefficients compute_coefficients(const ConditionalRates& rates, std::span<const double> pi, double lambda,
                                       BoundFamily family) {
    const std::size_t n = rates.n;
    require(n >= 2, "bound coefficients need a codebook with N >= 2");
    require(pi.size() == n, "bound coefficients: pi has the wrong length");
    require(lambda >= 0.0 && lambda <= 1.0, "bound coefficients: lambda must lie in [0, 1]");
    require(rates.joint.empty() || rates.joint.size() == n * n * n * n, "bound coefficients: joint table size");
    require(rates.zf.empty() || rates.zf.size() == n * n, "bound coefficients: zf table size");
    require(rates.noise.empty() || rates.noise.size() == n * n, "bound coefficients: noise table size");

    BoundCoefficients k;
    k.n_states = n;
    k.lambda = lambda;
    k.r = 1.0 / double(n);

    if (!rates.joint.empty()) {
        double a = 0.0, c2 = 0.0, c3 = 0.0;
        for (std::size_t k1d = 0; k1d < n; ++k1d)
            for (std::size_t k2d = 0; k2d < n; ++k2d) {
                double best = 0.0;
                for (std::size_t k10 = 0; k10 < n; ++k10)
                    for (std::size_t k20 = 0; k20 < n; ++k20) best = std::max(best, rates.joint_at(k1d, k10, k2d, k20));
                a += best * std::sqrt(pi[k1d] * pi[k2d]);

                for (std::size_t k10 = 0; k10 < n; ++k10) {
                    double m = 0.0;
                    for (std::size_t k20 = 0; k20 < n; ++k20) m = std::max(m, rates.joint_at(k1d, k10, k2d, k20));
                    c3 += m * pi[k1d] * pi[k10] * std::sqrt(pi[k2d]);
                }
                for (std::size_t k20 = 0; k20 < n; ++k20) {
                    double m = 0.0;
                    for (std::size_t k10 = 0; k10 < n; ++k10) m = std::max(m, rates.joint_at(k1d, k10, k2d, k20));
                    c2 += m * std::sqrt(pi[k1d]) * pi[k2d] * pi[k20];
                }
            }
        k.a = k.r * a;
        k.b = (family == BoundFamily::Beamforming ? k.r : 1.0 - k.r) * c3 + c2;
    }

    auto single = [&](const std::vector<double>& table) {
        double acc = 0.0;
        for (std::size_t k1d = 0; k1d < n; ++k1d) {
            double m = 0.0;
            for (std::size_t k10 = 0; k10 < n; ++k10) m = std::max(m, table[k1d * n + k10]);
            acc += std::sqrt(pi[k1d]) * m;
        }
        return acc;
    };
    if (!rates.zf.empty()) k.c = single(rates.zf);
    if (!rates.noise.empty()) k.kappa = single(rates.noise);
    return k;
}

namespace {

double half_power(double lambda, unsigned d) { return std::pow(std::sqrt(lambda), double(d)); }

}  // namespace

double prop1_bound(const BoundCoefficients& k, unsigned d) {
    return k.a * std::pow(k.lambda, double(d)) + k.b * half_power(k.lambda, d);
}

double prop2_zf_bound(const BoundCoefficients& k, unsigned d) { return k.c * half_power(k.lambda, d); }

double noise_limited_bound(const BoundCoefficients& k, unsigned d) { return k.kappa * half_power(k.lambda, d); }

double prop2_zf_bound_printed(const BoundCoefficients& k, unsigned d) {
    return k.c * std::pow(k.lambda, double(d));
}

double noise_limited_bound_printed(const BoundCoefficients& k, unsigned d) {
    return k.kappa * std::pow(k.lambda, double(d));
}

double markov_goodput_gain(const ConditionalRates& rates, const StochasticMatrix& p, std::span<const double> pi,
                           unsigned d) {
    const std::size_t n = rates.n;
    require(p.n_states() == n && pi.size() == n && rates.joint.size() == n * n * n * n,
            "markov_goodput_gain: size mismatch");
    const StochasticMatrix pd = matrix_power(p, d);
    const double r = 1.0 / double(n);
    double v = 0.0, a = 0.0, b = 0.0;
    for (std::size_t k1d = 0; k1d < n; ++k1d)
        for (std::size_t k10 = 0; k10 < n; ++k10) {
            const double x = pd(k1d, k10) - pi[k10];
            for (std::size_t k2d = 0; k2d < n; ++k2d)
                for (std::size_t k20 = 0; k20 < n; ++k20) {
                    const double y = pd(k2d, k20) - pi[k20];
                    const double c = rates.joint_at(k1d, k10, k2d, k20);
                    v += c * x * y * pi[k1d] * pi[k2d];
                    a += c * x * pi[k1d] * pi[k2d] * pi[k20];
                    b += c * y * pi[k1d] * pi[k10] * pi[k2d];
                }
        }
    return r * v + a + r * b;
}

double markov_single_cell_gain(std::span<const double> table, const StochasticMatrix& p,
                               std::span<const double> pi, unsigned d) {
    const std::size_t n = p.n_states();
    require(table.size() == n * n && pi.size() == n, "markov_single_cell_gain: size mismatch");
    const StochasticMatrix pd = matrix_power(p, d);
    double acc = 0.0;
    for (std::size_t k1d = 0; k1d < n; ++k1d)
        for (std::size_t k10 = 0; k10 < n; ++k10) acc += table[k1d * n + k10] * (pd(k1d, k10) - pi[k10]) * pi[k1d];
    return acc;
}

ConditionalRateEstimator::ConditionalRateEstimator(std::size_t n_states, CoefficientMode mode, bool with_joint)
    : n_(n_states), mode_(mode), with_joint_(with_joint) {
    require(n_states >= 2, "conditional rate estimation needs N >= 2");
    tx_.resize(n_);
    if (mode_ == CoefficientMode::Exact) {
        if (with_joint_) {
            if (n_ > kMaxExactJointStates)
                fail(ErrorKind::Config, "exact coefficient mode needs N^4 bins; N = " + std::to_string(n_) +
                                            " exceeds the supported " + std::to_string(kMaxExactJointStates));
            joint_.resize(n_ * n_ * n_ * n_);
        }
        zf_.resize(n_ * n_);
        noise_.resize(n_ * n_);
    }
}

void ConditionalRateEstimator::add_tx(std::size_t k1d, double rt) { tx_.add(k1d, rt); }

void ConditionalRateEstimator::add_joint(std::size_t k1d, std::size_t k10, std::size_t k2d, std::size_t k20,
                                         double value) {
    if (joint_.sum.empty()) return;
    joint_.add(((k1d * n_ + k10) * n_ + k2d) * n_ + k20, value);
}

void ConditionalRateEstimator::add_zf(std::size_t k1d, std::size_t k10, double value) {
    if (!zf_.sum.empty()) zf_.add(k1d * n_ + k10, value);
}

void ConditionalRateEstimator::add_noise(std::size_t k1d, std::size_t k10, double value) {
    if (!noise_.sum.empty()) noise_.add(k1d * n_ + k10, value);
}

void ConditionalRateEstimator::merge(const ConditionalRateEstimator& other) {
    require(other.n_ == n_ && other.mode_ == mode_ && other.with_joint_ == with_joint_,
            "cannot merge incompatible estimators");
    auto add = [](Bins& into, const Bins& from) {
        for (std::size_t i = 0; i < into.sum.size(); ++i) {
            into.sum[i] += from.sum[i];
            into.count[i] += from.count[i];
        }
    };
    add(tx_, other.tx_);
    add(joint_, other.joint_);
    add(zf_, other.zf_);
    add(noise_, other.noise_);
}

ConditionalRates ConditionalRateEstimator::finish(std::uint64_t min_per_bin) const {
    ConditionalRates out;
    out.n = n_;
    if (mode_ == CoefficientMode::Conservative) {
        std::vector<double> ct(n_, 0.0);
        for (std::size_t k = 0; k < n_; ++k)
            if (tx_.count[k]) ct[k] = tx_.sum[k] / double(tx_.count[k]);
        if (with_joint_) {
            out.joint.resize(n_ * n_ * n_ * n_);
            const std::size_t block = n_ * n_ * n_;
            for (std::size_t k1d = 0; k1d < n_; ++k1d)
                std::fill(out.joint.begin() + k1d * block, out.joint.begin() + (k1d + 1) * block, ct[k1d]);
        }
        out.zf.resize(n_ * n_);
        for (std::size_t k1d = 0; k1d < n_; ++k1d)
            std::fill(out.zf.begin() + k1d * n_, out.zf.begin() + (k1d + 1) * n_, ct[k1d]);
        out.noise = out.zf;
        return out;
    }
    auto means = [&](const Bins& bins, const char* what) {
        std::vector<double> m(bins.sum.size());
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (bins.count[i] < min_per_bin)
                fail(ErrorKind::Data, std::string("exact coefficient mode: ") + what + " bin " + std::to_string(i) +
                                          " has " + std::to_string(bins.count[i]) + " samples, below " +
                                          std::to_string(min_per_bin));
            m[i] = bins.sum[i] / double(bins.count[i]);
        }
        return m;
    };
    if (with_joint_) out.joint = means(joint_, "joint");
    out.zf = means(zf_, "zf");
    out.noise = means(noise_, "noise-limited");
    return out;
}

}  // namespace lfsim
