#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "lfsim/markov.hpp"

namespace lfsim {

struct BoundCoefficients {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    double kappa = 0.0;
    double lambda = 0.0;
    double r = 0.0;  // severe-interference probability 1/N
    std::size_t n_states = 0;
};

/// Which proposition's b is used: r on the k20-maximized term for
/// beamforming, (1 - r) for precoded spatial multiplexing.
enum class BoundFamily { Beamforming, Precoded };

/// Conditional goodput terms indexed by zero-based Voronoi indices.
/// joint: C(k1D, k10, k2D, k20), row-major N^4. zf: C_ZF(k1D, k10) and
/// noise: C_N(k1D, k10), row-major N^2. Empty tables leave their
/// coefficients at zero.
struct ConditionalRates {
    std::size_t n = 0;
    std::vector<double> joint;
    std::vector<double> zf;
    std::vector<double> noise;

    double joint_at(std::size_t k1d, std::size_t k10, std::size_t k2d, std::size_t k20) const {
        return joint[((k1d * n + k10) * n + k2d) * n + k20];
    }
};

/// a, b from `joint`, c from `zf`, kappa from `noise`. Per-state
/// stationary probabilities enter as
///   a  = r   sum_{k1D,k2D}     max_{k10,k20} C sqrt(pi_k1D pi_k2D)
///   c3 =     sum_{k1D,k10,k2D} max_{k20}     C pi_k1D pi_k10 sqrt(pi_k2D)
///   c2 =     sum_{k1D,k2D,k20} max_{k10}     C sqrt(pi_k1D) pi_k2D pi_k20
///   b  = r c3 + c2 (beamforming) or (1 - r) c3 + c2 (precoded)
///   c  = sum_{k1D} sqrt(pi_k1D) max_{k10} C_ZF,  kappa likewise with C_N,
/// which is a pi^1, pi^2 sqrt(pi), sqrt(pi) weighting when pi = 1/N.
BoundCoefficients compute_coefficients(const ConditionalRates& rates, std::span<const double> pi, double lambda,
                                       BoundFamily family);

/// a lambda^d + b lambda^(d/2). Also the Prop. 3 bound with precoded coefficients.
double prop1_bound(const BoundCoefficients& k, unsigned d);
/// c lambda^(d/2).
double prop2_zf_bound(const BoundCoefficients& k, unsigned d);
/// kappa lambda^(d/2).
double noise_limited_bound(const BoundCoefficients& k, unsigned d);
/// The forms with lambda^d in place of lambda^(d/2), reported alongside.
double prop2_zf_bound_printed(const BoundCoefficients& k, unsigned d);
double noise_limited_bound_printed(const BoundCoefficients& k, unsigned d);

/// Two-cell goodput gain of the Markov model with severe-interference
/// weighting: r V + A + r B, where with x = [P^d]_{k1D k10} - pi_k10 and
/// y = [P^d]_{k2D k20} - pi_k20,
///   V = sum C x y pi_k1D pi_k2D,  A = sum C x pi_k1D pi_k2D pi_k20,
///   B = sum C y pi_k1D pi_k10 pi_k2D.
/// prop1_bound dominates it for every d.
double markov_goodput_gain(const ConditionalRates& rates, const StochasticMatrix& p, std::span<const double> pi,
                           unsigned d);

/// Single-cell model gain sum C(k1D, k10) ([P^d]_{k1D k10} - pi_k10) pi_k1D for
/// an N^2 table (zf or noise).
double markov_single_cell_gain(std::span<const double> table, const StochasticMatrix& p,
                               std::span<const double> pi, unsigned d);

enum class CoefficientMode { Conservative, Exact };

/// Bins Monte Carlo samples into the C tables. Conservative mode only needs
/// add_tx and sets every C to E[R^t | k1D]. Exact mode averages the supplied
/// success-weighted samples per index tuple and needs at least
/// `min_per_bin` samples in every bin.
class ConditionalRateEstimator {
public:
    ConditionalRateEstimator(std::size_t n_states, CoefficientMode mode, bool with_joint);

    CoefficientMode mode() const noexcept { return mode_; }
    void add_tx(std::size_t k1d, double rt);
    void add_joint(std::size_t k1d, std::size_t k10, std::size_t k2d, std::size_t k20, double value);
    void add_zf(std::size_t k1d, std::size_t k10, double value);
    void add_noise(std::size_t k1d, std::size_t k10, double value);
    void merge(const ConditionalRateEstimator& other);

    ConditionalRates finish(std::uint64_t min_per_bin = 50) const;

private:
    struct Bins {
        std::vector<double> sum;
        std::vector<std::uint64_t> count;
        void resize(std::size_t n) {
            sum.assign(n, 0.0);
            count.assign(n, 0);
        }
        void add(std::size_t i, double v) {
            sum[i] += v;
            ++count[i];
        }
    };

    std::size_t n_;
    CoefficientMode mode_;
    bool with_joint_;
    Bins tx_, joint_, zf_, noise_;
};

/// Largest N for which exact joint (N^4) binning is attempted.
constexpr std::size_t kMaxExactJointStates = 8;

}  // namespace lfsim
