#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lfsim/bounds.hpp"
#include "lfsim/link.hpp"
#include "lfsim/markov.hpp"

namespace lfsim {

enum class Receiver { Mrc, Zf };
enum class LinkMode { Beam, Precoded };
enum class PiMode { Empirical, Uniform };
enum class BoundKind { Prop1, Prop2, Prop3, NoiseLimited };

const char* to_string(Receiver r);
const char* to_string(LinkMode m);
const char* to_string(PiMode m);
const char* to_string(BoundKind k);
const char* to_string(NoiseMode m);
const char* to_string(CoefficientMode m);

struct ScenarioConfig {
    std::string name = "scenario";
    ScenarioParams params;
    double fd_ts = 0.025;
    std::string codebook_path;
    Receiver receiver = Receiver::Mrc;
    bool interference = true;
    LinkMode mode = LinkMode::Beam;
    std::vector<unsigned> delays;
    std::size_t n_samples = 200000;
    std::uint64_t seed = 1;
    PiMode pi_mode = PiMode::Empirical;
    CoefficientMode coefficient_mode = CoefficientMode::Conservative;
    std::size_t batches = 20;
    unsigned threads = 1;

    /// Throws Config on inconsistent settings.
    void validate() const;
    /// Bound matching the simulated system: Prop. 1 (two-cell MRC),
    /// Prop. 2 (ZF), Prop. 3 (precoded two-cell) or the noise-limited bound.
    BoundKind primary_bound() const;
    /// Separation used to pair a current channel with a stationary
    /// (independent) delayed one.
    std::size_t stationary_separation() const { return n_samples / 2; }
};

struct CurveRecord {
    unsigned d = 0;
    double rho_d = 0.0;
    double rho_inf = 0.0;
    double goodput_gain = 0.0;
    double goodput_gain_norm = 0.0;
    double goodput_stderr = 0.0;
    double goodput_norm_stderr = 0.0;
    double throughput_d = 0.0;
    double throughput_inf = 0.0;
    double throughput_gain = 0.0;
    double throughput_gain_norm = 0.0;
    double throughput_stderr = 0.0;
    double bound_prop1 = 0.0;
    double bound_prop2 = 0.0;
    double bound_noise_limited = 0.0;
    double bound_prop2_printed = 0.0;
    double bound_noise_limited_printed = 0.0;
    double bound_primary = 0.0;
    std::size_t n_samples = 0;
};

/// Exponential decay fit of a normalized curve: log(g) ~ c - rate * d.
struct DecayFit {
    double rate = 0.0;
    double stderr = 0.0;
    std::size_t points = 0;
    bool ok() const;
};

struct GoodputCurve {
    ScenarioConfig config;
    std::vector<CurveRecord> records;
    BoundCoefficients coefficients;
    BoundKind primary = BoundKind::Prop1;
    ChainAnalysis chain;
    std::vector<double> pi_used;  // pi entering the coefficients
    ConditionalRates rates;
    DecayFit goodput_fit;
    DecayFit throughput_fit;
};

/// Goodput and throughput curves with bounds, both from one paired
/// Monte Carlo pass.
GoodputCurve simulate_goodput_curve(const ScenarioConfig& config);

/// The same pipeline viewed as a throughput curve: rho_d, rho_inf and the
/// goodput fields carry the mean receiver rate.
GoodputCurve simulate_throughput_curve(const ScenarioConfig& config);

/// Least-squares slope of log(normalized) against d over the leading run
/// of points with normalized >= floor. Needs two points, else rate is NaN.
DecayFit fit_decay(std::span<const unsigned> delays, std::span<const double> normalized, double floor = 0.05);

/// Chain estimate for the configured codebook and Doppler from `segments`
/// independent traces of `segment_length` samples, counts merged.
ChainAnalysis estimate_feedback_chain(const ScenarioConfig& config, std::size_t segments,
                                      std::size_t segment_length);

struct LteConfig {
    ScenarioConfig scenario;  // LTE codebook, Nt = Nr = 4, fd_ts = 0.055
    std::size_t chain_segments = 4;
    std::size_t chain_segment_length = 1u << 18;
    double subframe_ms = 1.0;
    std::vector<double> delays_ms{4.0, 6.0};
    std::size_t subcarriers_per_subband = 72;
};

struct LteReport {
    LteConfig config;
    ChainAnalysis chain;
    BoundCoefficients coefficients;
    std::vector<unsigned> delays;         // samples
    std::vector<double> normalized_gain;  // prop1(d) / prop1(0)
    double gain0_measured = 0.0;          // simulated delay-free goodput gain
    double gain0_bound = 0.0;             // a + b
    std::vector<double> per_subcarrier;
    std::vector<double> per_subband;

    static constexpr double kReferenceLambda = 0.7721;
    static constexpr double kReferenceGain0 = 2.453;
    static constexpr double kReferenceNormalized[2] = {0.4708, 0.2904};
    static constexpr double kReferencePerSubcarrier[2] = {1.1549, 0.7124};
    static constexpr double kReferencePerSubband[2] = {83.1528, 51.2928};
};

LteReport lte_design_example(const LteConfig& config);

/// CSV `d,rho_d,rho_inf,goodput_gain,goodput_gain_norm,throughput_gain,bound_primary,stderr,n_samples`.
std::string curve_csv(const GoodputCurve& curve);
/// CSV `d,bound_prop1,bound_prop2,bound_noise_limited,a,b,c,kappa,lambda,bound_prop2_printed,bound_noise_limited_printed`.
std::string bounds_csv(const GoodputCurve& curve);
/// Two-column `x y` plot text.
std::string plot_text(std::span<const unsigned> x, std::span<const double> y);

std::string lte_report_text(const LteReport& report);

}  // namespace lfsim
