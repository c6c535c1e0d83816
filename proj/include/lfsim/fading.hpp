#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "lfsim/numerics.hpp"

namespace lfsim {

struct FadingSpec {
    std::size_t n_rx = 1;
    std::size_t n_tx = 1;
    double fd_ts = 0.01;  // max Doppler frequency times sample period
    std::size_t length = 0;
    std::uint64_t seed = 0;

    /// Shortest trace the spectral synthesizer accepts for this Doppler.
    std::size_t min_length() const;
    /// Throws InvalidArgument when the spec is out of range or too short.
    void validate() const;
};

/// Time-indexed sequence of Nr x Nt fading matrices. Immutable once built;
/// copies share the sample storage.
class ChannelTrace {
public:
    ChannelTrace(FadingSpec spec, std::vector<cdouble> samples);

    const FadingSpec& spec() const noexcept { return spec_; }
    std::size_t length() const noexcept { return spec_.length; }
    std::size_t n_rx() const noexcept { return spec_.n_rx; }
    std::size_t n_tx() const noexcept { return spec_.n_tx; }

    /// Row-major Nr x Nt entries of sample n.
    std::span<const cdouble> raw(std::size_t n) const {
        const std::size_t stride = spec_.n_rx * spec_.n_tx;
        return {samples_->data() + n * stride, stride};
    }
    ComplexMatrix sample(std::size_t n) const;

    /// Entry process (r, c) over time.
    std::vector<cdouble> entry(std::size_t r, std::size_t c) const;

private:
    FadingSpec spec_;
    std::shared_ptr<const std::vector<cdouble>> samples_;
};

/// Clarke/Jakes autocorrelation J0(2 pi fd_ts lag).
double target_autocorrelation(long lag, double fd_ts);

/// Power of each DFT bin of the Jakes spectrum on an M-point grid: the exact
/// integral of S(f) = 1 / (pi fd sqrt(1 - (f/fd)^2)) over the bin
/// [k - 1/2, k + 1/2] / M. The weights sum to one.
std::vector<double> jakes_bin_weights(std::size_t grid_size, double fd_ts);

/// Spectral (inverse DFT) synthesis of Nr*Nt independent unit-variance complex
/// Gaussian processes with Clarke autocorrelation. Entry (r, c) draws its
/// frequency-domain samples from sub-stream r*Nt + c of spec.seed.
ChannelTrace generate_trace(const FadingSpec& spec);

/// Real part of the sample autocorrelation at `lag`, averaged over all
/// entries and normalized so lag 0 gives 1. Each lag sum is divided by the
/// number of terms it has. Requires 0 <= lag < length / 10.
double empirical_autocorrelation(const ChannelTrace& trace, std::size_t lag);

/// |normalized cross-correlation| at lag 0 between two scalar sequences.
double cross_correlation(std::span<const cdouble> a, std::span<const cdouble> b);

/// Text dump: header `nr nt fd_ts length seed`, then one line per sample
/// with interleaved re im of the row-major entries.
void write_trace(const ChannelTrace& trace, const std::string& path);
ChannelTrace read_trace(const std::string& path);

}  // namespace lfsim
