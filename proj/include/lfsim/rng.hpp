#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <string_view>

namespace lfsim {

/// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Seed of the named sub-stream `name` under the top-level seed, e.g.
/// substream_seed(7, "fading.cell1"). FNV-1a over the name, then mixed.
constexpr std::uint64_t substream_seed(std::uint64_t seed, std::string_view name) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : name) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return mix64(seed ^ mix64(h));
}

constexpr std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index) noexcept {
    return mix64(seed + mix64(index + 0x632be59bd9b4e019ULL));
}

/// Circularly-symmetric CN(0, 1) sampler.
class ComplexGaussian {
public:
    explicit ComplexGaussian(std::uint64_t seed) : engine_(seed) {}

    std::complex<double> operator()() {
        const double re = normal_(engine_);
        const double im = normal_(engine_);
        return {re * kInvSqrt2, im * kInvSqrt2};
    }

private:
    static constexpr double kInvSqrt2 = 0.70710678118654752440;
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace lfsim
