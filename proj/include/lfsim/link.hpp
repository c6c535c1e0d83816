#pragma once

#include <cstddef>
#include <span>

#include "lfsim/numerics.hpp"

namespace lfsim {

enum class NoiseMode { Expected, Sampled };

struct ScenarioParams {
    double alpha1 = 2.0;  // desired received power (linear)
    double alpha2 = 2.0;  // interference received power (linear)
    double n0 = 1.0;      // noise power (linear)
    std::size_t n_tx = 1;
    std::size_t n_rx = 1;
    std::size_t n_streams = 1;
    NoiseMode noise_mode = NoiseMode::Expected;
    bool tx_rate_scaled = false;  // multiply the transmit-rate SNR by p

    /// p = alpha1 / (Nt N0).
    double p() const noexcept { return alpha1 / (double(n_tx) * n0); }
    /// SNR factor applied inside the transmit rate: 1, or p when tx_rate_scaled.
    double tx_scale() const noexcept { return tx_rate_scaled ? p() : 1.0; }
    void validate() const;
};

/// log2(1 + scale * ||H f||^2). The default scale 1 is the unscaled transmit rate.
double tx_rate_beam(const ComplexMatrix& h_delayed, std::span<const cdouble> f, double scale = 1.0);

/// MRC rate log2(1 + SINR) with SINR = a1 ||H f1||^2 / (a2 |w^H G f2|^2 + Nt noise),
/// w = H f1 / ||H f1||. noise is |w^H v|^2 when v is given (sampled mode),
/// N0 otherwise. A zero effective channel gives rate 0.
double rx_rate_mrc(const ComplexMatrix& h_now, std::span<const cdouble> f1, const ComplexMatrix& g_now,
                   std::span<const cdouble> f2, std::span<const cdouble> v, const ScenarioParams& params);

/// 1 - |h^H g|^2 / (||h||^2 ||g||^2).
double sin2_angle(std::span<const cdouble> h, std::span<const cdouble> g);

/// ZF rate log2(1 + p ||H f1||^2 sin^2(H f1, G f2)). With a sampled noise
/// vector v the N0 in p is replaced by |u^H v|^2, u the unit ZF combiner.
double zf_rx_rate(const ComplexMatrix& h_now, std::span<const cdouble> f1, const ComplexMatrix& g_now,
                  std::span<const cdouble> f2, const ScenarioParams& params, std::span<const cdouble> v = {});

/// max(0, 1 - min(ratio, 1)^(Nr - 1)).
double zf_outage_complement(double ratio, std::size_t n_rx);

/// log2 det(I + scale (H F)(H F)^H) for the 1/sqrt(Ns)-scaled precoder F.
double sm_tx_rate(const ComplexMatrix& h_delayed, const ComplexMatrix& f_scaled, double scale = 1.0);

/// log2 det(I + K1 KI^-1), K1 = a1/(Nt N0) (H F1)(H F1)^H,
/// KI = I + a2/(Nt N0) (G F2)(G F2)^H, through a Cholesky factor of KI.
double sm_rx_rate(const ComplexMatrix& h_now, const ComplexMatrix& f1_scaled, const ComplexMatrix& g_now,
                  const ComplexMatrix& f2_scaled, const ScenarioParams& params);

/// r_tx when r_tx <= r_rx, else 0.
double goodput_sample(double r_tx, double r_rx);

// Kernels on effective Nr-vectors h = H f1, g = G f2, v (empty when the
// noise is not sampled). alpha2 = 0 gives the interference-free rate.
double mrc_rate_effective(std::span<const cdouble> h, std::span<const cdouble> g, std::span<const cdouble> v,
                          const ScenarioParams& params);
double zf_rate_effective(std::span<const cdouble> h, std::span<const cdouble> g, std::span<const cdouble> v,
                         const ScenarioParams& params);

/// y = M x for a row-major rows x x.size() matrix.
void apply(std::span<const cdouble> m, std::span<const cdouble> x, std::span<cdouble> y);

}  // namespace lfsim
