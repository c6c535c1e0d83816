#include "lfsim/link.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "lfsim/error.hpp"

namespace lfsim {

void ScenarioParams::validate() const {
    require(std::isfinite(alpha1) && alpha1 > 0.0, "alpha1 must be positive");
    require(std::isfinite(alpha2) && alpha2 >= 0.0, "alpha2 must be nonnegative");
    require(std::isfinite(n0) && n0 > 0.0, "n0 must be positive");
    require(n_tx >= 1 && n_rx >= 1, "antenna counts must be >= 1");
    require(n_streams >= 1 && n_streams <= std::min(n_tx, n_rx), "n_streams must lie in [1, min(Nt, Nr)]");
}

namespace {

void check_unit(std::span<const cdouble> f, const char* what) {
    if (std::abs(norm2_squared(f) - 1.0) > 2e-9) fail(ErrorKind::InvalidArgument, std::string(what) + " is not unit norm");
}

std::vector<cdouble> times(const ComplexMatrix& m, std::span<const cdouble> x, const char* what) {
    if (m.cols() != x.size()) fail(ErrorKind::InvalidArgument, std::string(what) + ": shape mismatch");
    std::vector<cdouble> y(m.rows());
    apply(m.data(), x, y);
    return y;
}

// Exactly Hermitian X^H X.
ComplexMatrix gram(const ComplexMatrix& x) {
    ComplexMatrix g(x.cols(), x.cols());
    for (std::size_t i = 0; i < x.cols(); ++i)
        for (std::size_t j = i; j < x.cols(); ++j) {
            cdouble acc = 0.0;
            for (std::size_t r = 0; r < x.rows(); ++r) acc += std::conj(x(r, i)) * x(r, j);
            if (i == j) acc = acc.real();
            g(i, j) = acc;
            g(j, i) = std::conj(acc);
        }
    return g;
}

}  // namespace

void apply(std::span<const cdouble> m, std::span<const cdouble> x, std::span<cdouble> y) {
    const std::size_t cols = x.size();
    for (std::size_t r = 0; r < y.size(); ++r) {
        cdouble s = 0.0;
        for (std::size_t c = 0; c < cols; ++c) s += m[r * cols + c] * x[c];
        y[r] = s;
    }
}

double tx_rate_beam(const ComplexMatrix& h_delayed, std::span<const cdouble> f, double scale) {
    check_unit(f, "tx_rate_beam: f");
    const auto hf = times(h_delayed, f, "tx_rate_beam");
    return std::log2(1.0 + scale * norm2_squared(hf));
}

double mrc_rate_effective(std::span<const cdouble> h, std::span<const cdouble> g, std::span<const cdouble> v,
                          const ScenarioParams& params) {
    const double hn = norm2_squared(h);
    if (hn == 0.0) return 0.0;
    // |w^H x|^2 with w = h / ||h||.
    const double interference = params.alpha2 > 0.0 ? std::norm(inner(h, g)) / hn : 0.0;
    const double noise = v.empty() ? params.n0 : std::norm(inner(h, v)) / hn;
    const double denom = params.alpha2 * interference + double(params.n_tx) * noise;
    if (denom == 0.0) return 0.0;
    return std::log2(1.0 + params.alpha1 * hn / denom);
}

double rx_rate_mrc(const ComplexMatrix& h_now, std::span<const cdouble> f1, const ComplexMatrix& g_now,
                   std::span<const cdouble> f2, std::span<const cdouble> v, const ScenarioParams& params) {
    check_unit(f1, "rx_rate_mrc: f1");
    check_unit(f2, "rx_rate_mrc: f2");
    const bool sampled = params.noise_mode == NoiseMode::Sampled;
    if (sampled != !v.empty())
        fail(ErrorKind::InvalidArgument, "rx_rate_mrc: a noise vector is required exactly in sampled mode");
    const auto h = times(h_now, f1, "rx_rate_mrc");
    const auto g = times(g_now, f2, "rx_rate_mrc");
    if (g.size() != h.size() || (!v.empty() && v.size() != h.size()))
        fail(ErrorKind::InvalidArgument, "rx_rate_mrc: receive dimension mismatch");
    return mrc_rate_effective(h, g, v, params);
}

double sin2_angle(std::span<const cdouble> h, std::span<const cdouble> g) {
    require(h.size() == g.size(), "sin2_angle: length mismatch");
    const double hn = norm2_squared(h);
    const double gn = norm2_squared(g);
    require(hn > 0.0 && gn > 0.0, "sin2_angle: zero vector");
    return std::clamp(1.0 - std::norm(inner(h, g)) / (hn * gn), 0.0, 1.0);
}

double zf_rate_effective(std::span<const cdouble> h, std::span<const cdouble> g, std::span<const cdouble> v,
                         const ScenarioParams& params) {
    const double hn = norm2_squared(h);
    const double gn = norm2_squared(g);
    if (hn == 0.0) return 0.0;
    if (gn == 0.0) {
        const double noise = v.empty() ? params.n0 : std::norm(inner(h, v)) / hn;
        return std::log2(1.0 + params.alpha1 * hn / (double(params.n_tx) * noise));
    }
    const cdouble gh = inner(g, h);
    const double s2 = std::clamp(1.0 - std::norm(gh) / (hn * gn), 0.0, 1.0);
    if (s2 == 0.0) return 0.0;
    double noise = params.n0;
    if (!v.empty()) {
        // u = (h - g g^H h / ||g||^2) / ||.||, its norm^2 is ||h||^2 sin^2.
        cdouble uv = 0.0;
        const cdouble coef = gh / gn;
        for (std::size_t i = 0; i < h.size(); ++i) uv += std::conj(h[i] - coef * g[i]) * v[i];
        noise = std::norm(uv) / (hn * s2);
    }
    if (noise == 0.0) return 0.0;
    return std::log2(1.0 + params.alpha1 * hn * s2 / (double(params.n_tx) * noise));
}

double zf_rx_rate(const ComplexMatrix& h_now, std::span<const cdouble> f1, const ComplexMatrix& g_now,
                  std::span<const cdouble> f2, const ScenarioParams& params, std::span<const cdouble> v) {
    if (h_now.rows() < 2) fail(ErrorKind::InvalidArgument, "zf_rx_rate: needs Nr >= 2");
    check_unit(f1, "zf_rx_rate: f1");
    check_unit(f2, "zf_rx_rate: f2");
    const auto h = times(h_now, f1, "zf_rx_rate");
    const auto g = times(g_now, f2, "zf_rx_rate");
    if (g.size() != h.size() || (!v.empty() && v.size() != h.size()))
        fail(ErrorKind::InvalidArgument, "zf_rx_rate: receive dimension mismatch");
    return zf_rate_effective(h, g, v, params);
}

double zf_outage_complement(double ratio, std::size_t n_rx) {
    require(std::isfinite(ratio) || ratio == HUGE_VAL, "zf_outage_complement: ratio must not be NaN");
    require(ratio >= 0.0, "zf_outage_complement: ratio must be nonnegative");
    require(n_rx >= 2, "zf_outage_complement: needs Nr >= 2");
    const double base = std::min(ratio, 1.0);
    return std::max(0.0, 1.0 - std::pow(base, double(n_rx - 1)));
}

double sm_tx_rate(const ComplexMatrix& h_delayed, const ComplexMatrix& f_scaled, double scale) {
    require(h_delayed.cols() == f_scaled.rows(), "sm_tx_rate: shape mismatch");
    ComplexMatrix g = gram(h_delayed * f_scaled);
    g *= scale;
    return logdet_i_plus_hermitian(g);
}

double sm_rx_rate(const ComplexMatrix& h_now, const ComplexMatrix& f1_scaled, const ComplexMatrix& g_now,
                  const ComplexMatrix& f2_scaled, const ScenarioParams& params) {
    require(h_now.cols() == f1_scaled.rows() && g_now.cols() == f2_scaled.rows() && h_now.rows() == g_now.rows(),
            "sm_rx_rate: shape mismatch");
    const std::size_t nr = h_now.rows();
    const double scale = 1.0 / (double(params.n_tx) * params.n0);
    const ComplexMatrix gf = g_now * f2_scaled;
    ComplexMatrix ki = ComplexMatrix::identity(nr);
    for (std::size_t i = 0; i < nr; ++i)
        for (std::size_t j = 0; j < nr; ++j) {
            cdouble acc = 0.0;
            for (std::size_t s = 0; s < gf.cols(); ++s) acc += gf(i, s) * std::conj(gf(j, s));
            ki(i, j) += params.alpha2 * scale * acc;
        }
    ComplexMatrix lower;
    if (!cholesky(ki, lower)) fail(ErrorKind::Invariant, "sm_rx_rate: interference covariance is not positive definite");
    // X = L^{-1} sqrt(a1 scale) H F1, then log2 det(I + X^H X).
    ComplexMatrix x = h_now * f1_scaled;
    x *= std::sqrt(params.alpha1 * scale);
    solve_lower(lower, x);
    return logdet_i_plus_hermitian(gram(x));
}

double goodput_sample(double r_tx, double r_rx) { return r_tx <= r_rx ? r_tx : 0.0; }

}  // namespace lfsim
