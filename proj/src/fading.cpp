#include "lfsim/fading.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <numbers>

#include "lfsim/error.hpp"
#include "lfsim/rng.hpp"

namespace lfsim {

namespace {

// FFTW planning is not thread-safe; execution is.
std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

}  // namespace

std::size_t FadingSpec::min_length() const {
    return static_cast<std::size_t>(std::ceil(8.0 / fd_ts));
}

void FadingSpec::validate() const {
    require(n_rx >= 1 && n_tx >= 1, "fading: antenna counts must be >= 1");
    require(std::isfinite(fd_ts) && fd_ts > 0.0 && fd_ts < 0.5, "fading: fd_ts must lie in (0, 0.5)");
    require(length >= 1, "fading: length must be >= 1");
    if (length < min_length())
        fail(ErrorKind::InvalidArgument, "fading: length " + std::to_string(length) +
                                             " is below the spectral minimum 8/fd_ts = " +
                                             std::to_string(min_length()));
}

ChannelTrace::ChannelTrace(FadingSpec spec, std::vector<cdouble> samples)
    : spec_(spec), samples_(std::make_shared<const std::vector<cdouble>>(std::move(samples))) {
    require(samples_->size() == spec_.length * spec_.n_rx * spec_.n_tx, "trace: sample count does not match spec");
}

ComplexMatrix ChannelTrace::sample(std::size_t n) const {
    auto s = raw(n);
    return ComplexMatrix(spec_.n_rx, spec_.n_tx, std::vector<cdouble>(s.begin(), s.end()));
}

std::vector<cdouble> ChannelTrace::entry(std::size_t r, std::size_t c) const {
    std::vector<cdouble> out(length());
    const std::size_t stride = spec_.n_rx * spec_.n_tx;
    const std::size_t offset = r * spec_.n_tx + c;
    for (std::size_t n = 0; n < out.size(); ++n) out[n] = (*samples_)[n * stride + offset];
    return out;
}

double target_autocorrelation(long lag, double fd_ts) {
    require(lag >= 0, "target_autocorrelation: lag must be >= 0");
    return bessel_j0(2.0 * std::numbers::pi * fd_ts * static_cast<double>(lag));
}

std::vector<double> jakes_bin_weights(std::size_t grid_size, double fd_ts) {
    const double m = static_cast<double>(grid_size);
    auto cdf = [fd_ts](double f) { return std::asin(std::clamp(f / fd_ts, -1.0, 1.0)); };
    std::vector<double> w(grid_size);
    for (std::size_t k = 0; k < grid_size; ++k) {
        const double idx = (k < (grid_size + 1) / 2) ? double(k) : double(k) - m;
        const double f = idx / m;
        w[k] = (cdf(f + 0.5 / m) - cdf(f - 0.5 / m)) / std::numbers::pi;
    }
    return w;
}

ChannelTrace generate_trace(const FadingSpec& spec) {
    spec.validate();
    const std::size_t m = spec.length;
    const std::size_t n_entries = spec.n_rx * spec.n_tx;

    std::vector<double> amp = jakes_bin_weights(m, spec.fd_ts);
    for (auto& a : amp) a = std::sqrt(a);

    std::vector<cdouble> buffer(m);
    auto* io = reinterpret_cast<fftw_complex*>(buffer.data());
    fftw_plan plan;
    {
        std::lock_guard lock(fftw_planner_mutex());
        plan = fftw_plan_dft_1d(static_cast<int>(m), io, io, FFTW_BACKWARD, FFTW_ESTIMATE);
    }

    std::vector<cdouble> samples(m * n_entries);
    for (std::size_t e = 0; e < n_entries; ++e) {
        ComplexGaussian gauss(substream_seed(spec.seed, e));
        for (std::size_t k = 0; k < m; ++k) {
            const cdouble z = gauss();
            buffer[k] = amp[k] == 0.0 ? cdouble{} : amp[k] * z;
        }
        fftw_execute(plan);
        for (std::size_t n = 0; n < m; ++n) samples[n * n_entries + e] = buffer[n];
    }
    {
        std::lock_guard lock(fftw_planner_mutex());
        fftw_destroy_plan(plan);
    }
    return ChannelTrace(spec, std::move(samples));
}

double empirical_autocorrelation(const ChannelTrace& trace, std::size_t lag) {
    const std::size_t len = trace.length();
    if (lag * 10 >= len) fail(ErrorKind::InvalidArgument, "empirical_autocorrelation: lag must be < length/10");
    const std::size_t stride = trace.n_rx() * trace.n_tx();
    double power = 0.0;
    double corr = 0.0;
    for (std::size_t n = 0; n < len; ++n) {
        auto x = trace.raw(n);
        for (std::size_t e = 0; e < stride; ++e) power += std::norm(x[e]);
    }
    for (std::size_t n = 0; n + lag < len; ++n) {
        auto x0 = trace.raw(n);
        auto x1 = trace.raw(n + lag);
        for (std::size_t e = 0; e < stride; ++e) corr += (x1[e] * std::conj(x0[e])).real();
    }
    power /= static_cast<double>(len);
    corr /= static_cast<double>(len - lag);
    return corr / power;
}

double cross_correlation(std::span<const cdouble> a, std::span<const cdouble> b) {
    require(a.size() == b.size() && !a.empty(), "cross_correlation: length mismatch");
    const double na = norm2_squared(a);
    const double nb = norm2_squared(b);
    require(na > 0.0 && nb > 0.0, "cross_correlation: zero sequence");
    return std::abs(inner(a, b)) / std::sqrt(na * nb);
}

void write_trace(const ChannelTrace& trace, const std::string& path) {
    std::ofstream out(path);
    if (!out) fail(ErrorKind::Data, "cannot open trace file for writing: " + path);
    const auto& s = trace.spec();
    out << s.n_rx << ' ' << s.n_tx << ' ' << std::setprecision(17) << s.fd_ts << ' ' << s.length << ' ' << s.seed
        << '\n';
    for (std::size_t n = 0; n < trace.length(); ++n) {
        auto x = trace.raw(n);
        for (std::size_t e = 0; e < x.size(); ++e) {
            if (e) out << ' ';
            out << x[e].real() << ' ' << x[e].imag();
        }
        out << '\n';
    }
    if (!out) fail(ErrorKind::Data, "failed writing trace file: " + path);
}

ChannelTrace read_trace(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::Data, "cannot open trace file: " + path);
    FadingSpec s;
    if (!(in >> s.n_rx >> s.n_tx >> s.fd_ts >> s.length >> s.seed))
        fail(ErrorKind::Data, "malformed trace header: " + path);
    std::vector<cdouble> samples(s.length * s.n_rx * s.n_tx);
    for (auto& z : samples) {
        double re = 0.0;
        double im = 0.0;
        if (!(in >> re >> im)) fail(ErrorKind::Data, "truncated trace file: " + path);
        z = {re, im};
    }
    return ChannelTrace(s, std::move(samples));
}

}  // namespace lfsim
