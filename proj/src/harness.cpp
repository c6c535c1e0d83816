#include "lfsim/harness.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <numeric>
#include <thread>

#include "lfsim/codebook.hpp"
#include "lfsim/error.hpp"
#include "lfsim/fading.hpp"
#include "lfsim/rng.hpp"

namespace lfsim {

const char* to_string(Receiver r) { return r == Receiver::Mrc ? "mrc" : "zf"; }
const char* to_string(LinkMode m) { return m == LinkMode::Beam ? "beam" : "precoded"; }
const char* to_string(PiMode m) { return m == PiMode::Empirical ? "empirical" : "uniform"; }
const char* to_string(NoiseMode m) { return m == NoiseMode::Expected ? "expected" : "sampled"; }
const char* to_string(CoefficientMode m) { return m == CoefficientMode::Conservative ? "conservative" : "exact"; }
const char* to_string(BoundKind k) {
    switch (k) {
        case BoundKind::Prop1: return "prop1";
        case BoundKind::Prop2: return "prop2_zf";
        case BoundKind::Prop3: return "prop3";
        case BoundKind::NoiseLimited: return "noise_limited";
    }
    return "?";
}

void ScenarioConfig::validate() const {
    auto cfg = [](bool ok, const std::string& what) {
        if (!ok) fail(ErrorKind::Config, what);
    };
    try {
        params.validate();
    } catch (const Error& e) {
        fail(ErrorKind::Config, e.what());
    }
    cfg(std::isfinite(fd_ts) && fd_ts > 0.0 && fd_ts < 0.5, "fd_ts must lie in (0, 0.5)");
    cfg(!codebook_path.empty(), "codebook path is not set");
    cfg(!delays.empty(), "the delay grid is empty");
    cfg(std::is_sorted(delays.begin(), delays.end()) &&
            std::adjacent_find(delays.begin(), delays.end()) == delays.end(),
        "delays must be strictly ascending");
    cfg(n_samples >= 10 * std::size_t(delays.back()), "n_samples must be at least 10 * max(delay)");
    cfg(double(stationary_separation()) >= 50.0 / fd_ts,
        "n_samples / 2 must be at least 50 / fd_ts for the stationary pairing");
    cfg(delays.back() < stationary_separation(), "delays must stay below n_samples / 2");
    cfg(batches >= 2 && n_samples >= 10 * batches, "need at least 2 batches of 10 samples");
    cfg(threads >= 1, "threads must be >= 1");
    if (receiver == Receiver::Zf) {
        cfg(params.n_rx >= 2, "the ZF receiver needs n_rx >= 2");
        cfg(interference, "the ZF receiver needs interference = on");
        cfg(mode == LinkMode::Beam, "the ZF receiver is defined for beamforming only");
    }
    if (mode == LinkMode::Beam) cfg(params.n_streams == 1, "beamforming uses n_streams = 1");
}

BoundKind ScenarioConfig::primary_bound() const {
    if (receiver == Receiver::Zf) return BoundKind::Prop2;
    if (!interference) return BoundKind::NoiseLimited;
    return mode == LinkMode::Precoded ? BoundKind::Prop3 : BoundKind::Prop1;
}

bool DecayFit::ok() const { return points >= 2 && std::isfinite(rate); }

DecayFit fit_decay(std::span<const unsigned> delays, std::span<const double> normalized, double floor) {
    require(delays.size() == normalized.size(), "fit_decay: length mismatch");
    DecayFit fit;
    fit.rate = std::numeric_limits<double>::quiet_NaN();
    std::size_t n = 0;
    while (n < normalized.size() && std::isfinite(normalized[n]) && normalized[n] >= floor) ++n;
    fit.points = n;
    if (n < 2) return fit;
    double sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += delays[i];
        sy += std::log(normalized[i]);
    }
    const double mx = sx / double(n), my = sy / double(n);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = delays[i] - mx;
        sxx += dx * dx;
        sxy += dx * (std::log(normalized[i]) - my);
    }
    if (sxx == 0.0) return fit;
    fit.rate = -sxy / sxx;
    return fit;
}

namespace {

struct Traces {
    ChannelTrace h1;  // desired channel of cell 1
    ChannelTrace h2;  // cell 2 user's channel, drives the interferer's feedback
    ChannelTrace g2;  // interference channel from base station 2 to user 1
    std::vector<cdouble> noise;  // n_samples x Nr, empty unless sampled
};

Traces make_traces(const ScenarioConfig& c) {
    auto spec = [&](const char* stream) {
        return FadingSpec{c.params.n_rx, c.params.n_tx, c.fd_ts, c.n_samples, substream_seed(c.seed, stream)};
    };
    Traces t{generate_trace(spec("fading.cell1")), generate_trace(spec("fading.cell2")),
             generate_trace(spec("fading.interference")), {}};
    if (c.params.noise_mode == NoiseMode::Sampled) {
        ComplexGaussian gauss(substream_seed(c.seed, "noise"));
        const double s = std::sqrt(c.params.n0);
        t.noise.resize(c.n_samples * c.params.n_rx);
        for (auto& z : t.noise) z = s * gauss();
    }
    return t;
}

// Quantized feedback of one cell: index, transmit rate and (beam mode)
// ||H f||^2 of the chosen codeword.
struct Feedback {
    std::vector<std::size_t> index;
    std::vector<double> rate;
    std::vector<double> gain;
};

Feedback quantize_beam_trace(const ChannelTrace& h, const BeamCodebook& cb, double scale) {
    Feedback fb;
    const std::size_t m = h.length();
    fb.index.resize(m);
    fb.rate.resize(m);
    fb.gain.resize(m);
    for (std::size_t n = 0; n < m; ++n) {
        double g = 0.0;
        fb.index[n] = quantize_beam(h.raw(n), h.n_rx(), cb, &g);
        fb.gain[n] = g;
        fb.rate[n] = std::log2(1.0 + scale * g);
    }
    return fb;
}

Feedback quantize_precoder_trace(const ChannelTrace& h, const PrecoderCodebook& cb, double scale) {
    Feedback fb;
    const std::size_t m = h.length();
    fb.index.resize(m);
    fb.rate.resize(m);
    for (std::size_t n = 0; n < m; ++n) {
        const ComplexMatrix hn = h.sample(n);
        fb.index[n] = quantize_precoder(hn, cb);
        fb.rate[n] = sm_tx_rate(hn, cb.scaled(fb.index[n]), scale);
    }
    return fb;
}

struct Tally {
    std::vector<double> good;
    std::vector<double> thr;
    std::vector<double> count;
};

struct Simulation {
    const ScenarioConfig& cfg;
    const Traces& traces;
    const Feedback& cell1;
    const Feedback& cell2;
    const BeamCodebook* beam = nullptr;
    const PrecoderCodebook* precoder = nullptr;

    std::size_t batch_of(std::size_t n) const { return n * cfg.batches / cfg.n_samples; }

    Tally run(std::size_t d, ConditionalRateEstimator* est) const {
        const std::size_t m = cfg.n_samples;
        const std::size_t nr = cfg.params.n_rx;
        const std::size_t nt = cfg.params.n_tx;
        Tally t{std::vector<double>(cfg.batches, 0.0), std::vector<double>(cfg.batches, 0.0),
                std::vector<double>(cfg.batches, 0.0)};
        ScenarioParams rx = cfg.params;
        if (!cfg.interference) rx.alpha2 = 0.0;
        ScenarioParams single = cfg.params;
        single.alpha2 = 0.0;
        const bool exact = est && est->mode() == CoefficientMode::Exact;
        const double p = cfg.params.p();
        const double scale = cfg.params.tx_scale();
        std::vector<cdouble> h(nr), g(nr);
        for (std::size_t n = 0; n < m; ++n) {
            const std::size_t j = (n + m - d % m) % m;
            const std::size_t k1d = cell1.index[j], k2d = cell2.index[j];
            const double rt = cell1.rate[j];
            double rate = 0.0;
            if (cfg.mode == LinkMode::Beam) {
                apply(traces.h1.raw(n), beam->vector(k1d), h);
                apply(traces.g2.raw(n), beam->vector(k2d), g);
                std::span<const cdouble> v;
                if (!traces.noise.empty()) v = {traces.noise.data() + n * nr, nr};
                rate = cfg.receiver == Receiver::Zf ? zf_rate_effective(h, g, v, rx) : mrc_rate_effective(h, g, v, rx);
                if (exact) {
                    const std::size_t k10 = cell1.index[n], k20 = cell2.index[n];
                    est->add_joint(k1d, k10, k2d, k20, goodput_sample(rt, rate));
                    const double sc = mrc_rate_effective(h, g, v, single);
                    est->add_noise(k1d, k10, goodput_sample(rt, sc));
                    const double hn = norm2_squared(h);
                    const double ratio = hn > 0.0 ? scale * cell1.gain[j] / (p * hn) : HUGE_VAL;
                    est->add_zf(k1d, k10, rt * (nr >= 2 ? zf_outage_complement(ratio, nr) : 0.0));
                }
            } else {
                const ComplexMatrix hn(nr, nt, {traces.h1.raw(n).begin(), traces.h1.raw(n).end()});
                const ComplexMatrix gn(nr, nt, {traces.g2.raw(n).begin(), traces.g2.raw(n).end()});
                rate = sm_rx_rate(hn, precoder->scaled(k1d), gn, precoder->scaled(k2d), rx);
                if (exact) {
                    const std::size_t k10 = cell1.index[n], k20 = cell2.index[n];
                    est->add_joint(k1d, k10, k2d, k20, goodput_sample(rt, rate));
                    const double sc = sm_rx_rate(hn, precoder->scaled(k1d), gn, precoder->scaled(k2d), single);
                    est->add_noise(k1d, k10, goodput_sample(rt, sc));
                    est->add_zf(k1d, k10, goodput_sample(rt, sc));
                }
            }
            if (est && !exact) est->add_tx(cell1.index[n], cell1.rate[n]);
            const std::size_t b = batch_of(n);
            t.good[b] += goodput_sample(rt, rate);
            t.thr[b] += rate;
            t.count[b] += 1.0;
        }
        return t;
    }
};

template <class F>
void parallel_for(std::size_t count, unsigned threads, F&& body) {
    const unsigned workers = std::max(1u, std::min<unsigned>(threads, unsigned(count)));
    if (workers == 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::atomic<bool> failed{false};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count && !failed; i = next++) {
                try {
                    body(i);
                } catch (...) {
                    if (!failed.exchange(true)) error = std::current_exception();
                }
            }
        });
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

double sum(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

// Mean over all batches but `skip` (none when skip >= size).
double mean_without(const std::vector<double>& s, const std::vector<double>& c, std::size_t skip) {
    double ss = 0.0, cc = 0.0;
    for (std::size_t b = 0; b < s.size(); ++b)
        if (b != skip) {
            ss += s[b];
            cc += c[b];
        }
    return ss / cc;
}

double batch_stderr(const std::vector<double>& s_d, const std::vector<double>& s_inf, const std::vector<double>& c_d,
                    const std::vector<double>& c_inf) {
    const std::size_t nb = s_d.size();
    std::vector<double> x(nb);
    for (std::size_t b = 0; b < nb; ++b) x[b] = s_d[b] / c_d[b] - s_inf[b] / c_inf[b];
    const double mean = sum(x) / double(nb);
    double var = 0.0;
    for (double v : x) var += (v - mean) * (v - mean);
    var /= double(nb - 1);
    return std::sqrt(var / double(nb));
}

double jackknife_stderr(const std::vector<double>& values) {
    const std::size_t nb = values.size();
    const double mean = sum(values) / double(nb);
    double acc = 0.0;
    for (double v : values) acc += (v - mean) * (v - mean);
    return std::sqrt(double(nb - 1) / double(nb) * acc);
}

// Normalized gains with batch `skip` left out; goodput (which = 0) or throughput (1).
std::vector<double> normalized_without(const std::vector<Tally>& tallies, const Tally& inf, int which,
                                       std::size_t skip) {
    const auto& sel = [which](const Tally& t) -> const std::vector<double>& { return which == 0 ? t.good : t.thr; };
    const double rho_inf = mean_without(sel(inf), inf.count, skip);
    std::vector<double> out(tallies.size());
    const double g0 = mean_without(sel(tallies[0]), tallies[0].count, skip) - rho_inf;
    for (std::size_t i = 0; i < tallies.size(); ++i)
        out[i] = (mean_without(sel(tallies[i]), tallies[i].count, skip) - rho_inf) / g0;
    return out;
}

DecayFit fit_with_jackknife(const std::vector<unsigned>& delays, const std::vector<Tally>& tallies, const Tally& inf,
                            int which, std::size_t batches) {
    DecayFit fit = fit_decay(delays, normalized_without(tallies, inf, which, batches));
    if (!fit.ok()) return fit;
    std::vector<double> rates;
    for (std::size_t b = 0; b < batches; ++b) {
        const DecayFit f = fit_decay(delays, normalized_without(tallies, inf, which, b));
        if (!f.ok()) {
            fit.stderr = std::numeric_limits<double>::quiet_NaN();
            return fit;
        }
        rates.push_back(f.rate);
    }
    fit.stderr = jackknife_stderr(rates);
    return fit;
}

void fill_bounds(GoodputCurve& curve) {
    const BoundCoefficients& k = curve.coefficients;
    for (auto& r : curve.records) {
        r.bound_prop1 = prop1_bound(k, r.d);
        r.bound_prop2 = prop2_zf_bound(k, r.d);
        r.bound_noise_limited = noise_limited_bound(k, r.d);
        r.bound_prop2_printed = prop2_zf_bound_printed(k, r.d);
        r.bound_noise_limited_printed = noise_limited_bound_printed(k, r.d);
        switch (curve.primary) {
            case BoundKind::Prop1:
            case BoundKind::Prop3: r.bound_primary = r.bound_prop1; break;
            case BoundKind::Prop2: r.bound_primary = r.bound_prop2; break;
            case BoundKind::NoiseLimited: r.bound_primary = r.bound_noise_limited; break;
        }
    }
}

std::vector<double> pi_for(const ScenarioConfig& cfg, const ChainAnalysis& chain) {
    if (cfg.pi_mode == PiMode::Uniform) return std::vector<double>(chain.pi.size(), 1.0 / double(chain.pi.size()));
    return chain.pi;
}

}  // namespace

GoodputCurve simulate_goodput_curve(const ScenarioConfig& config) {
    config.validate();
    const ScenarioConfig& cfg = config;

    std::optional<BeamCodebook> beam;
    std::optional<PrecoderCodebook> precoder;
    std::size_t n_states = 0;
    if (cfg.mode == LinkMode::Beam) {
        beam = load_beam_codebook(cfg.codebook_path);
        if (beam->n_tx() != cfg.params.n_tx)
            fail(ErrorKind::Config, "codebook Nt = " + std::to_string(beam->n_tx()) + " does not match n_tx");
        n_states = beam->size();
    } else {
        precoder = load_precoder_codebook(cfg.codebook_path);
        if (precoder->n_tx() != cfg.params.n_tx || precoder->n_streams() != cfg.params.n_streams)
            fail(ErrorKind::Config, "precoder codebook shape does not match n_tx / n_streams");
        n_states = precoder->size();
    }

    const Traces traces = make_traces(cfg);
    const double scale = cfg.params.tx_scale();
    Feedback cell1, cell2;
    if (beam) {
        cell1 = quantize_beam_trace(traces.h1, *beam, scale);
        cell2 = quantize_beam_trace(traces.h2, *beam, scale);
    } else {
        cell1 = quantize_precoder_trace(traces.h1, *precoder, scale);
        cell2 = quantize_precoder_trace(traces.h2, *precoder, scale);
    }

    TransitionCounts counts(n_states);
    counts.add_sequence(cell1.index);
    counts.add_sequence(cell2.index);

    GoodputCurve curve;
    curve.config = cfg;
    curve.primary = cfg.primary_bound();
    curve.chain = analyze_chain(counts);
    curve.pi_used = pi_for(cfg, curve.chain);

    const Simulation sim{cfg, traces, cell1, cell2, beam ? &*beam : nullptr, precoder ? &*precoder : nullptr};
    const std::size_t nd = cfg.delays.size();
    std::vector<Tally> tallies(nd + 1);
    // Exact N^4 binning is only needed when the primary bound is Prop. 1 or 3.
    const bool with_joint = cfg.coefficient_mode == CoefficientMode::Conservative ||
                            curve.primary == BoundKind::Prop1 || curve.primary == BoundKind::Prop3;
    ConditionalRateEstimator estimator(n_states, cfg.coefficient_mode, with_joint);
    parallel_for(nd + 1, cfg.threads, [&](std::size_t i) {
        if (i == nd)
            tallies[i] = sim.run(cfg.stationary_separation(), &estimator);
        else
            tallies[i] = sim.run(cfg.delays[i], nullptr);
    });
    const Tally inf = std::move(tallies[nd]);
    tallies.pop_back();

    curve.rates = estimator.finish();
    const BoundFamily family = cfg.mode == LinkMode::Precoded ? BoundFamily::Precoded : BoundFamily::Beamforming;
    curve.coefficients = compute_coefficients(curve.rates, curve.pi_used, curve.chain.lambda, family);

    const std::size_t nb = cfg.batches;
    const double rho_inf = sum(inf.good) / sum(inf.count);
    const double thr_inf = sum(inf.thr) / sum(inf.count);
    for (std::size_t i = 0; i < nd; ++i) {
        const Tally& t = tallies[i];
        CurveRecord r;
        r.d = cfg.delays[i];
        r.n_samples = cfg.n_samples;
        r.rho_d = sum(t.good) / sum(t.count);
        r.rho_inf = rho_inf;
        r.goodput_gain = r.rho_d - rho_inf;
        r.goodput_stderr = batch_stderr(t.good, inf.good, t.count, inf.count);
        r.throughput_d = sum(t.thr) / sum(t.count);
        r.throughput_inf = thr_inf;
        r.throughput_gain = r.throughput_d - thr_inf;
        r.throughput_stderr = batch_stderr(t.thr, inf.thr, t.count, inf.count);
        curve.records.push_back(r);
    }
    for (int which = 0; which < 2; ++which) {
        const std::vector<double> norm = normalized_without(tallies, inf, which, nb);
        std::vector<std::vector<double>> loo;
        for (std::size_t b = 0; b < nb; ++b) loo.push_back(normalized_without(tallies, inf, which, b));
        for (std::size_t i = 0; i < nd; ++i) {
            std::vector<double> v(nb);
            for (std::size_t b = 0; b < nb; ++b) v[b] = loo[b][i];
            if (which == 0) {
                curve.records[i].goodput_gain_norm = norm[i];
                curve.records[i].goodput_norm_stderr = jackknife_stderr(v);
            } else {
                curve.records[i].throughput_gain_norm = norm[i];
            }
        }
    }
    curve.goodput_fit = fit_with_jackknife(cfg.delays, tallies, inf, 0, nb);
    curve.throughput_fit = fit_with_jackknife(cfg.delays, tallies, inf, 1, nb);
    fill_bounds(curve);
    return curve;
}

GoodputCurve simulate_throughput_curve(const ScenarioConfig& config) {
    GoodputCurve curve = simulate_goodput_curve(config);
    for (auto& r : curve.records) {
        r.rho_d = r.throughput_d;
        r.rho_inf = r.throughput_inf;
        r.goodput_gain = r.throughput_gain;
        r.goodput_gain_norm = r.throughput_gain_norm;
        r.goodput_stderr = r.throughput_stderr;
    }
    curve.goodput_fit = curve.throughput_fit;
    return curve;
}

ChainAnalysis estimate_feedback_chain(const ScenarioConfig& cfg, std::size_t segments, std::size_t segment_length) {
    require(segments >= 1, "chain estimation needs at least one segment");
    std::optional<BeamCodebook> beam;
    std::optional<PrecoderCodebook> precoder;
    std::size_t n_states = 0;
    if (cfg.mode == LinkMode::Beam) {
        beam = load_beam_codebook(cfg.codebook_path);
        if (beam->n_tx() != cfg.params.n_tx) fail(ErrorKind::Config, "codebook Nt does not match n_tx");
        n_states = beam->size();
    } else {
        precoder = load_precoder_codebook(cfg.codebook_path);
        if (precoder->n_tx() != cfg.params.n_tx) fail(ErrorKind::Config, "codebook Nt does not match n_tx");
        n_states = precoder->size();
    }
    std::vector<TransitionCounts> shards(segments, TransitionCounts(n_states));
    parallel_for(segments, cfg.threads, [&](std::size_t k) {
        const FadingSpec spec{cfg.params.n_rx, cfg.params.n_tx, cfg.fd_ts, segment_length,
                              substream_seed(substream_seed(cfg.seed, "chain.segment"), k)};
        const ChannelTrace h = generate_trace(spec);
        const Feedback fb =
            beam ? quantize_beam_trace(h, *beam, 1.0) : quantize_precoder_trace(h, *precoder, 1.0);
        shards[k].add_sequence(fb.index);
    });
    TransitionCounts counts(n_states);
    for (const auto& s : shards) counts.merge(s);
    return analyze_chain(counts);
}

LteReport lte_design_example(const LteConfig& config) {
    LteReport rep;
    rep.config = config;
    ScenarioConfig sc = config.scenario;
    require(config.subframe_ms > 0.0, "subframe length must be positive");
    rep.delays.clear();
    for (double ms : config.delays_ms) {
        require(ms >= 0.0, "delays must be nonnegative");
        rep.delays.push_back(unsigned(std::lround(ms / config.subframe_ms)));
    }
    std::vector<unsigned> grid{0};
    for (unsigned d : rep.delays)
        if (d > grid.back()) grid.push_back(d);
    sc.delays = grid;
    sc.validate();

    rep.chain = estimate_feedback_chain(sc, config.chain_segments, config.chain_segment_length);
    const GoodputCurve curve = simulate_goodput_curve(sc);
    const std::vector<double> pi = pi_for(sc, rep.chain);
    rep.coefficients = compute_coefficients(curve.rates, pi, rep.chain.lambda, BoundFamily::Beamforming);
    rep.gain0_bound = prop1_bound(rep.coefficients, 0);
    rep.gain0_measured = curve.records.front().goodput_gain;
    for (unsigned d : rep.delays) {
        const double norm = rep.gain0_bound > 0.0 ? prop1_bound(rep.coefficients, d) / rep.gain0_bound : 0.0;
        rep.normalized_gain.push_back(norm);
        rep.per_subcarrier.push_back(rep.gain0_measured * norm);
        rep.per_subband.push_back(rep.gain0_measured * norm * double(config.subcarriers_per_subband));
    }
    return rep;
}

namespace {

std::string num(double v) { return fmt::format("{:.10g}", v); }

}  // namespace

std::string curve_csv(const GoodputCurve& curve) {
    std::string out = "d,rho_d,rho_inf,goodput_gain,goodput_gain_norm,throughput_gain,bound_primary,stderr,n_samples\n";
    for (const auto& r : curve.records)
        out += fmt::format("{},{},{},{},{},{},{},{},{}\n", r.d, num(r.rho_d), num(r.rho_inf), num(r.goodput_gain),
                           num(r.goodput_gain_norm), num(r.throughput_gain), num(r.bound_primary),
                           num(r.goodput_stderr), r.n_samples);
    return out;
}

std::string bounds_csv(const GoodputCurve& curve) {
    const BoundCoefficients& k = curve.coefficients;
    std::string out =
        "d,bound_prop1,bound_prop2,bound_noise_limited,a,b,c,kappa,lambda,bound_prop2_printed,"
        "bound_noise_limited_printed\n";
    for (const auto& r : curve.records)
        out += fmt::format("{},{},{},{},{},{},{},{},{},{},{}\n", r.d, num(r.bound_prop1), num(r.bound_prop2),
                           num(r.bound_noise_limited), num(k.a), num(k.b), num(k.c), num(k.kappa), num(k.lambda),
                           num(r.bound_prop2_printed), num(r.bound_noise_limited_printed));
    return out;
}

std::string plot_text(std::span<const unsigned> x, std::span<const double> y) {
    require(x.size() == y.size(), "plot_text: length mismatch");
    std::string out;
    for (std::size_t i = 0; i < x.size(); ++i) out += fmt::format("{} {}\n", x[i], num(y[i]));
    return out;
}

std::string lte_report_text(const LteReport& r) {
    std::string out;
    out += fmt::format("LTE design example (Nt = Nr = {}, N = {}, fd_ts = {})\n", r.config.scenario.params.n_tx,
                       r.coefficients.n_states, r.config.scenario.fd_ts);
    out += fmt::format("  lambda                 {:.4f}   (published {:.4f}, {} transitions)\n", r.chain.lambda,
                       LteReport::kReferenceLambda, r.chain.transitions);
    out += fmt::format("  bound coefficients     a = {:.4f}  b = {:.4f}\n", r.coefficients.a, r.coefficients.b);
    out += fmt::format("  delay-free gain        {:.4f} bps/Hz simulated, {:.4f} bound a+b   (published {:.3f}; its SNR "
                       "is not stated)\n",
                       r.gain0_measured, r.gain0_bound, LteReport::kReferenceGain0);
    for (std::size_t i = 0; i < r.delays.size(); ++i) {
        const bool published = i < 2;
        out += fmt::format("  delay {:>4g} ms (d = {:>2})  normalized {:.4f}", r.config.delays_ms[i], r.delays[i],
                           r.normalized_gain[i]);
        if (published) out += fmt::format(" (published {:.4f})", LteReport::kReferenceNormalized[i]);
        out += fmt::format("  per subcarrier {:.4f}", r.per_subcarrier[i]);
        if (published) out += fmt::format(" (published {:.4f})", LteReport::kReferencePerSubcarrier[i]);
        out += fmt::format("  per subband {:.4f}", r.per_subband[i]);
        if (published) out += fmt::format(" (published {:.4f})", LteReport::kReferencePerSubband[i]);
        out += "\n";
    }
    return out;
}

}  // namespace lfsim
