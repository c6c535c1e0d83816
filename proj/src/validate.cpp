#include "lfsim/validate.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <map>

#include "lfsim/error.hpp"
#include "lfsim/fading.hpp"
#include "lfsim/link.hpp"
#include "lfsim/rng.hpp"

namespace lfsim {

namespace {

constexpr double kSlack = 1e-9;

double combined(double a, double b) { return std::sqrt(a * a + b * b); }

bool starts_with(const std::string& s, std::string_view prefix) { return s.rfind(prefix, 0) == 0; }

const GoodputCurve* find(const std::vector<GoodputCurve>& curves, const std::string& name) {
    for (const auto& c : curves)
        if (c.config.name == name) return &c;
    return nullptr;
}

}  // namespace

CheckResult check_convergence(const ChainAnalysis& chain, const std::string& label, unsigned max_d) {
    const double worst = max_convergence_violation(chain, max_d);
    return {label + ": convergence inequality", worst <= kSlack,
            fmt::format("max(dev^2 - lambda^d/pi_l) = {:.3e} over d = 1..{}, lambda = {:.4f}", worst, max_d,
                        chain.lambda)};
}

CheckResult check_bound_dominance(const GoodputCurve& curve) {
    double worst = -INFINITY;
    unsigned at = 0;
    for (const auto& r : curve.records) {
        const double excess = r.goodput_gain - (r.bound_primary + 3.0 * r.goodput_stderr);
        if (excess > worst) {
            worst = excess;
            at = r.d;
        }
    }
    return {curve.config.name + ": bound dominance (" + to_string(curve.primary) + ")", worst <= 0.0,
            fmt::format("max(gain - bound - 3se) = {:.4g} at d = {}", worst, at)};
}

CheckResult check_throughput_above_goodput(const GoodputCurve& curve) {
    double worst = -INFINITY;
    unsigned at = 0;
    for (const auto& r : curve.records) {
        const double shortfall =
            r.goodput_gain - r.throughput_gain - 2.0 * combined(r.goodput_stderr, r.throughput_stderr);
        if (shortfall > worst) {
            worst = shortfall;
            at = r.d;
        }
    }
    return {curve.config.name + ": throughput gain >= goodput gain", worst <= 0.0,
            fmt::format("max(goodput - throughput - 2se) = {:.4g} at d = {}", worst, at)};
}

CheckResult check_peak_at_zero(const GoodputCurve& curve) {
    const auto zero = std::find_if(curve.records.begin(), curve.records.end(), [](const auto& r) { return r.d == 0; });
    if (zero == curve.records.end()) return {curve.config.name + ": peak at d = 0", false, "grid has no d = 0"};
    double worst = -INFINITY;
    unsigned at = 0;
    for (const auto& r : curve.records) {
        const double excess = r.goodput_gain - zero->goodput_gain - 2.0 * combined(r.goodput_stderr, zero->goodput_stderr);
        if (r.d != 0 && excess > worst) {
            worst = excess;
            at = r.d;
        }
    }
    return {curve.config.name + ": peak at d = 0", worst <= 0.0,
            fmt::format("max(gain(d) - gain(0) - 2se) = {:.4g} at d = {}", worst, at)};
}

CheckResult check_gap_positive_at_zero(const GoodputCurve& curve) {
    const auto zero = std::find_if(curve.records.begin(), curve.records.end(), [](const auto& r) { return r.d == 0; });
    if (zero == curve.records.end()) return {curve.config.name + ": gap at d = 0", false, "grid has no d = 0"};
    const double gap = zero->throughput_gain - zero->goodput_gain;
    return {curve.config.name + ": throughput-goodput gap at d = 0", gap > 0.0,
            fmt::format("throughput gain {:.4f} - goodput gain {:.4f} = {:.4f}", zero->throughput_gain,
                        zero->goodput_gain, gap)};
}

CheckResult check_faster_than_single_cell(const GoodputCurve& two_cell, const GoodputCurve& single_cell,
                                          unsigned max_d) {
    const std::string name = two_cell.config.name + " vs " + single_cell.config.name + ": faster normalized decay";
    double worst = -INFINITY;
    unsigned at = 0, compared = 0;
    for (const auto& a : two_cell.records) {
        if (a.d > max_d) continue;
        const auto b = std::find_if(single_cell.records.begin(), single_cell.records.end(),
                                    [&](const auto& r) { return r.d == a.d; });
        if (b == single_cell.records.end()) continue;
        ++compared;
        const double excess =
            a.goodput_gain_norm - b->goodput_gain_norm - 2.0 * combined(a.goodput_norm_stderr, b->goodput_norm_stderr);
        if (excess > worst) {
            worst = excess;
            at = a.d;
        }
    }
    if (compared == 0) return {name, false, "no shared delays"};
    return {name, worst <= 0.0,
            fmt::format("max(norm two-cell - norm single-cell - 2se) = {:.4g} at d = {} over {} delays", worst, at,
                        compared)};
}

CheckResult check_zf_restoration(const GoodputCurve& zf, const GoodputCurve& single_cell, double tolerance) {
    const std::string name = zf.config.name + " vs " + single_cell.config.name + ": ZF rate restoration";
    const DecayFit& a = zf.goodput_fit;
    const DecayFit& b = single_cell.goodput_fit;
    if (!a.ok() || !b.ok()) return {name, false, "decay fit needs two points above the floor"};
    const double rel = std::abs(a.rate - b.rate) / std::abs(b.rate);
    double worst = -INFINITY;
    unsigned at = 0;
    for (const auto& r : zf.records) {
        const auto s = std::find_if(single_cell.records.begin(), single_cell.records.end(),
                                    [&](const auto& x) { return x.d == r.d; });
        if (s == single_cell.records.end()) continue;
        if (r.rho_d - s->rho_d > worst) {
            worst = r.rho_d - s->rho_d;
            at = r.d;
        }
    }
    return {name, rel <= tolerance && worst <= 0.0,
            fmt::format("rate {:.4f} +- {:.4f} vs {:.4f} +- {:.4f} (rel. diff {:.3f}); max(rho_zf - rho_sc) = {:.4g} "
                        "at d = {}",
                        a.rate, a.stderr, b.rate, b.stderr, rel, worst, at)};
}

CheckResult check_rate_ordering(const std::string& name, std::span<const GoodputCurve* const> curves, bool increasing) {
    if (curves.size() < 2) return {name, false, "needs at least two curves"};
    std::string detail;
    bool ok = true;
    for (std::size_t i = 0; i < curves.size(); ++i) {
        const DecayFit& f = curves[i]->goodput_fit;
        detail += fmt::format("{}{}={:.4f}+-{:.4f}", i ? ", " : "", curves[i]->config.name, f.rate, f.stderr);
        if (!f.ok() || !std::isfinite(f.stderr)) {
            ok = false;
            continue;
        }
        if (i == 0) continue;
        const DecayFit& prev = curves[i - 1]->goodput_fit;
        const double step = increasing ? f.rate - prev.rate : prev.rate - f.rate;
        if (step < -2.0 * combined(f.stderr, prev.stderr)) ok = false;
    }
    return {name, ok, detail};
}

CheckResult check_precoding_gain(const GoodputCurve& precoded, const GoodputCurve& beam) {
    const std::string name = precoded.config.name + " vs " + beam.config.name + ": precoded gain at d = 0";
    auto at_zero = [](const GoodputCurve& c) -> const CurveRecord* {
        for (const auto& r : c.records)
            if (r.d == 0) return &r;
        return nullptr;
    };
    const CurveRecord* a = at_zero(precoded);
    const CurveRecord* b = at_zero(beam);
    if (!a || !b) return {name, false, "grid has no d = 0"};
    const double tol = 2.0 * combined(a->throughput_stderr, b->throughput_stderr);
    return {name, a->throughput_gain >= b->throughput_gain - tol,
            fmt::format("throughput gain {:.4f} vs {:.4f} (2se = {:.4f})", a->throughput_gain, b->throughput_gain,
                        tol)};
}

CheckResult check_lte_ordering(const LteReport& report) {
    bool ok = !report.normalized_gain.empty();
    double prev = 1.0;
    std::string detail;
    for (std::size_t i = 0; i < report.normalized_gain.size(); ++i) {
        const double g = report.normalized_gain[i];
        ok = ok && std::isfinite(g) && g < prev;
        prev = g;
        detail += fmt::format("{}{} ms: {:.4f}", i ? ", " : "", report.config.delays_ms[i], g);
    }
    return {"lte: normalized gain ordering", ok, detail};
}

double ks_distance_power(std::vector<double> samples, double a) {
    require(!samples.empty(), "ks_distance_power: empty sample");
    require(a > 0.0, "ks_distance_power: exponent must be positive");
    std::sort(samples.begin(), samples.end());
    const double n = double(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double x = std::clamp(samples[i], 0.0, 1.0);
        const double f = std::pow(x, a);
        d = std::max({d, double(i + 1) / n - f, f - double(i) / n});
    }
    return d;
}

std::vector<double> sample_sin2(std::size_t nr, std::size_t count, std::uint64_t seed) {
    require(nr >= 2, "sample_sin2: needs nr >= 2");
    ComplexGaussian gauss(substream_seed(seed, "sin2.pairs"));
    std::vector<cdouble> h(nr), g(nr);
    std::vector<double> out(count);
    for (auto& s : out) {
        for (auto& x : h) x = gauss();
        for (auto& x : g) x = gauss();
        s = sin2_angle(h, g);
    }
    return out;
}

CheckResult check_sin2_distribution(std::size_t nr, std::size_t count, std::uint64_t seed, double tolerance) {
    const std::vector<double> s = sample_sin2(nr, count, seed);
    const double ks = ks_distance_power(s, double(nr - 1));
    return {fmt::format("sin^2 angle ~ Beta({}, 1), Nr = {}", nr - 1, nr), ks <= tolerance,
            fmt::format("KS = {:.5f} over {} pairs (limit {})", ks, count, tolerance)};
}

double autocorrelation_rmse(double fd_ts, std::size_t length, std::uint64_t seed, unsigned max_lag) {
    FadingSpec spec;
    spec.fd_ts = fd_ts;
    spec.length = length;
    spec.seed = substream_seed(seed, "fading.fidelity");
    const ChannelTrace trace = generate_trace(spec);
    double acc = 0.0;
    for (unsigned lag = 0; lag <= max_lag; ++lag) {
        const double e = empirical_autocorrelation(trace, lag) - target_autocorrelation(lag, fd_ts);
        acc += e * e;
    }
    return std::sqrt(acc / double(max_lag + 1));
}

CheckResult check_fading_fidelity(double fd_ts, std::size_t length, std::uint64_t seed, double tolerance) {
    const double rmse = autocorrelation_rmse(fd_ts, length, seed);
    return {fmt::format("fading autocorrelation, fd_ts = {}", fd_ts), rmse <= tolerance,
            fmt::format("RMSE = {:.5f} over lags 0..100 at {} samples (limit {})", rmse, length, tolerance)};
}

std::vector<CheckResult> run_validation(const SuiteInput& input, const CheckCallback& on_check) {
    std::vector<CheckResult> out;
    auto emit = [&](CheckResult r) {
        if (on_check) on_check(r);
        out.push_back(std::move(r));
    };

    std::vector<GoodputCurve> curves;
    curves.reserve(input.scenarios.size());
    for (const auto& cfg : input.scenarios) {
        curves.push_back(simulate_goodput_curve(cfg));
        const GoodputCurve& c = curves.back();
        const bool core = starts_with(cfg.name, "fig3_");
        emit(check_convergence(c.chain, cfg.name));
        CheckResult dominance = check_bound_dominance(c);
        dominance.required = core;
        emit(std::move(dominance));
        CheckResult ordering = check_throughput_above_goodput(c);
        ordering.required = core;
        emit(std::move(ordering));
        emit(check_peak_at_zero(c));
    }

    const GoodputCurve* mrc = find(curves, "fig3_mrc");
    const GoodputCurve* sc = find(curves, "fig3_sc");
    const GoodputCurve* zf = find(curves, "fig3_zf");
    if (mrc) emit(check_gap_positive_at_zero(*mrc));
    if (mrc && sc) emit(check_faster_than_single_cell(*mrc, *sc));
    if (zf && sc) emit(check_zf_restoration(*zf, *sc));
    const GoodputCurve* sm = find(curves, "fig7_sm");
    const GoodputCurve* bf = find(curves, "fig7_bf");
    if (sm && bf) emit(check_precoding_gain(*sm, *bf));

    std::vector<const GoodputCurve*> sizes, dopplers;
    for (const auto& c : curves) {
        if (starts_with(c.config.name, "fig8_")) sizes.push_back(&c);
        if (starts_with(c.config.name, "fig9_")) dopplers.push_back(&c);
    }
    std::sort(sizes.begin(), sizes.end(),
              [](const auto* a, const auto* b) { return a->chain.p.n_states() < b->chain.p.n_states(); });
    std::sort(dopplers.begin(), dopplers.end(), [](const auto* a, const auto* b) { return a->config.fd_ts < b->config.fd_ts; });
    if (sizes.size() >= 2) emit(check_rate_ordering("codebook-size ordering", sizes, false));
    if (dopplers.size() >= 2) emit(check_rate_ordering("Doppler ordering", dopplers, true));

    if (input.lte) {
        const LteReport report = lte_design_example(*input.lte);
        emit(check_convergence(report.chain, input.lte->scenario.name));
        emit(check_lte_ordering(report));
    }

    for (std::size_t nr : {2u, 4u}) emit(check_sin2_distribution(nr));
    for (double fd : {0.02, 0.05, 0.1}) emit(check_fading_fidelity(fd));
    return out;
}

}  // namespace lfsim
