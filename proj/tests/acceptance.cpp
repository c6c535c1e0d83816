// Acceptance run: one PASS/FAIL line per criterion.
//
//   acceptance            all criteria
//   acceptance 3 7        selected criteria
//
// Exit status 0 when every selected criterion passes, 4 otherwise.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "lfsim/bounds.hpp"
#include "lfsim/config.hpp"
#include "lfsim/harness.hpp"
#include "lfsim/markov.hpp"
#include "lfsim/validate.hpp"

using namespace lfsim;

namespace {

const std::string kConfigs = std::string(LFSIM_SOURCE_DIR) + "/configs";

struct Outcome {
    bool passed = true;
    std::string detail;
    void add(bool ok, const std::string& what) {
        passed = passed && ok;
        if (!detail.empty()) detail += "; ";
        detail += (ok ? "" : "[x] ") + what;
    }
    void add(const CheckResult& r) { add(r.passed, r.name + ": " + r.detail); }
};

std::string fixed(double v, int digits = 4) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

ConfigFile load(const std::string& name) { return ConfigFile::load(kConfigs + "/" + name + ".conf"); }

const GoodputCurve& curve(const std::string& name) {
    static std::map<std::string, GoodputCurve> cache;
    auto it = cache.find(name);
    if (it == cache.end()) it = cache.emplace(name, simulate_goodput_curve(scenario_from_config(load(name)))).first;
    return it->second;
}

std::vector<std::string> suite_scenarios() {
    std::vector<std::string> names;
    for (const auto& e : std::filesystem::directory_iterator(kConfigs))
        if (e.path().extension() == ".conf" && e.path().stem() != "lte") names.push_back(e.path().stem().string());
    std::sort(names.begin(), names.end());
    return names;
}

const LteReport& lte_report() {
    static const LteReport report = lte_design_example(lte_from_config(load("lte")));
    return report;
}

Outcome c1() {
    const ConfigFile cfg = load("lte");
    const LteConfig lte = lte_from_config(cfg);
    const auto t0 = std::chrono::steady_clock::now();
    const ChainAnalysis chain = estimate_feedback_chain(lte.scenario, lte.chain_segments, lte.chain_segment_length);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    Outcome o;
    o.add(std::abs(chain.lambda - 0.7721) <= 0.03, "lambda " + fixed(chain.lambda) + " vs 0.7721 +- 0.03");
    o.add(chain.transitions >= 1000000, std::to_string(chain.transitions) + " transitions (>= 1e6)");
    o.add(secs <= 300.0, "runtime " + fixed(secs, 1) + " s (<= 300 s)");
    return o;
}

Outcome c2() {
    Outcome o;
    double worst = -INFINITY;
    std::size_t chains = 0;
    auto take = [&](const ChainAnalysis& ch, const std::string& label) {
        const CheckResult r = check_convergence(ch, label, 50);
        worst = std::max(worst, max_convergence_violation(ch, 50));
        ++chains;
        if (!r.passed) o.add(r);
    };
    for (const auto& name : suite_scenarios()) take(curve(name).chain, name);
    take(lte_report().chain, "lte");
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", worst);
    o.add(worst <= 1e-9, std::to_string(chains) + " chains, d = 1..50, max(dev^2 - lambda^d / pi_l) " + buf + " (<= 1e-9)");
    return o;
}

Outcome c3() {
    Outcome o;
    for (const char* name : {"fig3_mrc", "fig3_zf", "fig3_sc"}) o.add(check_bound_dominance(curve(name)));
    return o;
}

Outcome c4() {
    Outcome o;
    for (std::size_t nr : {2u, 4u}) o.add(check_sin2_distribution(nr, 100000, 1, 0.01));
    const double ks = ks_distance_power(sample_sin2(2, 100000, 1), 1.0);
    o.add(ks <= 0.01, "Nr = 2 against U[0, 1]: KS " + fixed(ks));
    return o;
}

Outcome c5() {
    Outcome o;
    for (double fd : {0.02, 0.05, 0.1}) o.add(check_fading_fidelity(fd, 200000, 1, 0.02));
    return o;
}

Outcome c6() {
    Outcome o;
    o.add(check_throughput_above_goodput(curve("fig3_mrc")));
    o.add(check_gap_positive_at_zero(curve("fig3_mrc")));
    return o;
}

Outcome c7() {
    Outcome o;
    o.add(check_zf_restoration(curve("fig3_zf"), curve("fig3_sc"), 0.10));
    return o;
}

Outcome c8() {
    Outcome o;
    const std::vector<const GoodputCurve*> sizes{&curve("fig8_n4"), &curve("fig8_n8"), &curve("fig8_n16")};
    o.add(check_rate_ordering("codebook size N = 4, 8, 16", sizes, false));
    const std::vector<const GoodputCurve*> dopplers{&curve("fig9_fd020"), &curve("fig9_fd025"), &curve("fig9_fd050"),
                                                    &curve("fig9_fd100")};
    o.add(check_rate_ordering("fd_ts = 0.02, 0.025, 0.05, 0.1", dopplers, true));
    return o;
}

// Brute-force coefficients for N = 2: every one of the 2^4 index tuples is
// visited and each maximum is taken over an explicit list.
struct Oracle {
    double a, b, c, kappa;
};

Oracle enumerate(const ConditionalRates& r, const std::vector<double>& pi) {
    double a = 0, c3 = 0, c2 = 0, c = 0, kappa = 0;
    for (int t = 0; t < 4; ++t) {
        const int k1d = t >> 1, k2d = t & 1;
        double m = 0;
        for (int u = 0; u < 4; ++u) m = std::max(m, r.joint_at(k1d, u >> 1, k2d, u & 1));
        a += m * std::sqrt(pi[k1d] * pi[k2d]) / 2.0;
    }
    for (int t = 0; t < 8; ++t) {
        const int k1d = t >> 2, x = (t >> 1) & 1, k2d = t & 1;
        c3 += std::max(r.joint_at(k1d, x, k2d, 0), r.joint_at(k1d, x, k2d, 1)) * pi[k1d] * pi[x] * std::sqrt(pi[k2d]);
        c2 += std::max(r.joint_at(k1d, 0, k2d, x), r.joint_at(k1d, 1, k2d, x)) * std::sqrt(pi[k1d]) * pi[k2d] * pi[x];
    }
    for (int k = 0; k < 2; ++k) {
        c += std::sqrt(pi[k]) * std::max(r.zf[2 * k], r.zf[2 * k + 1]);
        kappa += std::sqrt(pi[k]) * std::max(r.noise[2 * k], r.noise[2 * k + 1]);
    }
    return {a, 0.5 * c3 + c2, c, kappa};
}

Outcome c9() {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(0.0, 4.0), q(0.55, 0.95);
    double worst = 0.0;
    int cases = 0;
    for (int t = 0; t < 50; ++t) {
        ConditionalRates r;
        r.n = 2;
        r.joint.resize(16);
        r.zf.resize(4);
        r.noise.resize(4);
        for (auto* v : {&r.joint, &r.zf, &r.noise})
            for (auto& x : *v) x = u(rng);
        // Two-state chain with stay probabilities s0, s1.
        const double s0 = q(rng), s1 = t % 2 ? s0 : q(rng);
        RealMatrix m(2, 2);
        m(0, 0) = s0;
        m(0, 1) = 1 - s0;
        m(1, 0) = 1 - s1;
        m(1, 1) = s1;
        const StochasticMatrix p(m);
        const std::vector<double> pi{(1 - s1) / (2 - s0 - s1), (1 - s0) / (2 - s0 - s1)};
        // For a two-state chain the reversibilization's second eigenvalue is (s0 + s1 - 1)^2.
        const double lam = (s0 + s1 - 1) * (s0 + s1 - 1);
        const Oracle e = enumerate(r, pi);
        const BoundCoefficients k = compute_coefficients(r, pi, lam, BoundFamily::Beamforming);
        const BoundCoefficients kp = compute_coefficients(r, pi, lam, BoundFamily::Precoded);
        auto dev = [&](double x, double y) { worst = std::max(worst, std::abs(x - y)); };
        dev(k.a, e.a);
        dev(k.b, e.b);
        // r = 1 - r at N = 2, so both families share b.
        dev(kp.b, e.b);
        dev(k.c, e.c);
        dev(k.kappa, e.kappa);
        dev(second_eigenvalue(reversibilization(p, pi)), lam);
        for (unsigned d = 0; d <= 30; ++d) {
            dev(prop1_bound(k, d), e.a * std::pow(lam, d) + e.b * std::pow(lam, 0.5 * d));
            dev(prop2_zf_bound(k, d), e.c * std::pow(lam, 0.5 * d));
            dev(noise_limited_bound(k, d), e.kappa * std::pow(lam, 0.5 * d));
        }
        ++cases;
    }
    Outcome o;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", worst);
    o.add(worst <= 1e-9, std::to_string(cases) + " synthetic N = 2 chains, max |lfsim - oracle| " + buf + " (<= 1e-9)");
    return o;
}

Outcome c10() {
    const LteReport& r = lte_report();
    Outcome o;
    o.add(true, "delay-free gain " + fixed(r.gain0_measured, 3) + " bps/Hz (published " + fixed(LteReport::kReferenceGain0, 3) +
                    ", SNR unstated)");
    o.add(r.normalized_gain.size() == 2 && r.normalized_gain[1] < r.normalized_gain[0] && r.normalized_gain[0] < 1.0,
          "normalized gains decreasing below 1");
    for (std::size_t i = 0; i < r.normalized_gain.size() && i < 2; ++i) {
        const double diff = std::abs(r.normalized_gain[i] - LteReport::kReferenceNormalized[i]);
        o.add(diff <= 0.15, fixed(r.config.delays_ms[i], 0) + " ms: " + fixed(r.normalized_gain[i]) + " vs published " +
                                fixed(LteReport::kReferenceNormalized[i]) + " (|diff| " + fixed(diff) + " <= 0.15)");
    }
    return o;
}

struct Criterion {
    const char* title;
    std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
    const std::vector<Criterion> all{
        {"LTE eigenvalue", c1},
        {"convergence inequality", c2},
        {"bound dominance", c3},
        {"sin^2 distribution", c4},
        {"fading fidelity", c5},
        {"goodput/throughput gap", c6},
        {"ZF rate restoration", c7},
        {"codebook-size and Doppler orderings", c8},
        {"small-instance oracle", c9},
        {"LTE numeric echoes (best effort)", c10},
    };
    std::vector<std::size_t> selected;
    for (int i = 1; i < argc; ++i) {
        const long k = std::strtol(argv[i], nullptr, 10);
        if (k < 1 || k > long(all.size())) {
            std::fprintf(stderr, "unknown criterion '%s' (1..%zu)\n", argv[i], all.size());
            return 1;
        }
        selected.push_back(std::size_t(k));
    }
    if (selected.empty())
        for (std::size_t k = 1; k <= all.size(); ++k) selected.push_back(k);

    bool ok = true;
    for (std::size_t k : selected) {
        Outcome o;
        try {
            o = all[k - 1].run();
        } catch (const std::exception& e) {
            o.add(false, std::string("error: ") + e.what());
        }
        std::printf("%s c%zu %s: %s\n", o.passed ? "PASS" : "FAIL", k, all[k - 1].title, o.detail.c_str());
        std::fflush(stdout);
        ok = ok && o.passed;
    }
    return ok ? 0 : 4;
}
