// lfsim command-line front end. Talks to the simulator only through the C API.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "lfsim/lfsim.h"

namespace fs = std::filesystem;

namespace {

constexpr int kExitUsage = 1;

/// Thrown to unwind with a status-derived exit code.
struct Failure {
    int code;
    std::string message;
};

void check(lfsim_status s, const std::string& context) {
    if (s != LFSIM_OK) {
        const int code = s == LFSIM_INTERNAL_ERROR || s == LFSIM_INVALID_ARGUMENT ? static_cast<int>(LFSIM_INVARIANT_ERROR)
                                                                                 : static_cast<int>(s);
        throw Failure{code, context + ": " + lfsim_last_error()};
    }
}

template <class T, void (*Free)(T*)>
struct Deleter {
    void operator()(T* p) const { Free(p); }
};
using Config = std::unique_ptr<lfsim_config, Deleter<lfsim_config, lfsim_config_free>>;
using Trace = std::unique_ptr<lfsim_trace, Deleter<lfsim_trace, lfsim_trace_free>>;
using Codebook = std::unique_ptr<lfsim_codebook, Deleter<lfsim_codebook, lfsim_codebook_free>>;
using Chain = std::unique_ptr<lfsim_chain, Deleter<lfsim_chain, lfsim_chain_free>>;
using Curve = std::unique_ptr<lfsim_curve, Deleter<lfsim_curve, lfsim_curve_free>>;
using LteReport = std::unique_ptr<lfsim_lte_report, Deleter<lfsim_lte_report, lfsim_lte_report_free>>;

std::string take(char* s) {
    std::string out = s ? s : "";
    lfsim_string_free(s);
    return out;
}

std::string timestamp() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

struct Options {
    std::vector<std::string> configs;
    std::vector<std::string> overrides;
    std::string out = ".";
    unsigned threads = 0;
    bool force_uniform_pi = false;
};

/// Collects output files and writes the run manifest last.
class Run {
public:
    Run(std::string command, const Options& opt) : command_(std::move(command)), opt_(opt), started_(timestamp()) {
        fs::create_directories(opt.out);
    }

    Config load(const std::string& path, const std::vector<std::string>& extra = {}) const {
        lfsim_config* raw = nullptr;
        check(lfsim_config_load(path.c_str(), &raw), "loading " + path);
        Config cfg(raw);
        for (const auto& o : extra) check(lfsim_config_override(cfg.get(), o.c_str()), "override " + o);
        for (const auto& o : opt_.overrides) check(lfsim_config_override(cfg.get(), o.c_str()), "--set " + o);
        if (opt_.threads) set(cfg, "run.threads=" + std::to_string(opt_.threads));
        if (opt_.force_uniform_pi) set(cfg, "run.pi_mode=uniform");
        return cfg;
    }

    static std::string get(const Config& cfg, const char* section, const char* key, const std::string& fallback) {
        if (!lfsim_config_has(cfg.get(), section, key)) return fallback;
        char* v = nullptr;
        check(lfsim_config_get(cfg.get(), section, key, &v), "reading config");
        return take(v);
    }

    std::string path_for(const std::string& file) const { return (fs::path(opt_.out) / file).string(); }

    void write(const std::string& file, const std::string& text) {
        const std::string p = path_for(file);
        std::ofstream out(p, std::ios::binary);
        out << text;
        out.close();
        if (!out) throw Failure{static_cast<int>(LFSIM_DATA_ERROR), "cannot write " + p};
        outputs_.push_back(p);
    }

    void record(const std::string& file) { outputs_.push_back(path_for(file)); }

    void manifest(const Config& cfg, const std::string& name) {
        char* json = nullptr;
        check(lfsim_config_to_json(cfg.get(), &json), "config echo");
        nlohmann::ordered_json m;
        m["tool"] = "lfsim";
        m["version"] = lfsim_version();
        m["command"] = command_;
        m["seed"] = get(cfg, "run", "seed", "1");
        m["started"] = started_;
        m["finished"] = timestamp();
        m["config"] = nlohmann::ordered_json::parse(take(json));
        m["outputs"] = outputs_;
        const std::string p = path_for(name + "_manifest.json");
        std::ofstream out(p, std::ios::binary);
        out << m.dump(2) << "\n";
        if (!out) throw Failure{static_cast<int>(LFSIM_DATA_ERROR), "cannot write " + p};
        std::cout << "manifest: " << p << "\n";
    }

private:
    static void set(const Config& cfg, const std::string& o) {
        check(lfsim_config_override(cfg.get(), o.c_str()), "override " + o);
    }

    std::string command_;
    const Options& opt_;
    std::string started_;
    std::vector<std::string> outputs_;
};

const std::string& single_config(const Options& opt) {
    if (opt.configs.size() != 1) throw Failure{kExitUsage, "expected exactly one --config"};
    return opt.configs.front();
}

std::string scenario_name(const Config& cfg) { return Run::get(cfg, "scenario", "name", "scenario"); }

void gen_fading(const Options& opt) {
    Run run("gen-fading", opt);
    Config cfg = run.load(single_config(opt));
    const std::string name = scenario_name(cfg);
    lfsim_trace* raw = nullptr;
    check(lfsim_trace_generate(cfg.get(), &raw), "generating trace");
    Trace trace(raw);
    check(lfsim_trace_write(trace.get(), run.path_for(name + "_trace.txt").c_str()), "writing trace");
    run.record(name + "_trace.txt");

    const double fd = lfsim_trace_fd_ts(trace.get());
    const std::size_t max_lag = std::min<std::size_t>(100, lfsim_trace_length(trace.get()) / 10 - 1);
    std::string csv = "lag,empirical,target\n", plot;
    double sq = 0.0;
    for (std::size_t lag = 0; lag <= max_lag; ++lag) {
        double r = 0.0;
        check(lfsim_trace_autocorrelation(trace.get(), lag, &r), "autocorrelation");
        const double t = lfsim_target_autocorrelation(long(lag), fd);
        sq += (r - t) * (r - t);
        char line[96];
        std::snprintf(line, sizeof line, "%zu,%.10g,%.10g\n", lag, r, t);
        csv += line;
        std::snprintf(line, sizeof line, "%zu %.10g\n", lag, r);
        plot += line;
    }
    run.write(name + "_acf.csv", csv);
    run.write(name + "_acf.dat", plot);
    std::printf("trace: %zu samples, fd_ts = %g\nautocorrelation RMSE vs J0 over lags 0..%zu: %.5f\n",
                lfsim_trace_length(trace.get()), fd, max_lag, std::sqrt(sq / double(max_lag + 1)));
    run.manifest(cfg, name);
}

void estimate_chain(const Options& opt) {
    Run run("estimate-chain", opt);
    Config cfg = run.load(single_config(opt));
    const std::string name = scenario_name(cfg);
    lfsim_chain* raw = nullptr;
    check(lfsim_chain_estimate(cfg.get(), &raw), "estimating chain");
    Chain chain(raw);
    check(lfsim_chain_write_csv(chain.get(), run.path_for(name + "_P.csv").c_str()), "writing P");
    run.record(name + "_P.csv");

    const std::size_t n = lfsim_chain_n_states(chain.get());
    double violation = 0.0;
    check(lfsim_chain_convergence_violation(chain.get(), 50, &violation), "convergence check");
    std::string report;
    char line[160];
    std::snprintf(line, sizeof line, "states %zu\ntransitions %llu\nlambda %.6f\n", n,
                  static_cast<unsigned long long>(lfsim_chain_transitions(chain.get())), lfsim_chain_lambda(chain.get()));
    report += line;
    report += "pi";
    for (std::size_t l = 1; l <= n; ++l) {
        double p = 0.0;
        check(lfsim_chain_stationary(chain.get(), l, &p), "stationary distribution");
        std::snprintf(line, sizeof line, " %.6f", p);
        report += line;
    }
    std::snprintf(line, sizeof line, "\nconvergence inequality (d = 1..50): max violation %.3e (%s)\n", violation,
                  violation <= 1e-9 ? "holds" : "VIOLATED");
    report += line;
    std::cout << report;
    run.write(name + "_chain.txt", report);
    run.manifest(cfg, name);
    if (violation > 1e-9) throw Failure{static_cast<int>(LFSIM_INVARIANT_ERROR), "convergence inequality violated"};
}

void curve(const std::string& command, const Options& opt, const std::vector<std::string>& forced) {
    Run run(command, opt);
    Config cfg = run.load(single_config(opt), forced);
    const std::string name = scenario_name(cfg);
    lfsim_curve* raw = nullptr;
    check(lfsim_curve_run(cfg.get(), LFSIM_CURVE_GOODPUT, &raw), "running curve");
    Curve c(raw);

    run.write(name + "_curve.csv", take([&] {
                  char* s = nullptr;
                  check(lfsim_curve_csv(c.get(), &s), "curve csv");
                  return s;
              }()));
    run.write(name + "_bounds.csv", take([&] {
                  char* s = nullptr;
                  check(lfsim_curve_bounds_csv(c.get(), &s), "bounds csv");
                  return s;
              }()));
    const std::pair<lfsim_plot_series, const char*> series[] = {{LFSIM_PLOT_GOODPUT_GAIN, "_goodput.dat"},
                                                                {LFSIM_PLOT_GOODPUT_GAIN_NORM, "_goodput_norm.dat"},
                                                                {LFSIM_PLOT_THROUGHPUT_GAIN, "_throughput.dat"},
                                                                {LFSIM_PLOT_BOUND, "_bound.dat"}};
    for (const auto& [s, suffix] : series) {
        char* text = nullptr;
        check(lfsim_curve_plot(c.get(), s, &text), "plot data");
        run.write(name + suffix, take(text));
    }

    lfsim_coefficients k{};
    lfsim_decay_fit fit{};
    check(lfsim_curve_coefficients(c.get(), &k), "coefficients");
    check(lfsim_curve_fit(c.get(), &fit), "decay fit");
    std::printf("%s: %zu delays, bound %s, lambda %.4f, a %.4f b %.4f c %.4f kappa %.4f\n", name.c_str(),
                lfsim_curve_size(c.get()), lfsim_curve_bound_name(c.get()), k.lambda, k.a, k.b, k.c, k.kappa);
    std::printf("decay rate %.4f +- %.4f over %zu points\n", fit.rate, fit.stderr_rate, fit.points);
    run.manifest(cfg, name);
}

void lte_example(const Options& opt) {
    Run run("lte-example", opt);
    Config cfg = run.load(single_config(opt));
    const std::string name = scenario_name(cfg);
    lfsim_lte_report* raw = nullptr;
    check(lfsim_lte_run(cfg.get(), &raw), "LTE example");
    LteReport report(raw);
    char* text = nullptr;
    check(lfsim_lte_text(report.get(), &text), "LTE report");
    const std::string body = take(text);
    std::cout << body;
    run.write(name + "_lte.txt", body);
    run.manifest(cfg, name);
}

void on_check(const char* name, int passed, int required, const char* detail, void* user) {
    auto* count = static_cast<std::size_t*>(user);
    ++*count;
    std::printf("%s  %s  %s\n", passed ? "PASS" : required ? "FAIL" : "WARN", name, detail);
    std::fflush(stdout);
}

int validate(const Options& opt, const std::string& configs_dir) {
    std::vector<std::string> paths = opt.configs;
    if (paths.empty()) {
        if (!fs::is_directory(configs_dir))
            throw Failure{static_cast<int>(LFSIM_DATA_ERROR), "config directory not found: " + configs_dir};
        for (const auto& e : fs::directory_iterator(configs_dir))
            if (e.path().extension() == ".conf") paths.push_back(e.path().string());
        std::sort(paths.begin(), paths.end());
    }
    Run run("validate", opt);
    std::vector<Config> owned;
    std::vector<const lfsim_config*> cfgs;
    for (const auto& p : paths) {
        owned.push_back(run.load(p));
        cfgs.push_back(owned.back().get());
    }
    std::size_t seen = 0, failed = 0;
    check(lfsim_validate(cfgs.data(), cfgs.size(), on_check, &seen, &failed), "validation");
    std::printf("%zu checks, %zu failed\n", seen, failed);
    return failed == 0 ? 0 : static_cast<int>(LFSIM_INVARIANT_ERROR);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Limited-feedback MIMO link simulator"};
    app.set_version_flag("--version", std::string(lfsim_version()));
    app.require_subcommand(1);

    Options opt;
    std::string configs_dir = "configs";
    auto common = [&](CLI::App* sub, bool multi) {
        if (multi) {
            sub->add_option("-c,--config", opt.configs, "Config file or run manifest (repeatable)");
        } else {
            sub->add_option("-c,--config", opt.configs, "Config file or run manifest")->required()->expected(1);
        }
        sub->add_option("--set", opt.overrides, "Override as section.key=value (repeatable)");
        sub->add_option("-o,--out", opt.out, "Output directory");
        sub->add_option("--threads", opt.threads, "Worker thread cap");
        sub->add_flag("--force-uniform-pi", opt.force_uniform_pi, "Use pi = 1/N in the bound coefficients");
    };

    auto* fading = app.add_subcommand("gen-fading", "Generate a fading trace and its autocorrelation report");
    auto* chain = app.add_subcommand("estimate-chain", "Estimate the feedback chain: P, pi and lambda");
    auto* gp = app.add_subcommand("curve", "Goodput and throughput curves with bounds");
    auto* zf = app.add_subcommand("zf-curve", "Curve with the zero-forcing receiver");
    auto* sm = app.add_subcommand("sm-curve", "Curve with precoded spatial multiplexing");
    auto* lte = app.add_subcommand("lte-example", "LTE design example");
    auto* val = app.add_subcommand("validate", "Run the invariant suite");
    for (auto* s : {fading, chain, gp, zf, sm, lte}) common(s, false);
    common(val, true);
    val->add_option("--configs-dir", configs_dir, "Directory scanned for *.conf when no --config is given");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitUsage;
    }

    try {
        if (*fading) gen_fading(opt);
        if (*chain) estimate_chain(opt);
        if (*gp) curve("curve", opt, {});
        if (*zf) curve("zf-curve", opt, {"scenario.receiver=zf"});
        if (*sm) curve("sm-curve", opt, {"scenario.mode=precoded"});
        if (*lte) lte_example(opt);
        if (*val) return validate(opt, configs_dir);
    } catch (const Failure& f) {
        std::cerr << "lfsim: " << f.message << "\n";
        return f.code;
    } catch (const std::exception& e) {
        std::cerr << "lfsim: " << e.what() << "\n";
        return static_cast<int>(LFSIM_INVARIANT_ERROR);
    }
    return 0;
}
