#include "lfsim/lfsim.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <memory>
#include <new>
#include <optional>
#include <sstream>
#include <string>
#include <variant>

#include "lfsim/codebook.hpp"
#include "lfsim/config.hpp"
#include "lfsim/error.hpp"
#include "lfsim/fading.hpp"
#include "lfsim/harness.hpp"
#include "lfsim/markov.hpp"
#include "lfsim/rng.hpp"
#include "lfsim/validate.hpp"

struct lfsim_config {
    lfsim::ConfigFile file;
};

struct lfsim_trace {
    lfsim::ChannelTrace trace;
};

struct lfsim_codebook {
    std::variant<lfsim::BeamCodebook, lfsim::PrecoderCodebook> cb;
    std::vector<std::string> warnings;
};

struct lfsim_chain {
    lfsim::ChainAnalysis chain;
};

struct lfsim_curve {
    lfsim::GoodputCurve curve;
};

struct lfsim_lte_report {
    lfsim::LteReport report;
};

namespace {

thread_local std::string g_last_error;

lfsim_status set_error(lfsim_status status, const std::string& what) {
    g_last_error = what;
    return status;
}

/// Runs `body`, translating exceptions into status codes.
template <class F>
lfsim_status guarded(F&& body) {
    try {
        body();
        return LFSIM_OK;
    } catch (const lfsim::Error& e) {
        return set_error(static_cast<lfsim_status>(e.kind()), e.what());
    } catch (const std::bad_alloc&) {
        return set_error(LFSIM_INTERNAL_ERROR, "out of memory");
    } catch (const std::exception& e) {
        return set_error(LFSIM_INTERNAL_ERROR, e.what());
    } catch (...) {
        return set_error(LFSIM_INTERNAL_ERROR, "unknown error");
    }
}

lfsim_status null_argument(const char* what) {
    return set_error(LFSIM_INVALID_ARGUMENT, std::string(what) + " is null");
}

char* duplicate(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

bool is_lte(const lfsim::ConfigFile& f) { return f.sections().count("lte") != 0; }

}  // namespace

extern "C" {

const char* lfsim_version(void) { return LFSIM_VERSION; }

const char* lfsim_last_error(void) { return g_last_error.c_str(); }

const char* lfsim_status_name(lfsim_status status) {
    switch (status) {
        case LFSIM_OK: return "ok";
        case LFSIM_INVALID_ARGUMENT: return "invalid argument";
        case LFSIM_CONFIG_ERROR: return "config error";
        case LFSIM_DATA_ERROR: return "data error";
        case LFSIM_INVARIANT_ERROR: return "invariant failure";
        case LFSIM_INTERNAL_ERROR: return "internal error";
    }
    return "unknown status";
}

void lfsim_string_free(char* s) { std::free(s); }

// Configuration

lfsim_status lfsim_config_load(const char* path, lfsim_config** out) {
    if (!path) return null_argument("path");
    if (!out) return null_argument("out");
    return guarded([&] { *out = new lfsim_config{lfsim::ConfigFile::load(path)}; });
}

lfsim_status lfsim_config_parse(const char* text, const char* base_dir, lfsim_config** out) {
    if (!text) return null_argument("text");
    if (!out) return null_argument("out");
    return guarded([&] {
        std::istringstream in(text);
        auto cfg = std::make_unique<lfsim_config>();
        const char* first = text + std::strspn(text, " \t\r\n");
        cfg->file = *first == '{' ? lfsim::ConfigFile::parse_json(text) : lfsim::ConfigFile::parse(in);
        if (base_dir) cfg->file.set_base_dir(base_dir);
        *out = cfg.release();
    });
}

lfsim_status lfsim_config_override(lfsim_config* cfg, const char* assignment) {
    if (!cfg) return null_argument("cfg");
    if (!assignment) return null_argument("assignment");
    return guarded([&] { cfg->file.apply_override(assignment); });
}

lfsim_status lfsim_config_get(const lfsim_config* cfg, const char* section, const char* key, char** value) {
    if (!cfg) return null_argument("cfg");
    if (!section || !key) return null_argument("section/key");
    if (!value) return null_argument("value");
    return guarded([&] { *value = duplicate(cfg->file.get(section, key)); });
}

int lfsim_config_has(const lfsim_config* cfg, const char* section, const char* key) {
    return cfg && section && key && cfg->file.has(section, key);
}

lfsim_status lfsim_config_to_json(const lfsim_config* cfg, char** json) {
    if (!cfg) return null_argument("cfg");
    if (!json) return null_argument("json");
    return guarded([&] { *json = duplicate(lfsim::resolved_copy(cfg->file).to_json()); });
}

void lfsim_config_free(lfsim_config* cfg) { delete cfg; }

// Fading

lfsim_status lfsim_trace_generate(const lfsim_config* cfg, lfsim_trace** out) {
    if (!cfg) return null_argument("cfg");
    if (!out) return null_argument("out");
    return guarded([&] {
        lfsim::FadingSpec spec = lfsim::fading_from_config(cfg->file);
        spec.seed = lfsim::substream_seed(spec.seed, "fading.cell1");
        *out = new lfsim_trace{lfsim::generate_trace(spec)};
    });
}

lfsim_status lfsim_trace_read(const char* path, lfsim_trace** out) {
    if (!path) return null_argument("path");
    if (!out) return null_argument("out");
    return guarded([&] { *out = new lfsim_trace{lfsim::read_trace(path)}; });
}

lfsim_status lfsim_trace_write(const lfsim_trace* trace, const char* path) {
    if (!trace) return null_argument("trace");
    if (!path) return null_argument("path");
    return guarded([&] { lfsim::write_trace(trace->trace, path); });
}

size_t lfsim_trace_length(const lfsim_trace* trace) { return trace ? trace->trace.length() : 0; }

double lfsim_trace_fd_ts(const lfsim_trace* trace) { return trace ? trace->trace.spec().fd_ts : 0.0; }

lfsim_status lfsim_trace_autocorrelation(const lfsim_trace* trace, size_t lag, double* value) {
    if (!trace) return null_argument("trace");
    if (!value) return null_argument("value");
    return guarded([&] { *value = lfsim::empirical_autocorrelation(trace->trace, lag); });
}

void lfsim_trace_free(lfsim_trace* trace) { delete trace; }

double lfsim_target_autocorrelation(long lag, double fd_ts) { return lfsim::target_autocorrelation(lag, fd_ts); }

// Codebooks

lfsim_status lfsim_codebook_load(const char* path, lfsim_codebook** out) {
    if (!path) return null_argument("path");
    if (!out) return null_argument("out");
    return guarded([&] {
        std::ifstream in(path);
        if (!in) lfsim::fail(lfsim::ErrorKind::Data, std::string("cannot open codebook file: ") + path);
        const lfsim::CodebookFile file = lfsim::parse_codebook(in, path);
        std::vector<std::string> warnings;
        try {
            if (file.n_streams == 1) {
                *out = new lfsim_codebook{lfsim::make_beam_codebook(file, &warnings), {}};
            } else {
                *out = new lfsim_codebook{lfsim::make_precoder_codebook(file, &warnings), {}};
            }
        } catch (const lfsim::Error& e) {
            throw lfsim::Error(e.kind(), std::string(path) + ": " + e.what());
        }
        (*out)->warnings = std::move(warnings);
    });
}

size_t lfsim_codebook_size(const lfsim_codebook* cb) {
    return cb ? std::visit([](const auto& c) { return c.size(); }, cb->cb) : 0;
}

size_t lfsim_codebook_n_tx(const lfsim_codebook* cb) {
    return cb ? std::visit([](const auto& c) { return c.n_tx(); }, cb->cb) : 0;
}

size_t lfsim_codebook_n_streams(const lfsim_codebook* cb) {
    if (!cb) return 0;
    if (const auto* p = std::get_if<lfsim::PrecoderCodebook>(&cb->cb)) return p->n_streams();
    return 1;
}

double lfsim_codebook_min_distance(const lfsim_codebook* cb) {
    return cb ? std::visit([](const auto& c) { return lfsim::min_chordal_distance(c); }, cb->cb) : 0.0;
}

size_t lfsim_codebook_warning_count(const lfsim_codebook* cb) { return cb ? cb->warnings.size() : 0; }

const char* lfsim_codebook_warning(const lfsim_codebook* cb, size_t i) {
    return cb && i < cb->warnings.size() ? cb->warnings[i].c_str() : nullptr;
}

void lfsim_codebook_free(lfsim_codebook* cb) { delete cb; }

// Chains

lfsim_status lfsim_chain_estimate(const lfsim_config* cfg, lfsim_chain** out) {
    if (!cfg) return null_argument("cfg");
    if (!out) return null_argument("out");
    return guarded([&] {
        const lfsim::ScenarioConfig sc = lfsim::scenario_from_config(cfg->file);
        const lfsim::ChainSettings ch = lfsim::chain_from_config(cfg->file);
        *out = new lfsim_chain{lfsim::estimate_feedback_chain(sc, ch.segments, ch.segment_length)};
    });
}

lfsim_status lfsim_chain_read_csv(const char* path, lfsim_chain** out) {
    if (!path) return null_argument("path");
    if (!out) return null_argument("out");
    return guarded([&] {
        lfsim::ChainAnalysis a;
        a.p = lfsim::read_stochastic_csv(path);
        a.pi = lfsim::stationary_distribution(a.p);
        a.lambda = std::clamp(lfsim::second_eigenvalue(lfsim::reversibilization(a.p, a.pi)), 0.0, 1.0);
        *out = new lfsim_chain{std::move(a)};
    });
}

lfsim_status lfsim_chain_write_csv(const lfsim_chain* chain, const char* path) {
    if (!chain) return null_argument("chain");
    if (!path) return null_argument("path");
    return guarded([&] { lfsim::write_stochastic_csv(chain->chain.p, path); });
}

size_t lfsim_chain_n_states(const lfsim_chain* chain) { return chain ? chain->chain.p.n_states() : 0; }

double lfsim_chain_lambda(const lfsim_chain* chain) { return chain ? chain->chain.lambda : 0.0; }

uint64_t lfsim_chain_transitions(const lfsim_chain* chain) { return chain ? chain->chain.transitions : 0; }

lfsim_status lfsim_chain_transition(const lfsim_chain* chain, size_t from, size_t to, double* value) {
    if (!chain) return null_argument("chain");
    if (!value) return null_argument("value");
    const size_t n = chain->chain.p.n_states();
    if (from < 1 || from > n || to < 1 || to > n)
        return set_error(LFSIM_INVALID_ARGUMENT, "state index out of range (indices are 1-based)");
    *value = chain->chain.p(from - 1, to - 1);
    return LFSIM_OK;
}

lfsim_status lfsim_chain_stationary(const lfsim_chain* chain, size_t state, double* value) {
    if (!chain) return null_argument("chain");
    if (!value) return null_argument("value");
    if (state < 1 || state > chain->chain.pi.size())
        return set_error(LFSIM_INVALID_ARGUMENT, "state index out of range (indices are 1-based)");
    *value = chain->chain.pi[state - 1];
    return LFSIM_OK;
}

lfsim_status lfsim_chain_convergence_violation(const lfsim_chain* chain, unsigned max_d, double* value) {
    if (!chain) return null_argument("chain");
    if (!value) return null_argument("value");
    return guarded([&] { *value = lfsim::max_convergence_violation(chain->chain, max_d); });
}

void lfsim_chain_free(lfsim_chain* chain) { delete chain; }

// Curves

lfsim_status lfsim_curve_run(const lfsim_config* cfg, lfsim_curve_kind kind, lfsim_curve** out) {
    if (!cfg) return null_argument("cfg");
    if (!out) return null_argument("out");
    if (kind != LFSIM_CURVE_GOODPUT && kind != LFSIM_CURVE_THROUGHPUT)
        return set_error(LFSIM_INVALID_ARGUMENT, "unknown curve kind");
    return guarded([&] {
        const lfsim::ScenarioConfig sc = lfsim::scenario_from_config(cfg->file);
        *out = new lfsim_curve{kind == LFSIM_CURVE_GOODPUT ? lfsim::simulate_goodput_curve(sc)
                                                           : lfsim::simulate_throughput_curve(sc)};
    });
}

size_t lfsim_curve_size(const lfsim_curve* curve) { return curve ? curve->curve.records.size() : 0; }

lfsim_status lfsim_curve_point_at(const lfsim_curve* curve, size_t i, lfsim_curve_point* out) {
    if (!curve) return null_argument("curve");
    if (!out) return null_argument("out");
    if (i >= curve->curve.records.size()) return set_error(LFSIM_INVALID_ARGUMENT, "curve point out of range");
    const lfsim::CurveRecord& r = curve->curve.records[i];
    *out = {r.d,
            r.rho_d,
            r.rho_inf,
            r.goodput_gain,
            r.goodput_gain_norm,
            r.goodput_stderr,
            r.throughput_gain,
            r.throughput_gain_norm,
            r.throughput_stderr,
            r.bound_primary,
            r.bound_prop1,
            r.bound_prop2,
            r.bound_noise_limited,
            r.n_samples};
    return LFSIM_OK;
}

lfsim_status lfsim_curve_coefficients(const lfsim_curve* curve, lfsim_coefficients* out) {
    if (!curve) return null_argument("curve");
    if (!out) return null_argument("out");
    const lfsim::BoundCoefficients& k = curve->curve.coefficients;
    *out = {k.a, k.b, k.c, k.kappa, k.lambda, k.r, k.n_states};
    return LFSIM_OK;
}

lfsim_status lfsim_curve_fit(const lfsim_curve* curve, lfsim_decay_fit* out) {
    if (!curve) return null_argument("curve");
    if (!out) return null_argument("out");
    const lfsim::DecayFit& f = curve->curve.goodput_fit;
    *out = {f.rate, f.stderr, f.points};
    return LFSIM_OK;
}

const char* lfsim_curve_bound_name(const lfsim_curve* curve) {
    return curve ? lfsim::to_string(curve->curve.primary) : "";
}

lfsim_status lfsim_curve_csv(const lfsim_curve* curve, char** csv) {
    if (!curve) return null_argument("curve");
    if (!csv) return null_argument("csv");
    return guarded([&] { *csv = duplicate(lfsim::curve_csv(curve->curve)); });
}

lfsim_status lfsim_curve_bounds_csv(const lfsim_curve* curve, char** csv) {
    if (!curve) return null_argument("curve");
    if (!csv) return null_argument("csv");
    return guarded([&] { *csv = duplicate(lfsim::bounds_csv(curve->curve)); });
}

lfsim_status lfsim_curve_plot(const lfsim_curve* curve, lfsim_plot_series series, char** text) {
    if (!curve) return null_argument("curve");
    if (!text) return null_argument("text");
    return guarded([&] {
        std::vector<unsigned> x;
        std::vector<double> y;
        for (const auto& r : curve->curve.records) {
            x.push_back(r.d);
            switch (series) {
                case LFSIM_PLOT_GOODPUT_GAIN: y.push_back(r.goodput_gain); break;
                case LFSIM_PLOT_GOODPUT_GAIN_NORM: y.push_back(r.goodput_gain_norm); break;
                case LFSIM_PLOT_THROUGHPUT_GAIN: y.push_back(r.throughput_gain); break;
                case LFSIM_PLOT_BOUND: y.push_back(r.bound_primary); break;
                default: lfsim::fail(lfsim::ErrorKind::InvalidArgument, "unknown plot series");
            }
        }
        *text = duplicate(lfsim::plot_text(x, y));
    });
}

void lfsim_curve_free(lfsim_curve* curve) { delete curve; }

// LTE

lfsim_status lfsim_lte_run(const lfsim_config* cfg, lfsim_lte_report** out) {
    if (!cfg) return null_argument("cfg");
    if (!out) return null_argument("out");
    return guarded([&] { *out = new lfsim_lte_report{lfsim::lte_design_example(lfsim::lte_from_config(cfg->file))}; });
}

double lfsim_lte_lambda(const lfsim_lte_report* report) { return report ? report->report.chain.lambda : 0.0; }

size_t lfsim_lte_delay_count(const lfsim_lte_report* report) {
    return report ? report->report.normalized_gain.size() : 0;
}

lfsim_status lfsim_lte_normalized_gain(const lfsim_lte_report* report, size_t i, double* value) {
    if (!report) return null_argument("report");
    if (!value) return null_argument("value");
    if (i >= report->report.normalized_gain.size()) return set_error(LFSIM_INVALID_ARGUMENT, "delay index out of range");
    *value = report->report.normalized_gain[i];
    return LFSIM_OK;
}

lfsim_status lfsim_lte_text(const lfsim_lte_report* report, char** text) {
    if (!report) return null_argument("report");
    if (!text) return null_argument("text");
    return guarded([&] { *text = duplicate(lfsim::lte_report_text(report->report)); });
}

void lfsim_lte_report_free(lfsim_lte_report* report) { delete report; }

// Validation

lfsim_status lfsim_validate(const lfsim_config* const* cfgs, size_t count, lfsim_check_callback callback, void* user,
                            size_t* failed) {
    if (!cfgs && count > 0) return null_argument("cfgs");
    if (!failed) return null_argument("failed");
    return guarded([&] {
        lfsim::SuiteInput input;
        for (size_t i = 0; i < count; ++i) {
            if (!cfgs[i]) lfsim::fail(lfsim::ErrorKind::InvalidArgument, "config entry is null");
            if (is_lte(cfgs[i]->file)) {
                if (input.lte) lfsim::fail(lfsim::ErrorKind::Config, "more than one LTE config given");
                input.lte = lfsim::lte_from_config(cfgs[i]->file);
            } else {
                input.scenarios.push_back(lfsim::scenario_from_config(cfgs[i]->file));
            }
        }
        size_t n_failed = 0;
        lfsim::run_validation(input, [&](const lfsim::CheckResult& r) {
            if (!r.passed && r.required) ++n_failed;
            if (callback) callback(r.name.c_str(), r.passed ? 1 : 0, r.required ? 1 : 0, r.detail.c_str(), user);
        });
        *failed = n_failed;
    });
}

}  // extern "C"
