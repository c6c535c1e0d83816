// Exercises the shared library through its C header only.
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <string>

#include "lfsim/lfsim.h"

namespace {

const std::string kSource = LFSIM_SOURCE_DIR;

const char* kCurve = R"([scenario]
name = capi
n_tx = 2
n_rx = 2
alpha1 = 4
alpha2 = 4
fd_ts = 0.025
noise_mode = sampled
codebook = ../codebooks/grass_2x1_n4.cb
[run]
delays = 0..6
n_samples = 20000
seed = 7
[chain]
segments = 2
segment_length = 20000
)";

lfsim_config* parse_curve() {
    lfsim_config* cfg = nullptr;
    REQUIRE(lfsim_config_parse(kCurve, (kSource + "/configs").c_str(), &cfg) == LFSIM_OK);
    return cfg;
}

std::string take(char* s) {
    std::string out = s ? s : "";
    lfsim_string_free(s);
    return out;
}

}  // namespace

TEST_CASE("status names and version") {
    CHECK(std::string(lfsim_status_name(LFSIM_OK)) == "ok");
    CHECK(std::string(lfsim_status_name(LFSIM_CONFIG_ERROR)) == "config error");
    CHECK(std::strlen(lfsim_version()) > 0);
}

TEST_CASE("null arguments are rejected") {
    lfsim_config* cfg = nullptr;
    CHECK(lfsim_config_parse(nullptr, nullptr, &cfg) == LFSIM_INVALID_ARGUMENT);
    CHECK(std::strlen(lfsim_last_error()) > 0);
    CHECK(lfsim_config_load("x", nullptr) == LFSIM_INVALID_ARGUMENT);
    CHECK(lfsim_curve_run(nullptr, LFSIM_CURVE_GOODPUT, nullptr) == LFSIM_INVALID_ARGUMENT);
    CHECK(lfsim_chain_lambda(nullptr) == 0.0);
    CHECK(lfsim_curve_size(nullptr) == 0);
    lfsim_config_free(nullptr);
    lfsim_curve_free(nullptr);
    lfsim_string_free(nullptr);
}

TEST_CASE("error kinds map to status codes") {
    lfsim_config* cfg = nullptr;
    CHECK(lfsim_config_parse("[scenario]\nbogus = 1\n", nullptr, &cfg) == LFSIM_CONFIG_ERROR);
    CHECK(std::string(lfsim_last_error()).find("bogus") != std::string::npos);
    CHECK(lfsim_config_load("/nonexistent/x.conf", &cfg) == LFSIM_DATA_ERROR);
    lfsim_codebook* cb = nullptr;
    CHECK(lfsim_codebook_load("/nonexistent/x.cb", &cb) == LFSIM_DATA_ERROR);
}

TEST_CASE("config access and overrides") {
    lfsim_config* cfg = parse_curve();
    char* v = nullptr;
    REQUIRE(lfsim_config_get(cfg, "run", "seed", &v) == LFSIM_OK);
    CHECK(take(v) == "7");
    CHECK(lfsim_config_override(cfg, "run.seed=8") == LFSIM_OK);
    REQUIRE(lfsim_config_get(cfg, "run", "seed", &v) == LFSIM_OK);
    CHECK(take(v) == "8");
    CHECK(lfsim_config_override(cfg, "run.nosuch=1") == LFSIM_CONFIG_ERROR);
    CHECK(lfsim_config_has(cfg, "scenario", "n_tx") == 1);
    CHECK(lfsim_config_has(cfg, "scenario", "receiver") == 0);
    CHECK(lfsim_config_get(cfg, "scenario", "receiver", &v) == LFSIM_CONFIG_ERROR);
    char* json = nullptr;
    REQUIRE(lfsim_config_to_json(cfg, &json) == LFSIM_OK);
    const std::string j = take(json);
    CHECK(j.find((kSource + "/codebooks/grass_2x1_n4.cb")) != std::string::npos);
    lfsim_config* back = nullptr;
    REQUIRE(lfsim_config_parse(("{\"config\": " + j + "}").c_str(), nullptr, &back) == LFSIM_OK);
    REQUIRE(lfsim_config_get(back, "run", "seed", &v) == LFSIM_OK);
    CHECK(take(v) == "8");
    lfsim_config_free(back);
    lfsim_config_free(cfg);
}

TEST_CASE("codebooks") {
    lfsim_codebook* cb = nullptr;
    REQUIRE(lfsim_codebook_load((kSource + "/codebooks/grass_4x1_n16.cb").c_str(), &cb) == LFSIM_OK);
    CHECK(lfsim_codebook_size(cb) == 16);
    CHECK(lfsim_codebook_n_tx(cb) == 4);
    CHECK(lfsim_codebook_n_streams(cb) == 1);
    CHECK(lfsim_codebook_min_distance(cb) > 0.0);
    CHECK(lfsim_codebook_warning_count(cb) == 0);
    CHECK(lfsim_codebook_warning(cb, 0) == nullptr);
    lfsim_codebook_free(cb);
    REQUIRE(lfsim_codebook_load((kSource + "/codebooks/lte_4x2_n16.cb").c_str(), &cb) == LFSIM_OK);
    CHECK(lfsim_codebook_n_streams(cb) == 2);
    lfsim_codebook_free(cb);
}

TEST_CASE("traces") {
    lfsim_config* cfg = parse_curve();
    lfsim_trace* t = nullptr;
    REQUIRE(lfsim_trace_generate(cfg, &t) == LFSIM_OK);
    CHECK(lfsim_trace_length(t) == 20000);
    CHECK(lfsim_trace_fd_ts(t) == 0.025);
    double r0 = 0.0, r10 = 0.0;
    REQUIRE(lfsim_trace_autocorrelation(t, 0, &r0) == LFSIM_OK);
    REQUIRE(lfsim_trace_autocorrelation(t, 10, &r10) == LFSIM_OK);
    CHECK(std::abs(r0 - 1.0) <= 0.05);
    CHECK(std::abs(r10 - lfsim_target_autocorrelation(10, 0.025)) < 0.1);
    CHECK(lfsim_trace_autocorrelation(t, 5000, &r10) == LFSIM_INVALID_ARGUMENT);
    const std::string path = (std::filesystem::temp_directory_path() / "lfsim_capi_trace.txt").string();
    REQUIRE(lfsim_trace_write(t, path.c_str()) == LFSIM_OK);
    lfsim_trace* back = nullptr;
    REQUIRE(lfsim_trace_read(path.c_str(), &back) == LFSIM_OK);
    CHECK(lfsim_trace_length(back) == 20000);
    std::remove(path.c_str());
    lfsim_trace_free(back);
    lfsim_trace_free(t);
    lfsim_config_free(cfg);
}

TEST_CASE("chains use 1-based indices") {
    lfsim_config* cfg = parse_curve();
    lfsim_chain* ch = nullptr;
    REQUIRE(lfsim_chain_estimate(cfg, &ch) == LFSIM_OK);
    CHECK(lfsim_chain_n_states(ch) == 4);
    CHECK(lfsim_chain_transitions(ch) > 0);
    const double lam = lfsim_chain_lambda(ch);
    CHECK(lam > 0.0);
    CHECK(lam < 1.0);
    double v = 0.0, row = 0.0, pis = 0.0;
    for (size_t j = 1; j <= 4; ++j) {
        REQUIRE(lfsim_chain_transition(ch, 1, j, &v) == LFSIM_OK);
        row += v;
        REQUIRE(lfsim_chain_stationary(ch, j, &v) == LFSIM_OK);
        pis += v;
    }
    CHECK(row == doctest::Approx(1.0));
    CHECK(pis == doctest::Approx(1.0));
    CHECK(lfsim_chain_transition(ch, 0, 1, &v) == LFSIM_INVALID_ARGUMENT);
    CHECK(lfsim_chain_stationary(ch, 5, &v) == LFSIM_INVALID_ARGUMENT);
    REQUIRE(lfsim_chain_convergence_violation(ch, 50, &v) == LFSIM_OK);
    CHECK(v <= 1e-9);
    const std::string path = (std::filesystem::temp_directory_path() / "lfsim_capi_p.csv").string();
    REQUIRE(lfsim_chain_write_csv(ch, path.c_str()) == LFSIM_OK);
    lfsim_chain* back = nullptr;
    REQUIRE(lfsim_chain_read_csv(path.c_str(), &back) == LFSIM_OK);
    CHECK(lfsim_chain_lambda(back) == doctest::Approx(lam).epsilon(1e-9));
    std::remove(path.c_str());
    lfsim_chain_free(back);
    lfsim_chain_free(ch);
    lfsim_config_free(cfg);
}

TEST_CASE("curves") {
    lfsim_config* cfg = parse_curve();
    lfsim_curve* c = nullptr;
    REQUIRE(lfsim_curve_run(cfg, LFSIM_CURVE_GOODPUT, &c) == LFSIM_OK);
    REQUIRE(lfsim_curve_size(c) == 7);
    lfsim_curve_point p{};
    REQUIRE(lfsim_curve_point_at(c, 0, &p) == LFSIM_OK);
    CHECK(p.d == 0);
    CHECK(p.goodput_gain == doctest::Approx(p.rho_d - p.rho_inf));
    CHECK(p.goodput_gain_norm == doctest::Approx(1.0));
    CHECK(p.n_samples == 20000);
    CHECK(lfsim_curve_point_at(c, 7, &p) == LFSIM_INVALID_ARGUMENT);
    lfsim_coefficients k{};
    REQUIRE(lfsim_curve_coefficients(c, &k) == LFSIM_OK);
    CHECK(k.n_states == 4);
    CHECK(k.r == 0.25);
    lfsim_decay_fit fit{};
    REQUIRE(lfsim_curve_fit(c, &fit) == LFSIM_OK);
    CHECK(fit.points >= 2);
    CHECK(std::string(lfsim_curve_bound_name(c)) == "prop1");
    char* s = nullptr;
    REQUIRE(lfsim_curve_csv(c, &s) == LFSIM_OK);
    CHECK(take(s).rfind("d,rho_d,", 0) == 0);
    REQUIRE(lfsim_curve_bounds_csv(c, &s) == LFSIM_OK);
    CHECK(take(s).rfind("d,bound_prop1,", 0) == 0);
    REQUIRE(lfsim_curve_plot(c, LFSIM_PLOT_GOODPUT_GAIN_NORM, &s) == LFSIM_OK);
    CHECK(take(s).rfind("0 1", 0) == 0);
    lfsim_curve_free(c);
    CHECK(lfsim_config_override(cfg, "run.delays=") == LFSIM_OK);
    CHECK(lfsim_curve_run(cfg, LFSIM_CURVE_GOODPUT, &c) == LFSIM_CONFIG_ERROR);
    lfsim_config_free(cfg);
}

TEST_CASE("validate reports through the callback") {
    lfsim_config* cfg = parse_curve();
    lfsim_config_override(cfg, "scenario.name=fig3_mrc");
    int calls = 0;
    size_t failed = 99;
    const lfsim_config* list[] = {cfg};
    auto cb = [](const char*, int, int, const char*, void* user) { ++*static_cast<int*>(user); };
    REQUIRE(lfsim_validate(list, 1, cb, &calls, &failed) == LFSIM_OK);
    CHECK(calls > 0);
    CHECK(failed <= size_t(calls));
    CHECK(lfsim_validate(list, 1, nullptr, nullptr, nullptr) == LFSIM_INVALID_ARGUMENT);
    lfsim_config_free(cfg);
}
