/* C interface to the lfsim limited-feedback link simulator.
 *
 * Every call returns an lfsim_status. On failure the message is available
 * from lfsim_last_error() on the calling thread until the next failing call.
 * Handles are opaque and owned by the caller; release each with its _free.
 * Strings returned through char** are released with lfsim_string_free.
 * Codebook and state indices are 1-based.
 */
#ifndef LFSIM_LFSIM_H
#define LFSIM_LFSIM_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define LFSIM_API __declspec(dllexport)
#elif defined(LFSIM_BUILDING)
#define LFSIM_API __attribute__((visibility("default")))
#else
#define LFSIM_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
    LFSIM_OK = 0,
    LFSIM_INVALID_ARGUMENT = 1,
    LFSIM_CONFIG_ERROR = 2,
    LFSIM_DATA_ERROR = 3,
    LFSIM_INVARIANT_ERROR = 4,
    LFSIM_INTERNAL_ERROR = 5
} lfsim_status;

typedef struct lfsim_config lfsim_config;
typedef struct lfsim_trace lfsim_trace;
typedef struct lfsim_codebook lfsim_codebook;
typedef struct lfsim_chain lfsim_chain;
typedef struct lfsim_curve lfsim_curve;
typedef struct lfsim_lte_report lfsim_lte_report;

LFSIM_API const char* lfsim_version(void);
LFSIM_API const char* lfsim_last_error(void);
LFSIM_API const char* lfsim_status_name(lfsim_status status);
LFSIM_API void lfsim_string_free(char* s);

/* Configuration: sectioned key = value text, or a run manifest (JSON). */
LFSIM_API lfsim_status lfsim_config_load(const char* path, lfsim_config** out);
LFSIM_API lfsim_status lfsim_config_parse(const char* text, const char* base_dir, lfsim_config** out);
/* "section.key=value". */
LFSIM_API lfsim_status lfsim_config_override(lfsim_config* cfg, const char* assignment);
LFSIM_API lfsim_status lfsim_config_get(const lfsim_config* cfg, const char* section, const char* key, char** value);
LFSIM_API int lfsim_config_has(const lfsim_config* cfg, const char* section, const char* key);
/* JSON object of sections with paths made absolute. */
LFSIM_API lfsim_status lfsim_config_to_json(const lfsim_config* cfg, char** json);
LFSIM_API void lfsim_config_free(lfsim_config* cfg);

/* Fading traces. The spec comes from [scenario] n_rx, n_tx, fd_ts and
 * [run] n_samples, seed. */
LFSIM_API lfsim_status lfsim_trace_generate(const lfsim_config* cfg, lfsim_trace** out);
LFSIM_API lfsim_status lfsim_trace_read(const char* path, lfsim_trace** out);
LFSIM_API lfsim_status lfsim_trace_write(const lfsim_trace* trace, const char* path);
LFSIM_API size_t lfsim_trace_length(const lfsim_trace* trace);
LFSIM_API double lfsim_trace_fd_ts(const lfsim_trace* trace);
/* Averaged over all entries; lag < length / 10. */
LFSIM_API lfsim_status lfsim_trace_autocorrelation(const lfsim_trace* trace, size_t lag, double* value);
LFSIM_API void lfsim_trace_free(lfsim_trace* trace);
/* J0(2 pi fd_ts lag). */
LFSIM_API double lfsim_target_autocorrelation(long lag, double fd_ts);

/* Codebooks. */
LFSIM_API lfsim_status lfsim_codebook_load(const char* path, lfsim_codebook** out);
LFSIM_API size_t lfsim_codebook_size(const lfsim_codebook* cb);
LFSIM_API size_t lfsim_codebook_n_tx(const lfsim_codebook* cb);
LFSIM_API size_t lfsim_codebook_n_streams(const lfsim_codebook* cb);
LFSIM_API double lfsim_codebook_min_distance(const lfsim_codebook* cb);
LFSIM_API size_t lfsim_codebook_warning_count(const lfsim_codebook* cb);
LFSIM_API const char* lfsim_codebook_warning(const lfsim_codebook* cb, size_t i);
LFSIM_API void lfsim_codebook_free(lfsim_codebook* cb);

/* Feedback chains. Estimated from [chain] segments x segment_length samples. */
LFSIM_API lfsim_status lfsim_chain_estimate(const lfsim_config* cfg, lfsim_chain** out);
LFSIM_API lfsim_status lfsim_chain_read_csv(const char* path, lfsim_chain** out);
LFSIM_API lfsim_status lfsim_chain_write_csv(const lfsim_chain* chain, const char* path);
LFSIM_API size_t lfsim_chain_n_states(const lfsim_chain* chain);
LFSIM_API double lfsim_chain_lambda(const lfsim_chain* chain);
LFSIM_API uint64_t lfsim_chain_transitions(const lfsim_chain* chain);
LFSIM_API lfsim_status lfsim_chain_transition(const lfsim_chain* chain, size_t from, size_t to, double* value);
LFSIM_API lfsim_status lfsim_chain_stationary(const lfsim_chain* chain, size_t state, double* value);
/* max over l and d = 1..max_d of dev^2 - lambda^d / pi_l. */
LFSIM_API lfsim_status lfsim_chain_convergence_violation(const lfsim_chain* chain, unsigned max_d, double* value);
LFSIM_API void lfsim_chain_free(lfsim_chain* chain);

/* Goodput curves. */
typedef struct {
    unsigned d;
    double rho_d;
    double rho_inf;
    double goodput_gain;
    double goodput_gain_norm;
    double goodput_stderr;
    double throughput_gain;
    double throughput_gain_norm;
    double throughput_stderr;
    double bound_primary;
    double bound_prop1;
    double bound_prop2;
    double bound_noise_limited;
    size_t n_samples;
} lfsim_curve_point;

typedef struct {
    double a, b, c, kappa, lambda, r;
    size_t n_states;
} lfsim_coefficients;

typedef struct {
    double rate;
    double stderr_rate;
    size_t points;
} lfsim_decay_fit;

typedef enum {
    LFSIM_CURVE_GOODPUT = 0,
    LFSIM_CURVE_THROUGHPUT = 1
} lfsim_curve_kind;

typedef enum {
    LFSIM_PLOT_GOODPUT_GAIN = 0,
    LFSIM_PLOT_GOODPUT_GAIN_NORM = 1,
    LFSIM_PLOT_THROUGHPUT_GAIN = 2,
    LFSIM_PLOT_BOUND = 3
} lfsim_plot_series;

LFSIM_API lfsim_status lfsim_curve_run(const lfsim_config* cfg, lfsim_curve_kind kind, lfsim_curve** out);
LFSIM_API size_t lfsim_curve_size(const lfsim_curve* curve);
LFSIM_API lfsim_status lfsim_curve_point_at(const lfsim_curve* curve, size_t i, lfsim_curve_point* out);
LFSIM_API lfsim_status lfsim_curve_coefficients(const lfsim_curve* curve, lfsim_coefficients* out);
LFSIM_API lfsim_status lfsim_curve_fit(const lfsim_curve* curve, lfsim_decay_fit* out);
LFSIM_API const char* lfsim_curve_bound_name(const lfsim_curve* curve);
LFSIM_API lfsim_status lfsim_curve_csv(const lfsim_curve* curve, char** csv);
LFSIM_API lfsim_status lfsim_curve_bounds_csv(const lfsim_curve* curve, char** csv);
LFSIM_API lfsim_status lfsim_curve_plot(const lfsim_curve* curve, lfsim_plot_series series, char** text);
LFSIM_API void lfsim_curve_free(lfsim_curve* curve);

/* LTE design example. */
LFSIM_API lfsim_status lfsim_lte_run(const lfsim_config* cfg, lfsim_lte_report** out);
LFSIM_API double lfsim_lte_lambda(const lfsim_lte_report* report);
LFSIM_API size_t lfsim_lte_delay_count(const lfsim_lte_report* report);
LFSIM_API lfsim_status lfsim_lte_normalized_gain(const lfsim_lte_report* report, size_t i, double* value);
LFSIM_API lfsim_status lfsim_lte_text(const lfsim_lte_report* report, char** text);
LFSIM_API void lfsim_lte_report_free(lfsim_lte_report* report);

/* Invariant suite. A config with an [lte] section runs as the LTE example;
 * the others run as curves. `failed` counts failed required checks; a failed
 * advisory check (required == 0) is reported but not counted. */
typedef void (*lfsim_check_callback)(const char* name, int passed, int required, const char* detail, void* user);

LFSIM_API lfsim_status lfsim_validate(const lfsim_config* const* cfgs, size_t count, lfsim_check_callback callback,
                                      void* user, size_t* failed);

#ifdef __cplusplus
}
#endif

#endif /* LFSIM_LFSIM_H */
