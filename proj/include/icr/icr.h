/* C interface to the icr library. All strings are UTF-8. Strings returned
 * through char** must be released with icr_string_free. After a call that
 * returns something other than ICR_OK, icr_last_error() describes the
 * failure; the message is per thread and valid until the next failing call. */
#ifndef ICR_ICR_H
#define ICR_ICR_H

#include <stddef.h>

#if defined(ICR_BUILDING_LIBRARY)
#define ICR_API __attribute__((visibility("default")))
#else
#define ICR_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum icr_status {
  ICR_OK = 0,
  ICR_E_INVALID_ARGUMENT = 1,
  ICR_E_NON_SQUARE = 2,
  ICR_E_BAD_SIZE = 3,
  ICR_E_NON_POSITIVE_ENTRY = 4,
  ICR_E_RECIPROCITY = 5,
  ICR_E_BAD_DIAGONAL = 6,
  ICR_E_MISSING_DIAGONAL = 7,
  ICR_E_ASYMMETRIC_MISSING = 8,
  ICR_E_NO_CONVERGENCE = 9,
  ICR_E_DISCONNECTED = 10,
  ICR_E_NOT_SPANNING_TREE = 11,
  ICR_E_ENTRY_MISMATCH = 12,
  ICR_E_INFEASIBLE_MISSING = 13,
  ICR_E_OUT_OF_RANGE = 14,
  ICR_E_INSUFFICIENT_SAMPLES = 15,
  ICR_E_METHOD_MISMATCH = 16,
  ICR_E_PARSE = 17,
  ICR_E_IO = 18,
  ICR_E_INTERNAL = 99
} icr_status;

typedef enum icr_method { ICR_UNBOUNDED = 0, ICR_BOUNDED = 1, ICR_DISCRETE = 2 } icr_method;

typedef enum icr_format { ICR_FORMAT_TEXT = 0, ICR_FORMAT_KV = 1, ICR_FORMAT_JSON = 2 } icr_format;

typedef struct icr_matrix icr_matrix;
typedef struct icr_report icr_report;

ICR_API const char* icr_version(void);
ICR_API const char* icr_last_error(void);
/* Line and column (1-based) of the last parse or validation error, 0 if none. */
ICR_API void icr_last_error_location(int* line, int* column);
ICR_API const char* icr_status_name(icr_status status);
ICR_API void icr_string_free(char* s);

/* ---- matrices ---- */
ICR_API icr_status icr_matrix_parse(const char* text, icr_matrix** out);
ICR_API icr_status icr_matrix_load(const char* path, icr_matrix** out);
ICR_API void icr_matrix_free(icr_matrix* m);
ICR_API int icr_matrix_size(const icr_matrix* m);
ICR_API int icr_matrix_missing(const icr_matrix* m);
/* 0-based; writes NAN for a missing entry. */
ICR_API icr_status icr_matrix_get(const icr_matrix* m, int i, int j, double* value);
ICR_API icr_status icr_matrix_render(const icr_matrix* m, char** out);

/* ---- analysis ---- */
typedef struct icr_analyze_options {
  icr_method method;
  double threshold;
  int allow_method_mismatch;
  int has_ri_override;
  double ri_override;
  /* Simulation results table whose cells supplement the published values. NULL for none. */
  const char* ri_table_path;
} icr_analyze_options;

ICR_API void icr_analyze_options_init(icr_analyze_options* options);

/* Graph summary always; completion and verdict when the graph is connected.
 * A disconnected matrix still yields a report (icr_report_has_verdict == 0). */
ICR_API icr_status icr_report_create(const icr_matrix* m, const icr_analyze_options* options, icr_report** out);
ICR_API void icr_report_free(icr_report* r);
ICR_API int icr_report_has_verdict(const icr_report* r);
ICR_API int icr_report_accepted(const icr_report* r);
ICR_API double icr_report_cr(const icr_report* r);
ICR_API double icr_report_ci(const icr_report* r);
ICR_API double icr_report_lambda_max(const icr_report* r);
ICR_API icr_status icr_report_render(const icr_report* r, icr_format format, char** out);

/* Optimal completion; the filled matrix is rendered in matrix-file syntax. */
ICR_API icr_status icr_complete(const icr_matrix* m, icr_method method, char** filled, double* lambda_max,
                                double* ci);

/* ---- random index ---- */
/* source receives a static string: published, simulated, approximated or override. */
ICR_API icr_status icr_ri_lookup(int n, int m, const char* ri_table_path, double* ri, const char** source);
ICR_API icr_status icr_ri_approximate(int n, int m, double* ri);

typedef void (*icr_progress_fn)(long long kept, long long target, void* user);

typedef struct icr_simulation_options {
  int n;
  int m;
  long long samples;
  unsigned long long seed;
  int jobs;
  icr_progress_fn progress; /* may be NULL */
  void* progress_user;
} icr_simulation_options;

typedef struct icr_simulation_result {
  int n;
  int m;
  unsigned long long seed;
  double ri;
  double std_error;
  long long samples_kept;
  long long samples_rejected;
  long long samples_unconverged;
} icr_simulation_result;

ICR_API unsigned long long icr_default_seed(void);
ICR_API icr_status icr_simulate(const icr_simulation_options* options, icr_simulation_result* result);
ICR_API icr_status icr_simulation_table(const icr_simulation_result* rows, size_t count, char** out);

/* Bounded CI of the 4x4 parametric example over alpha in {1/5..5} and beta over the scale. */
ICR_API icr_status icr_table4(icr_format format, char** out);

/* ---- service ---- */
/* Blocks serving HTTP until the process ends. state_dir may be NULL. */
ICR_API icr_status icr_serve(const char* host, int port, const char* state_dir);

#ifdef __cplusplus
}
#endif

#endif
