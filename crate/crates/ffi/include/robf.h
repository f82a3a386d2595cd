#ifndef ROBF_H
#define ROBF_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum RobfStatus {
  ROBF_STATUS_OK = 0,
  ROBF_STATUS_NULL_POINTER = 1,
  ROBF_STATUS_INVALID_UTF8 = 2,
  ROBF_STATUS_PARSE_ERROR = 3,
  ROBF_STATUS_INVALID_INSTANCE = 4,
  ROBF_STATUS_DIMENSION_MISMATCH = 5,
  ROBF_STATUS_INFEASIBLE_SOLUTION = 6,
  ROBF_STATUS_BUDGET_EXCEEDED = 7,
  ROBF_STATUS_PRECONDITION = 8,
  ROBF_STATUS_NUMERICAL = 9,
  ROBF_STATUS_BUFFER_TOO_SMALL = 10,
  ROBF_STATUS_PANIC = 11,
} RobfStatus;

// Opaque validated instance.
typedef struct RobfInstance RobfInstance;

// Opaque solve result.
typedef struct RobfReport RobfReport;

typedef struct RobfEvaluation {
  double upper;
  double lower;
  double hurwicz;
} RobfEvaluation;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread; empty after a success.
// The pointer stays valid until the next call on the same thread.
const char *robf_last_error(void);

// Parses and validates a JSON instance.
//
// # Safety
// `json` must be a NUL-terminated string and `out` a valid pointer.
enum RobfStatus robf_instance_from_json(const char *json, struct RobfInstance **out);

// # Safety
// `inst` must come from [`robf_instance_from_json`] and not be freed twice.
void robf_instance_free(struct RobfInstance *inst);

// Number of scenarios, or 0 for a null handle.
//
// # Safety
// `inst` must be null or a live instance handle.
size_t robf_instance_num_scenarios(const struct RobfInstance *inst);

// Solution dimension, or 0 for a null handle.
//
// # Safety
// `inst` must be null or a live instance handle.
size_t robf_instance_dim(const struct RobfInstance *inst);

// Upper and lower expectation and Hurwicz value of `x`.
//
// # Safety
// `x` must point to `len` doubles and `out` must be valid.
enum RobfStatus robf_evaluate(const struct RobfInstance *inst,
                              const double *x,
                              size_t len,
                              struct RobfEvaluation *out);

// `Bel(A)` for the 1-based scenario indices in `set`.
//
// # Safety
// `set` must point to `len` values and `out` must be valid.
enum RobfStatus robf_belief(const struct RobfInstance *inst,
                            const size_t *set,
                            size_t len,
                            double *out);

// Solves with the named method (`"auto"`, `"decomposition"`, ...); a null
// method means `"auto"` and a zero budget the library default.
//
// # Safety
// `method` must be null or NUL-terminated; `out` must be valid.
enum RobfStatus robf_solve(const struct RobfInstance *inst,
                           const char *method,
                           uint64_t budget,
                           struct RobfReport **out);

// # Safety
// `report` must come from [`robf_solve`] and not be freed twice.
void robf_report_free(struct RobfReport *report);

// Hurwicz value of the reported solution; NaN for a null handle.
//
// # Safety
// `report` must be null or a live report handle.
double robf_report_objective(const struct RobfReport *report);

// Length of the solution vector; 0 for a null handle.
//
// # Safety
// `report` must be null or a live report handle.
size_t robf_report_dim(const struct RobfReport *report);

// Copies the solution into `buf`, which must hold `robf_report_dim` values.
//
// # Safety
// `buf` must point to `len` writable doubles.
enum RobfStatus robf_report_x(const struct RobfReport *report, double *buf, size_t len);

// Method tag of the report as a static string; empty for a null handle.
//
// # Safety
// `report` must be null or a live report handle.
const char *robf_report_method(const struct RobfReport *report);

// The report as a JSON object.
//
// # Safety
// `out` must be valid; release the string with [`robf_string_free`].
enum RobfStatus robf_report_json(const struct RobfReport *report, char **out);

// Reads a JSON instance (typically with `fuzzy_mass`) and writes it back
// with the reduced crisp mass.
//
// # Safety
// `json` must be NUL-terminated and `out` valid; release the string with
// [`robf_string_free`].
enum RobfStatus robf_reduce_fuzzy_json(const char *json, char **out);

// The big-M model in LP format. A NaN `big_m` selects the default.
//
// # Safety
// `out` must be valid; release the string with [`robf_string_free`].
enum RobfStatus robf_export_mip(const struct RobfInstance *inst, double big_m, char **out);

// # Safety
// `s` must be null or a string returned by this library, freed once.
void robf_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ROBF_H */
