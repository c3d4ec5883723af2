#ifndef MOSAR_H
#define MOSAR_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum MosarStatus {
    MOSAR_STATUS_OK = 0,
    MOSAR_STATUS_NULL_POINTER = 1,
    MOSAR_STATUS_INVALID_ARGUMENT = 2,
    MOSAR_STATUS_UNKNOWN_PROBLEM = 3,
    MOSAR_STATUS_UNKNOWN_ALGORITHM = 4,
    MOSAR_STATUS_BUFFER_TOO_SMALL = 5,
    MOSAR_STATUS_OUT_OF_RANGE = 6,
    MOSAR_STATUS_EMPTY_INPUT = 7,
    MOSAR_STATUS_PANIC = 8,
} MosarStatus;

/**
 * Opaque problem handle.
 */
typedef struct MosarProblem MosarProblem;

/**
 * Opaque handle owning a finished run.
 */
typedef struct MosarRun MosarRun;

/**
 * Options for [`mosar_run_new`]. Non-positive schedule fields and a zero
 * iteration count select the problem's default schedule.
 */
typedef struct MosarRunOptions {
    /**
     * "srn", "tnk" or "config".
     */
    const char *problem;
    /**
     * "amosa", "mosar1" or "mosar2".
     */
    const char *algorithm;
    uint64_t seed;
    /**
     * Cube side length, used by "config" only.
     */
    double side_length;
    double t_max;
    double t_min;
    double alpha;
    uint32_t iters_per_temp;
    /**
     * Use the closed-form extent formulas instead of the exact envelope.
     */
    bool closed_form_envelope;
} MosarRunOptions;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failure on this thread, or null. The pointer stays
 * valid until the next failing call on the same thread.
 */
const char *mosar_last_error_message(void);

/**
 * Creates a problem. `side_length` is ignored for the benchmarks.
 *
 * # Safety
 * `name` must be a NUL-terminated string; `out` must be writable.
 */
enum MosarStatus mosar_problem_new(const char *name,
                                   double side_length,
                                   bool closed_form_envelope,
                                   struct MosarProblem **out);

/**
 * # Safety
 * `problem` must be null or a handle from [`mosar_problem_new`] not yet freed.
 */
void mosar_problem_free(struct MosarProblem *problem);

/**
 * Number of decision variables, or 0 for a null handle.
 *
 * # Safety
 * `problem` must be null or a live handle.
 */
size_t mosar_problem_dimension(const struct MosarProblem *problem);

/**
 * Length of the combined objective vector (objectives then violations).
 *
 * # Safety
 * `problem` must be null or a live handle.
 */
size_t mosar_problem_objective_count(const struct MosarProblem *problem);

/**
 * Number of trailing violation entries in the combined objective vector.
 *
 * # Safety
 * `problem` must be null or a live handle.
 */
size_t mosar_problem_constraint_count(const struct MosarProblem *problem);

/**
 * Evaluates `x` and writes the combined objective vector to `out`.
 *
 * # Safety
 * `x` must point to `x_len` doubles and `out` to `out_len` writable doubles.
 */
enum MosarStatus mosar_problem_evaluate(const struct MosarProblem *problem,
                                        const double *x,
                                        size_t x_len,
                                        double *out,
                                        size_t out_len);

/**
 * Options with the given names, seed 0 and every schedule field defaulted.
 */
struct MosarRunOptions mosar_run_options_default(const char *problem, const char *algorithm);

/**
 * Runs one annealing run to completion.
 *
 * # Safety
 * `options` must point to a valid [`MosarRunOptions`] whose strings are
 * NUL-terminated; `out` must be writable.
 */
enum MosarStatus mosar_run_new(const struct MosarRunOptions *options, struct MosarRun **out);

/**
 * # Safety
 * `run` must be null or a handle from [`mosar_run_new`] not yet freed.
 */
void mosar_run_free(struct MosarRun *run);

/**
 * # Safety
 * `run` must be null or a live handle.
 */
size_t mosar_run_archive_len(const struct MosarRun *run);

/**
 * # Safety
 * `run` must be null or a live handle.
 */
size_t mosar_run_feasible_count(const struct MosarRun *run);

/**
 * Total evaluations including archive initialisation.
 *
 * # Safety
 * `run` must be null or a live handle.
 */
uint64_t mosar_run_evaluations(const struct MosarRun *run);

/**
 * Copies archive entry `index`. Either output buffer may be null to skip it.
 *
 * # Safety
 * Non-null buffers must hold the stated number of doubles; `feasible` must
 * be null or writable.
 */
enum MosarStatus mosar_run_entry(const struct MosarRun *run,
                                 size_t index,
                                 double *decision,
                                 size_t decision_len,
                                 double *objectives,
                                 size_t objectives_len,
                                 bool *feasible);

/**
 * Writes the run's result file text (without wall-clock time) into `buf`
 * as a NUL-terminated string. `required` receives the size including NUL.
 *
 * # Safety
 * `buf` must be null or hold `buf_len` bytes; `required` must be null or writable.
 */
enum MosarStatus mosar_run_payload(const struct MosarRun *run,
                                   char *buf,
                                   size_t buf_len,
                                   size_t *required);

/**
 * Inverted generational distance of `front` against `reference`. An empty
 * front yields infinity.
 *
 * # Safety
 * Arrays hold `2 * count` doubles; `out` must be writable.
 */
enum MosarStatus mosar_igd(const double *front,
                           size_t front_count,
                           const double *reference,
                           size_t reference_count,
                           double *out);

/**
 * Normalised hypervolume of `front` with reference point 1.1 times the
 * componentwise maximum of `source`.
 *
 * # Safety
 * Arrays hold `2 * count` doubles; `out` must be writable.
 */
enum MosarStatus mosar_hypervolume_2d(const double *front,
                                      size_t front_count,
                                      const double *source,
                                      size_t source_count,
                                      double *out);

/**
 * Fraction of `b` dominated by `a`.
 *
 * # Safety
 * Arrays hold `2 * count` doubles; `out` must be writable.
 */
enum MosarStatus mosar_coverage(const double *a,
                                size_t a_count,
                                const double *b,
                                size_t b_count,
                                double *out);

/**
 * Minimal spacing standardised by the set's own objective ranges.
 *
 * # Safety
 * `points` holds `2 * count` doubles; `out` must be writable.
 */
enum MosarStatus mosar_minimal_spacing(const double *points, size_t count, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MOSAR_H */
