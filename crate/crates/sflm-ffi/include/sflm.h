#ifndef SFLM_H
#define SFLM_H

/* Generated by cbindgen from the sflm-ffi crate; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status code returned by every function in this API.
 */
typedef enum SflmStatus {
  SFLM_STATUS_OK = 0,
  SFLM_STATUS_NULL_ARGUMENT = 1,
  SFLM_STATUS_INVALID_UTF8 = 2,
  SFLM_STATUS_PARSE_ERROR = 3,
  SFLM_STATUS_LENGTH_MISMATCH = 4,
  SFLM_STATUS_INVALID_ARGUMENT = 5,
  SFLM_STATUS_OUT_OF_RANGE = 6,
} SflmStatus;

/**
 * Opaque handle to a ranked suspiciousness report.
 */
typedef struct SflmReport SflmReport;

/**
 * Opaque handle to a runs × blocks coverage spectrum.
 */
typedef struct SflmSpectrum SflmSpectrum;

/**
 * One ranked report row, in ranking order (most suspicious first).
 */
typedef struct SflmReportEntry {
  /**
   * 0-based block id.
   */
  size_t block_id;
  /**
   * 1-based competition rank; tied blocks share the smallest rank.
   */
  size_t rank;
  /**
   * Kernel similarity of the block column to the decision vector.
   */
  double score;
  /**
   * True when the pair carried no evidence (score pinned to 0.5).
   */
  bool no_evidence;
} SflmReportEntry;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failing call on this thread. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *sflm_last_error_message(void);

/**
 * Library version as a static string; never freed.
 */
const char *sflm_version(void);

/**
 * Frees a string returned by this API. Null is ignored.
 *
 * # Safety
 * `s` must be a pointer previously returned through a `char **`
 * out-parameter of this API and not yet freed.
 */
void sflm_string_free(char *s);

/**
 * Parses a spectrum from its CSV interchange format.
 *
 * # Safety
 * `csv` must be a valid NUL-terminated string; `out` must be a valid
 * pointer. On `SFLM_STATUS_OK` the caller owns the handle written to
 * `out` and must free it with [`sflm_spectrum_free`].
 */
enum SflmStatus sflm_spectrum_parse_csv(const char *csv, struct SflmSpectrum **out);

/**
 * Builds a spectrum from raw bits: `rows` is a row-major runs × blocks
 * array of 0/1 bytes and `decisions` holds one 0/1 byte per run. Blocks
 * are labeled by their index.
 *
 * # Safety
 * `rows` must point to `runs * blocks` readable bytes, `decisions` to
 * `runs` readable bytes, and `out` must be a valid pointer.
 */
enum SflmStatus sflm_spectrum_from_bits(const uint8_t *rows,
                                        size_t runs,
                                        size_t blocks,
                                        const uint8_t *decisions,
                                        struct SflmSpectrum **out);

/**
 * Parses and runs a program over a test suite, producing its spectrum.
 * `fuel` is the per-run step budget and must be nonzero; runs that
 * exhaust it count as failing.
 *
 * # Safety
 * `program_src` and `suite_src` must be valid NUL-terminated strings and
 * `out` a valid pointer.
 */
enum SflmStatus sflm_run_suite(const char *program_src,
                               const char *suite_src,
                               uint64_t fuel,
                               struct SflmSpectrum **out);

/**
 * Number of runs, or 0 for a null handle.
 *
 * # Safety
 * `spectrum` must be null or a live handle from this API.
 */
size_t sflm_spectrum_run_count(const struct SflmSpectrum *spectrum);

/**
 * Number of blocks, or 0 for a null handle.
 *
 * # Safety
 * `spectrum` must be null or a live handle from this API.
 */
size_t sflm_spectrum_block_count(const struct SflmSpectrum *spectrum);

/**
 * Renders the spectrum in its CSV interchange format.
 *
 * # Safety
 * `spectrum` must be a live handle; the string written to `out` must be
 * freed with [`sflm_string_free`].
 */
enum SflmStatus sflm_spectrum_to_csv(const struct SflmSpectrum *spectrum, char **out);

/**
 * Releases a spectrum handle. Null is ignored.
 *
 * # Safety
 * `spectrum` must have come from this API and not be freed twice.
 */
void sflm_spectrum_free(struct SflmSpectrum *spectrum);

/**
 * Kernel similarity of two equal-length bit vectors given as 0/1 byte
 * arrays. Writes the score and whether the pair carried no evidence.
 *
 * # Safety
 * `u` and `v` must point to `len` readable bytes each; the out-pointers
 * must be valid.
 */
enum SflmStatus sflm_kernel_score(const uint8_t *u,
                                  const uint8_t *v,
                                  size_t len,
                                  double *out_value,
                                  bool *out_no_evidence);

/**
 * Ranks every block of the spectrum against its decision vector.
 *
 * # Safety
 * `spectrum` must be a live handle; on `SFLM_STATUS_OK` the caller owns
 * the report handle and must free it with [`sflm_report_free`].
 */
enum SflmStatus sflm_localize(const struct SflmSpectrum *spectrum,
                              bool with_baselines,
                              struct SflmReport **out);

/**
 * Number of ranked blocks, or 0 for a null handle.
 *
 * # Safety
 * `report` must be null or a live handle from this API.
 */
size_t sflm_report_block_count(const struct SflmReport *report);

/**
 * Copies the entry at ranked position `index` (0 = most suspicious).
 *
 * # Safety
 * `report` must be a live handle and `out` a valid pointer.
 */
enum SflmStatus sflm_report_entry(const struct SflmReport *report,
                                  size_t index,
                                  struct SflmReportEntry *out);

/**
 * Copies up to `capacity` verdict block ids into `buf` and writes the
 * total verdict size to `count`. Call with `capacity` 0 to query the
 * size first.
 *
 * # Safety
 * `report` must be a live handle; `buf` must point to `capacity`
 * writable elements when `capacity` is nonzero; `count` must be valid.
 */
enum SflmStatus sflm_report_verdict(const struct SflmReport *report,
                                    size_t *buf,
                                    size_t capacity,
                                    size_t *count);

/**
 * Renders the report as JSON (stable key order, full precision).
 *
 * # Safety
 * `report` must be a live handle; the string written to `out` must be
 * freed with [`sflm_string_free`].
 */
enum SflmStatus sflm_report_to_json(const struct SflmReport *report, char **out);

/**
 * Fraction of blocks ranked at or above the given block (competition
 * rank over block count); lower is better.
 *
 * # Safety
 * `report` must be a live handle and `out` a valid pointer.
 */
enum SflmStatus sflm_evaluate_rank(const struct SflmReport *report, size_t block_id, double *out);

/**
 * Releases a report handle. Null is ignored.
 *
 * # Safety
 * `report` must have come from this API and not be freed twice.
 */
void sflm_report_free(struct SflmReport *report);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SFLM_H */
