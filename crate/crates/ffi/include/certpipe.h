#ifndef CERTPIPE_H
#define CERTPIPE_H

/* Generated with cbindgen:0.29.4 */

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum {
  CERTPIPE_STATUS_OK = 0,
  CERTPIPE_STATUS_NULL_ARGUMENT = 1,
  CERTPIPE_STATUS_INVALID_UTF8 = 2,
  CERTPIPE_STATUS_INVALID_INPUT = 3,
  CERTPIPE_STATUS_IO = 4,
  CERTPIPE_STATUS_PANIC = 5,
} CertpipeStatus;

/**
 * Opaque handle to an immutable name lexicon.
 */
typedef struct CertpipeLexicon CertpipeLexicon;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version, a static string.
 */
const char *certpipe_version(void);

/**
 * Message of the last failed call on this thread, or null. Valid until the
 * next certpipe call on the same thread.
 */
const char *certpipe_last_error(void);

/**
 * Release a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must be null or a pointer returned through a `char **` out-parameter
 * of this library that has not been freed yet.
 */
void certpipe_string_free(char *s);

/**
 * Edit distance between two strings, counted in Unicode scalar values.
 *
 * # Safety
 * `a` and `b` must be NUL-terminated; `out` must be writable.
 */
CertpipeStatus certpipe_levenshtein(const char *a, const char *b, size_t *out);

/**
 * Character error rate of `hypothesis` against a non-empty `reference`.
 *
 * # Safety
 * Both strings must be NUL-terminated; `out` must be writable.
 */
CertpipeStatus certpipe_cer(const char *reference, const char *hypothesis, double *out);

/**
 * Parse a scan file name. Writes a JSON object with `year`, `district`,
 * `number`, `note_suffix`, `stem`, `file_name` and `key`.
 *
 * # Safety
 * `name` must be NUL-terminated; `out_json` must be writable.
 */
CertpipeStatus certpipe_scan_parse(const char *name, char **out_json);

/**
 * Canonical spelling of a scan file name.
 *
 * # Safety
 * `name` must be NUL-terminated; `out` must be writable.
 */
CertpipeStatus certpipe_scan_canonical(const char *name, char **out);

/**
 * Two-year birth window `[cert_year - age - 1, cert_year - age]`.
 *
 * # Safety
 * `low` and `high` must be writable.
 */
CertpipeStatus certpipe_birth_interval(int32_t cert_year, int64_t age, int32_t *low, int32_t *high);

/**
 * Build a lexicon from `name[,count]` CSV text. Malformed rows are skipped.
 *
 * # Safety
 * `csv` must be NUL-terminated; `out` must be writable. The handle must be
 * released with [`certpipe_lexicon_free`].
 */
CertpipeStatus certpipe_lexicon_from_csv(const char *csv, CertpipeLexicon **out);

/**
 * Load a lexicon CSV file.
 *
 * # Safety
 * `path` must be NUL-terminated; `out` must be writable.
 */
CertpipeStatus certpipe_lexicon_load(const char *path, CertpipeLexicon **out);

/**
 * Release a lexicon handle. Null is ignored.
 *
 * # Safety
 * `lexicon` must be null or a handle from this library not yet freed.
 */
void certpipe_lexicon_free(CertpipeLexicon *lexicon);

/**
 * Number of distinct entries.
 *
 * # Safety
 * `lexicon` must be a live handle; `out` must be writable.
 */
CertpipeStatus certpipe_lexicon_len(const CertpipeLexicon *lexicon, size_t *out);

/**
 * Frequency of a token, 0 when absent. Matching ignores case and Unicode
 * composition.
 *
 * # Safety
 * `lexicon` must be a live handle; `token` NUL-terminated; `out` writable.
 */
CertpipeStatus certpipe_lexicon_frequency(const CertpipeLexicon *lexicon,
                                          const char *token,
                                          uint64_t *out);

/**
 * 1 when every token of the whitespace-separated `name` is known, else 0.
 *
 * # Safety
 * `lexicon` must be a live handle; `name` NUL-terminated; `out` writable.
 */
CertpipeStatus certpipe_lexicon_accepts(const CertpipeLexicon *lexicon,
                                        const char *name,
                                        int32_t *out);

/**
 * Correct each unknown token of `name` to its closest entry with frequency
 * at least `min_freq`. Writes the correction result as JSON.
 *
 * # Safety
 * `lexicon` must be a live handle; `name` NUL-terminated; `out_json`
 * writable.
 */
CertpipeStatus certpipe_lexicon_correct_name(const CertpipeLexicon *lexicon,
                                             const char *name,
                                             uint64_t min_freq,
                                             char **out_json);

/**
 * Extract a record from one document (canonical JSON or page XML) with the
 * rule backend and default layout thresholds. `scan_name` may be null when
 * the document names its scan itself.
 *
 * # Safety
 * `document` must be NUL-terminated; `scan_name` null or NUL-terminated;
 * `out_json` writable.
 */
CertpipeStatus certpipe_extract_document(const char *document,
                                         const char *scan_name,
                                         char **out_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CERTPIPE_H */
