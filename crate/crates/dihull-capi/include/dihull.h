/* C interface to the dihull finite order-theory toolkit. */

#ifndef DIHULL_H
#define DIHULL_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible function.
 */
typedef enum DihullStatus {
  /**
   * Success; any claim checked by the command holds.
   */
  DihullStatus_Ok = 0,
  /**
   * The command ran and a checked claim failed; the report contains the
   * witness.
   */
  DihullStatus_ClaimFailed = 1,
  /**
   * Malformed input: parse error, invalid structure, or a cap exceeded.
   */
  DihullStatus_InvalidInput = 2,
  /**
   * A required pointer argument was null.
   */
  DihullStatus_NullPointer = 3,
  /**
   * A string argument was not valid UTF-8.
   */
  DihullStatus_InvalidUtf8 = 4,
} DihullStatus;

/**
 * Opaque parsed document.
 */
typedef struct DihullDocument DihullDocument;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses a document in the dihull text format.
 *
 * On success `*out` owns the handle; release it with [`dihull_document_free`].
 *
 * # Safety
 * `text` must be a valid NUL-terminated string and `out` a valid pointer.
 */
enum DihullStatus dihull_parse(const char *text, struct DihullDocument **out);

/**
 * Releases a document handle. Null is ignored.
 *
 * # Safety
 * `doc` must have come from [`dihull_parse`] and not been freed before.
 */
void dihull_document_free(struct DihullDocument *doc);

/**
 * Number of declared elements.
 *
 * # Safety
 * `doc` must be a live handle from [`dihull_parse`] (or null, giving 0).
 */
uintptr_t dihull_element_count(const struct DihullDocument *doc);

/**
 * Number of declared states (0 when no `states` line is present).
 *
 * # Safety
 * `doc` must be a live handle from [`dihull_parse`] (or null, giving 0).
 */
uintptr_t dihull_state_count(const struct DihullDocument *doc);

/**
 * Runs a report command (`check`, `hull`, `macneille`, `cartan`, `ortho`,
 * `dhull`) against the document. `max_subset_bits` caps the
 * subset-enumerating algorithms; pass 0 for the default of 16.
 *
 * The report text is stored in `*out_report` on both `Ok` and
 * `ClaimFailed`; release it with [`dihull_string_free`].
 *
 * # Safety
 * `doc` must be a live handle; `command` a valid NUL-terminated string;
 * `out_report` a valid pointer.
 */
enum DihullStatus dihull_run(const struct DihullDocument *doc,
                             const char *command,
                             uintptr_t max_subset_bits,
                             char **out_report);

/**
 * Runs a bounded search. `kind` is one of `lattice`, `ortholattice`,
 * `cartan`, `weak-cartan`; `mode` one of `witness`, `counterexample`,
 * `count`. `Ok` means the search completed with its goal satisfied the
 * same way the CLI exit code would report it.
 *
 * # Safety
 * `kind`, `predicate` and `mode` must be valid NUL-terminated strings and
 * `out_report` a valid pointer.
 */
enum DihullStatus dihull_search(const char *kind,
                                const char *predicate,
                                uintptr_t max_elements,
                                uintptr_t max_states,
                                const char *mode,
                                uint64_t seed,
                                bool sampled,
                                uintptr_t samples,
                                char **out_report);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must have been returned by a dihull function and not freed before.
 */
void dihull_string_free(char *s);

/**
 * Last error message on this thread, or null when none was recorded.
 * Release with [`dihull_string_free`].
 */
char *dihull_last_error_message(void);

/**
 * Library version as a static string; do not free.
 */
const char *dihull_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DIHULL_H */
