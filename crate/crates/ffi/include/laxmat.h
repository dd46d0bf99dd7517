#ifndef LAXMAT_H
#define LAXMAT_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

/**
 * Result of every call.
 */
typedef enum LaxStatus {
  LAX_STATUS_OK = 0,
  LAX_STATUS_NULL_POINTER = 1,
  LAX_STATUS_INVALID_UTF8 = 2,
  /**
   * Malformed JSON or a document of the wrong layout.
   */
  LAX_STATUS_PARSE = 3,
  /**
   * Well-formed input that breaks an invariant.
   */
  LAX_STATUS_VALIDATION = 4,
  /**
   * Inputs that do not fit together, such as non-composable profunctors.
   */
  LAX_STATUS_MISMATCH = 5,
  LAX_STATUS_UNKNOWN_PROPERTY = 6,
  LAX_STATUS_PANIC = 7,
} LaxStatus;

typedef struct LaxChainMap LaxChainMap;

typedef struct LaxComplex LaxComplex;

typedef struct LaxProfunctor LaxProfunctor;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * The message of the last failure on this thread, or null. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *laxmat_last_error(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void laxmat_string_free(char *s);

/**
 * Parses a profunctor document. Categories may be inline or `std:` names.
 *
 * # Safety
 * `json` must be a nul-terminated string; `out` must be writable.
 */
enum LaxStatus laxmat_profunctor_from_json(const char *json, struct LaxProfunctor **out);

/**
 * # Safety
 * `p` must come from this library and not have been freed. Null is ignored.
 */
void laxmat_profunctor_free(struct LaxProfunctor *p);

/**
 * The document of `p` with inline categories.
 *
 * # Safety
 * `p` must be a live handle; `out` must be writable.
 */
enum LaxStatus laxmat_profunctor_to_json(const struct LaxProfunctor *p, char **out);

/**
 * Total number of elements over all pairs of objects.
 *
 * # Safety
 * `p` must be a live handle; `out` must be writable.
 */
enum LaxStatus laxmat_profunctor_element_count(const struct LaxProfunctor *p, size_t *out);

/**
 * The coend composite `n ∘ m`.
 *
 * # Safety
 * `n` and `m` must be live handles; `out` must be writable.
 */
enum LaxStatus laxmat_profunctor_compose(const struct LaxProfunctor *n,
                                         const struct LaxProfunctor *m,
                                         struct LaxProfunctor **out);

/**
 * The collage of `p` as a JSON document.
 *
 * # Safety
 * `p` must be a live handle; `out` must be writable.
 */
enum LaxStatus laxmat_profunctor_collage_json(const struct LaxProfunctor *p, char **out);

/**
 * # Safety
 * `json` must be a nul-terminated string; `out` must be writable.
 */
enum LaxStatus laxmat_complex_from_json(const char *json, struct LaxComplex **out);

/**
 * # Safety
 * `c` must come from this library and not have been freed. Null is ignored.
 */
void laxmat_complex_free(struct LaxComplex *c);

/**
 * # Safety
 * `c` must be a live handle; `out` must be writable.
 */
enum LaxStatus laxmat_complex_to_json(const struct LaxComplex *c, char **out);

/**
 * Homology in every degree of the window, keyed by degree.
 *
 * # Safety
 * `c` must be a live handle; `out` must be writable.
 */
enum LaxStatus laxmat_complex_homology_json(const struct LaxComplex *c, char **out);

/**
 * # Safety
 * `c` must be a live handle; `out` must be writable.
 */
enum LaxStatus laxmat_complex_euler_char(const struct LaxComplex *c, int64_t *out);

/**
 * Parses a chain map whose source and target are given inline.
 *
 * # Safety
 * `json` must be a nul-terminated string; `out` must be writable.
 */
enum LaxStatus laxmat_chain_map_from_json(const char *json, struct LaxChainMap **out);

/**
 * # Safety
 * `f` must come from this library and not have been freed. Null is ignored.
 */
void laxmat_chain_map_free(struct LaxChainMap *f);

/**
 * The mapping cone of `f`.
 *
 * # Safety
 * `f` must be a live handle; `out` must be writable.
 */
enum LaxStatus laxmat_chain_map_cone(const struct LaxChainMap *f, struct LaxComplex **out);

/**
 * # Safety
 * `f` must be a live handle; `out` must be writable.
 */
enum LaxStatus laxmat_chain_map_is_quasi_iso(const struct LaxChainMap *f, bool *out);

/**
 * Smith normal form of a `{rows, cols, entries}` matrix document. The
 * result holds `rank`, `invariant_factors`, `s`, `u` and `v`.
 *
 * # Safety
 * `json` must be a nul-terminated string; `out` must be writable.
 */
enum LaxStatus laxmat_snf_json(const char *json, char **out);

/**
 * Runs a named check on `n` seeded random instances. `passed` receives the
 * verdict and `out` the full report.
 *
 * # Safety
 * `property` must be a nul-terminated string; `passed` and `out` must be
 * writable.
 */
enum LaxStatus laxmat_check_randomized(const char *property,
                                       size_t n,
                                       uint64_t seed,
                                       bool *passed,
                                       char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LAXMAT_H */
