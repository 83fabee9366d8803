#ifndef FRACTAL_SPECTRA_H
#define FRACTAL_SPECTRA_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum FsConstruction {
  FS_CONSTRUCTION_ACTION = 0,
  FS_CONSTRUCTION_SUBSTITUTION = 1,
} FsConstruction;

typedef enum FsStatus {
  FS_STATUS_OK = 0,
  FS_STATUS_NULL_POINTER = 1,
  FS_STATUS_INVALID_ARGUMENT = 2,
  FS_STATUS_UNKNOWN_GROUP = 3,
  FS_STATUS_RESOURCE_LIMIT = 4,
  FS_STATUS_OUT_OF_RANGE = 5,
  FS_STATUS_INTERNAL = 6,
} FsStatus;

/**
 * Labelled Schreier graph.
 */
typedef struct FsGraph FsGraph;

/**
 * Eigenvalues with multiplicities, ascending.
 */
typedef struct FsSpectrum FsSpectrum;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message describing the last failure on this thread. The pointer stays
 * valid until the next failing call on the same thread.
 */
const char *fs_last_error_message(void);

/**
 * Closed-form spectrum of the level-`level` Hecke operator.
 *
 * # Safety
 * `group` must be a NUL-terminated string and `out` a valid pointer.
 */
enum FsStatus fs_spectrum_closed_form(const char *group, uint32_t level, struct FsSpectrum **out);

/**
 * Spectrum from the dense eigensolver, multiplicities by clustering.
 *
 * # Safety
 * As for [`fs_spectrum_closed_form`].
 */
enum FsStatus fs_spectrum_numeric(const char *group, uint32_t level, struct FsSpectrum **out);

/**
 * Number of distinct eigenvalues.
 *
 * # Safety
 * `s` must come from this library; `len` must be valid.
 */
enum FsStatus fs_spectrum_len(const struct FsSpectrum *s, size_t *len);

/**
 * Sum of multiplicities.
 *
 * # Safety
 * As for [`fs_spectrum_len`].
 */
enum FsStatus fs_spectrum_dim(const struct FsSpectrum *s, uint64_t *dim);

/**
 * The `index`-th distinct eigenvalue and its multiplicity.
 *
 * # Safety
 * As for [`fs_spectrum_len`].
 */
enum FsStatus fs_spectrum_get(const struct FsSpectrum *s,
                              size_t index,
                              double *value,
                              uint64_t *mult);

/**
 * # Safety
 * `s` must be null or a handle from this library not yet freed.
 */
void fs_spectrum_free(struct FsSpectrum *s);

/**
 * Schreier graph of the level action; `construction` is an
 * [`FsConstruction`] value.
 *
 * # Safety
 * `group` must be a NUL-terminated string and `out` a valid pointer.
 */
enum FsStatus fs_graph_new(const char *group,
                           uint32_t level,
                           uint32_t construction,
                           struct FsGraph **out);

/**
 * # Safety
 * `g` must come from this library; `count` must be valid.
 */
enum FsStatus fs_graph_vertex_count(const struct FsGraph *g, size_t *count);

/**
 * Whether a basepoint- and label-preserving isomorphism exists.
 *
 * # Safety
 * Both handles must come from this library; `result` must be valid.
 */
enum FsStatus fs_graph_isomorphic(const struct FsGraph *a, const struct FsGraph *b, bool *result);

/**
 * DOT (`csv == false`) or CSV text of the graph. Release with
 * [`fs_string_free`].
 *
 * # Safety
 * `g` must come from this library; `out` must be valid.
 */
enum FsStatus fs_graph_export(const struct FsGraph *g, bool csv, char **out);

/**
 * # Safety
 * `g` must be null or a handle from this library not yet freed.
 */
void fs_graph_free(struct FsGraph *g);

/**
 * Exact determinant of the operator pencil at rational `λ`, `μ` (strings
 * such as `"3/2"`), written as `"p/q"` or `"p"`.
 *
 * # Safety
 * String arguments must be NUL-terminated; `out` must be valid.
 */
enum FsStatus fs_pencil_determinant(const char *group,
                                    uint32_t level,
                                    const char *lambda,
                                    const char *mu,
                                    char **out);

/**
 * # Safety
 * `s` must be null or a string returned by this library not yet freed.
 */
void fs_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FRACTAL_SPECTRA_H */
