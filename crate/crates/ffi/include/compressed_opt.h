#ifndef COMPRESSED_OPT_H
#define COMPRESSED_OPT_H

/* Generated by cbindgen from compressed-opt-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every entry point.
 */
typedef enum {
  CO_STATUS_OK = 0,
  CO_STATUS_NULL_POINTER = 1,
  CO_STATUS_INVALID_UTF8 = 2,
  CO_STATUS_INVALID_ARGUMENT = 3,
  CO_STATUS_NON_FINITE_INPUT = 4,
  CO_STATUS_RUNTIME_ERROR = 5,
} CoStatus;

/**
 * Opaque compressor handle: a validated operator bound to a dimension.
 */
typedef struct CoCompressor CoCompressor;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message describing the most recent failure on this thread. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *co_last_error(void);

/**
 * Build a compressor from its JSON spec (e.g. `{"kind":"topk","k":10}`)
 * for vectors of dimension `dim`. On success `*out` owns the handle;
 * release it with [`co_compressor_free`].
 *
 * # Safety
 * `spec_json` must be a valid NUL-terminated string and `out` a valid
 * pointer to a writable pointer slot.
 */
CoStatus co_compressor_new(const char *spec_json, size_t dim, CoCompressor **out);

/**
 * Release a handle created by [`co_compressor_new`]. A null pointer is a
 * no-op.
 *
 * # Safety
 * `handle` must be a pointer returned by [`co_compressor_new`] that has not
 * been freed yet.
 */
void co_compressor_free(CoCompressor *handle);

/**
 * Compress `input` (length = the handle's dimension) into `output`
 * (same length), drawing any randomness from a stream seeded by `seed`.
 * Transmission costs are written to the optional out-parameters.
 *
 * # Safety
 * `input` and `output` must point to `dim` readable/writable doubles;
 * cost pointers may be null.
 */
CoStatus co_compressor_compress(const CoCompressor *handle,
                                const double *input,
                                size_t len,
                                uint64_t seed,
                                double *output,
                                uint64_t *out_scalars,
                                uint64_t *out_indices,
                                uint64_t *out_messages);

/**
 * Declared error bound of the handle's compressor: writes the contraction
 * parameter `delta` (and `*is_absolute = 0`), or the absolute bound `Delta`
 * (and `*is_absolute = 1`).
 *
 * # Safety
 * `value` and `is_absolute` must be valid writable pointers.
 */
CoStatus co_compressor_bound(const CoCompressor *handle, double *value, int *is_absolute);

/**
 * Run a full experiment config (same JSON schema as the CLI) and write all
 * artifacts under `out_dir`.
 *
 * # Safety
 * Both arguments must be valid NUL-terminated strings.
 */
CoStatus co_run_experiment(const char *config_json, const char *out_dir);

/**
 * Grid search over the config's grid; writes artifacts under `out_dir` and
 * stores the selected value in `*selected`.
 *
 * # Safety
 * String arguments must be valid NUL-terminated strings and `selected`
 * a valid writable pointer.
 */
CoStatus co_grid_search(const char *config_json, const char *out_dir, double *selected);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* COMPRESSED_OPT_H */
