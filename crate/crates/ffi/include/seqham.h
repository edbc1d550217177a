#ifndef SEQHAM_H
#define SEQHAM_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SeqhamStatus {
  SEQHAM_OK = 0,
  SEQHAM_NULL_POINTER = 1,
  SEQHAM_INVALID_ARGUMENT = 2,
  /**
   * The buffer is shorter than the number of vertices.
   */
  SEQHAM_BUFFER_TOO_SMALL = 3,
  /**
   * The solver gave up, or the instance has no solution.
   */
  SEQHAM_NOT_FOUND = 4,
  SEQHAM_CAP_EXCEEDED = 5,
  SEQHAM_PANIC = 6,
} SeqhamStatus;

/**
 * Opaque graph handle.
 */
typedef struct SeqhamGraph SeqhamGraph;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or NULL. The pointer
 * stays valid until the next call into this library on the same thread.
 */
const char *seqham_last_error(void);

/**
 * Samples G(n, p) into `*out`.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
enum SeqhamStatus seqham_graph_gnp(size_t n, double p, uint64_t seed, struct SeqhamGraph **out);

/**
 * Builds a graph on `1..=n` from `m` edges given as `2m` labels.
 *
 * # Safety
 * `edges` must point to `2 * m` readable labels (or be NULL when `m` is 0)
 * and `out` to writable storage for one handle.
 */
enum SeqhamStatus seqham_graph_from_edges(size_t n,
                                          const uint32_t *edges,
                                          size_t m,
                                          struct SeqhamGraph **out);

/**
 * Releases a handle. NULL is ignored.
 *
 * # Safety
 * `g` must come from a constructor of this library and not be freed twice.
 */
void seqham_graph_free(struct SeqhamGraph *g);

/**
 * Number of vertices, or 0 for NULL.
 *
 * # Safety
 * `g` must be NULL or a live handle.
 */
size_t seqham_graph_n(const struct SeqhamGraph *g);

/**
 * Number of edges, or 0 for NULL.
 *
 * # Safety
 * `g` must be NULL or a live handle.
 */
size_t seqham_graph_edge_count(const struct SeqhamGraph *g);

/**
 * Randomized rotation-extension search for a Hamilton cycle.
 *
 * # Safety
 * `g` must be a live handle and `out` must point to `cap` writable labels.
 */
enum SeqhamStatus seqham_posa_solve(const struct SeqhamGraph *g,
                                    uint64_t seed,
                                    uint32_t *out,
                                    size_t cap);

/**
 * Exhaustive search; decides Hamiltonicity for small graphs.
 *
 * # Safety
 * `g` must be a live handle and `out` must point to `cap` writable labels.
 */
enum SeqhamStatus seqham_brute_solve(const struct SeqhamGraph *g, uint32_t *out, size_t cap);

/**
 * Hamilton cycle visiting `s0[0], ..., s0[k-1]` in this cyclic order.
 *
 * # Safety
 * `g` must be a live handle, `s0` must point to `k` readable labels and
 * `out` to `cap` writable labels.
 */
enum SeqhamStatus seqham_ordered_solve(const struct SeqhamGraph *g,
                                       const uint32_t *s0,
                                       size_t k,
                                       uint64_t seed,
                                       uint32_t *out,
                                       size_t cap);

/**
 * Inversion count of a permutation of `1..=len`.
 *
 * # Safety
 * `seq` must point to `len` readable labels and `out` to one writable u64.
 */
enum SeqhamStatus seqham_count_inversions(const uint32_t *seq, size_t len, uint64_t *out);

/**
 * Expected number of Hamilton cycles of G(n, p) with at most `m` inversions.
 */
double seqham_first_moment_bound(size_t n, uint64_t m, double p);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SEQHAM_H */
