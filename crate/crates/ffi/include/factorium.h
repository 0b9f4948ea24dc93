#ifndef FACTORIUM_H
#define FACTORIUM_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

// Largest order accepted by `factorium_graph_from_edges`.
#define FACTORIUM_MAX_ORDER (1 << 16)

typedef enum FactoriumStatus {
  FACTORIUM_STATUS_OK = 0,
  // The requested object does not exist (no factor, no certificate...).
  FACTORIUM_STATUS_NOT_FOUND = 1,
  FACTORIUM_STATUS_NULL_POINTER = 2,
  FACTORIUM_STATUS_PARSE_ERROR = 3,
  FACTORIUM_STATUS_INVALID_ARGUMENT = 4,
  FACTORIUM_STATUS_SIZE_LIMIT = 5,
  // The output buffer is too small; the required length was written.
  FACTORIUM_STATUS_BUFFER_TOO_SMALL = 6,
  FACTORIUM_STATUS_PANIC = 7,
} FactoriumStatus;

// Opaque graph handle.
typedef struct FactoriumGraph FactoriumGraph;

// Message describing the last failure on this thread, or null. The
// pointer stays valid until the next failing call on the same thread.
const char *factorium_last_error(void);

// Parses a NUL-terminated graph6 string into a new handle.
//
// # Safety
// `text` must be a valid C string and `out` writable.
enum FactoriumStatus factorium_graph_from_graph6(const char *text, struct FactoriumGraph **out);

// Builds a graph on `n` vertices from `edge_count` pairs stored flat in
// `edges` (`u0, v0, u1, v1, ...`).
//
// # Safety
// `edges` must point to `2 * edge_count` values (may be null when
// `edge_count` is 0) and `out` must be writable.
enum FactoriumStatus factorium_graph_from_edges(size_t n,
                                                const uint32_t *edges,
                                                size_t edge_count,
                                                struct FactoriumGraph **out);

// Releases a handle; null is ignored.
//
// # Safety
// `g` must be null or a handle not yet freed.
void factorium_graph_free(struct FactoriumGraph *g);

// Number of vertices; 0 for a null handle.
//
// # Safety
// `g` must be null or a live handle.
size_t factorium_graph_order(const struct FactoriumGraph *g);

// Number of edges; 0 for a null handle.
//
// # Safety
// `g` must be null or a live handle.
size_t factorium_graph_edge_count(const struct FactoriumGraph *g);

// Encodes as graph6. Release the string with `factorium_string_free`.
//
// # Safety
// `g` must be a live handle and `out` writable.
enum FactoriumStatus factorium_graph_to_graph6(const struct FactoriumGraph *g, char **out);

// # Safety
// `s` must be null or a string returned by this library.
void factorium_string_free(char *s);

// Minimum of `d(u) + d(v) - (n + k - 2)` over nonadjacent pairs. When
// there is no such pair `*has_pair` is false and `*deficit` is left alone.
//
// # Safety
// `g` must be a live handle; outputs must be writable.
enum FactoriumStatus factorium_ore_deficit(const struct FactoriumGraph *g,
                                           size_t k,
                                           int64_t *deficit,
                                           bool *has_pair);

// Writes the edges of a k-factor as flat pairs into `edges` (room for
// `capacity` pairs) and their number into `*edge_count`. Returns
// `NotFound` when none exists and `BufferTooSmall` when `capacity` is
// short, with `*edge_count` set to the size needed.
//
// # Safety
// `g` must be a live handle, `edges` must hold `2 * capacity` values and
// `edge_count` must be writable.
enum FactoriumStatus factorium_find_k_factor(const struct FactoriumGraph *g,
                                             size_t k,
                                             uint32_t *edges,
                                             size_t capacity,
                                             size_t *edge_count);

// Minimum-deficiency certificate that no k-factor exists: `S` and `T` as
// vertex masks and the deficiency `eta`. `NotFound` means a k-factor
// exists.
//
// # Safety
// `g` must be a live handle; outputs must be writable.
enum FactoriumStatus factorium_tutte_certificate(const struct FactoriumGraph *g,
                                                 size_t k,
                                                 int64_t *eta,
                                                 uint64_t *s_mask,
                                                 uint64_t *t_mask);

// `k` edge-disjoint perfect matchings as `k` mate rows of `n` entries in
// `mates` (room for `capacity` entries). `NotFound` when none exist.
//
// # Safety
// `g` must be a live handle, `mates` must hold `capacity` values and
// `count` must be writable.
enum FactoriumStatus factorium_k_disjoint_perfect_matchings(const struct FactoriumGraph *g,
                                                            size_t k,
                                                            uint32_t *mates,
                                                            size_t capacity,
                                                            size_t *count);

// 1-factorization of a regular graph of even order, laid out like
// `factorium_k_disjoint_perfect_matchings`.
//
// # Safety
// As for `factorium_k_disjoint_perfect_matchings`.
enum FactoriumStatus factorium_one_factorization(const struct FactoriumGraph *g,
                                                 uint32_t *mates,
                                                 size_t capacity,
                                                 size_t *count);

// # Safety
// `g` must be a live handle and `out` writable.
enum FactoriumStatus factorium_vertex_connectivity(const struct FactoriumGraph *g, size_t *out);

#endif  /* FACTORIUM_H */
