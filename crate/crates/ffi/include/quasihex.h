#ifndef QUASIHEX_H
#define QUASIHEX_H

#include <stddef.h>
#include <stdint.h>

// How [`qh_graph_count`] counts perfect matchings.
typedef enum {
  // The memoized exact counter.
  QH_METHOD_COUNTER = 0,
  // Brute-force enumeration, limited to `max_vertices`.
  QH_METHOD_ORACLE = 1,
} QhMethod;

// The three region constructions.
typedef enum {
  QH_REGION_KIND_SYMMETRIC = 0,
  QH_REGION_KIND_DOUGLAS = 1,
  QH_REGION_KIND_ASYMMETRIC = 2,
} QhRegionKind;

// Result code of every fallible call.
typedef enum {
  QH_STATUS_OK = 0,
  QH_STATUS_NULL_POINTER = 1,
  QH_STATUS_INVALID_UTF8 = 2,
  QH_STATUS_INVALID_PARAMS = 3,
  QH_STATUS_RESOURCE_LIMIT = 4,
  QH_STATUS_PRECISION_LOSS = 5,
  QH_STATUS_PRECONDITION_FAILED = 6,
  QH_STATUS_PARSE = 7,
  QH_STATUS_FAILED = 8,
  QH_STATUS_PANIC = 9,
} QhStatus;

// Opaque handle to a weighted matching graph.
typedef struct QhGraph QhGraph;

// Opaque handle to a constructed region.
typedef struct QhRegion QhRegion;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Returns the message of the last failed call on this thread, or null if
// the last call succeeded. The pointer stays valid until the next call
// into this library from the same thread.
const char *qh_last_error(void);

// Releases a string returned by this library. Null is ignored.
//
// # Safety
// `s` must be null or a string returned by this library that has not been
// freed yet.
void qh_string_free(char *s);

// Builds a region from its side length and distance lists. Lists that a
// kind does not use must have length zero.
//
// # Safety
// Each list pointer must be valid for its length (or the length must be
// zero), and `out` must be writable.
QhStatus qh_region_new(QhRegionKind kind,
                       uint32_t a,
                       const uint32_t *d,
                       size_t d_len,
                       const uint32_t *c,
                       size_t c_len,
                       const uint32_t *dprime,
                       size_t dprime_len,
                       QhRegion **out);

// Parses a region from its JSON form.
//
// # Safety
// `json` must be a NUL-terminated string and `out` must be writable.
QhStatus qh_region_from_json(const char *json, QhRegion **out);

// Serialises a region to JSON.
//
// # Safety
// `region` must be a live handle and `out` must be writable.
QhStatus qh_region_to_json(const QhRegion *region, char **out);

// Number of unit cells in the region, or zero for a null handle.
//
// # Safety
// `region` must be null or a live handle.
size_t qh_region_cell_count(const QhRegion *region);

// Evaluates the closed-form tiling count of the region.
//
// # Safety
// `region` must be a live handle and `out` must be writable.
QhStatus qh_region_count_formula(const QhRegion *region, char **out);

// Extracts the dual graph of the region as a new graph handle.
//
// # Safety
// `region` must be a live handle and `out` must be writable.
QhStatus qh_region_dual_graph(const QhRegion *region, QhGraph **out);

// Releases a region handle. Null is ignored.
//
// # Safety
// `region` must be null or a handle that has not been freed yet.
void qh_region_free(QhRegion *region);

// Builds a named graph family such as `"ar"`, `"gamma"` or `"hexagon-dual"`.
//
// # Safety
// `family` must be a NUL-terminated string, `params` must be valid for
// `params_len` values, and `out` must be writable.
QhStatus qh_family_build(const char *family,
                         const uint32_t *params,
                         size_t params_len,
                         QhGraph **out);

// Parses a graph from its JSON form.
//
// # Safety
// `json` must be a NUL-terminated string and `out` must be writable.
QhStatus qh_graph_from_json(const char *json, QhGraph **out);

// Serialises a graph to JSON.
//
// # Safety
// `graph` must be a live handle and `out` must be writable.
QhStatus qh_graph_to_json(const QhGraph *graph, char **out);

// Number of vertices, or zero for a null handle.
//
// # Safety
// `graph` must be null or a live handle.
size_t qh_graph_vertex_count(const QhGraph *graph);

// Number of edges, or zero for a null handle.
//
// # Safety
// `graph` must be null or a live handle.
size_t qh_graph_edge_count(const QhGraph *graph);

// Counts weighted perfect matchings. `max_vertices` caps the graph size
// for the oracle and is ignored by the counter.
//
// # Safety
// `graph` must be a live handle and `out` must be writable.
QhStatus qh_graph_count(const QhGraph *graph, QhMethod method, size_t max_vertices, char **out);

// Releases a graph handle. Null is ignored.
//
// # Safety
// `graph` must be null or a handle that has not been freed yet.
void qh_graph_free(QhGraph *graph);

// Plane partitions in an `a` by `b` by `c` box.
//
// # Safety
// `out` must be writable.
QhStatus qh_formula_macmahon(uint64_t a, uint64_t b, uint64_t c, char **out);

// Domino tilings of the Aztec diamond of order `n`.
//
// # Safety
// `out` must be writable.
QhStatus qh_formula_aztec_diamond(uint64_t n, char **out);

// Domino tilings of a `2m` by `2n` board.
//
// # Safety
// `out` must be writable.
QhStatus qh_formula_kasteleyn(uint32_t m, uint32_t n, char **out);

// Perfect matchings of the gamma graph with parameters `a` to `e`.
//
// # Safety
// `out` must be writable.
QhStatus qh_formula_gamma(uint32_t a, uint32_t b, uint32_t c, uint32_t d, uint32_t e, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QUASIHEX_H */
