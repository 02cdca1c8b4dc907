/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#ifndef SPARSITY_H
#define SPARSITY_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define SPARSITY_NO_PARENT SIZE_MAX



typedef enum SparsityConnector {
  SPARSITY_CONNECTOR_MAX_BALL = 0,
  SPARSITY_CONNECTOR_FIRST = 1,
  /**
   * Uses the `seed` argument.
   */
  SPARSITY_CONNECTOR_RANDOM = 2,
} SparsityConnector;

typedef enum SparsityMetric {
  SPARSITY_METRIC_WCOL = 0,
  SPARSITY_METRIC_COL = 1,
  SPARSITY_METRIC_ADM = 2,
} SparsityMetric;

typedef enum SparsityStatus {
  SPARSITY_STATUS_OK = 0,
  SPARSITY_STATUS_NULL_POINTER = 1,
  SPARSITY_STATUS_INVALID_ARGUMENT = 2,
  SPARSITY_STATUS_PARSE = 3,
  SPARSITY_STATUS_CAP_EXCEEDED = 4,
  SPARSITY_STATUS_PRECONDITION = 5,
  /**
   * The computation ran but its self-check failed.
   */
  SPARSITY_STATUS_CHECK_FAILED = 6,
  SPARSITY_STATUS_INTERNAL = 7,
} SparsityStatus;

typedef enum SparsityVariant {
  SPARSITY_VARIANT_PLAIN = 0,
  SPARSITY_VARIANT_SUCCESSOR = 1,
} SparsityVariant;

/**
 * Opaque graph handle.
 */
typedef struct SparsityGraph SparsityGraph;

/**
 * Profile maxima under one order.
 */
typedef struct SparsityProfile {
  size_t wcol;
  size_t col;
  size_t adm_lower;
  size_t adm_upper;
} SparsityProfile;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. Valid until
 * the next library call on the same thread.
 */
const char *sparsity_last_error(void);

/**
 * Library version as a static string.
 */
const char *sparsity_version(void);

/**
 * Builds a graph on `n` vertices from `edge_count` pairs stored flat in
 * `edges` (`2 * edge_count` ids).
 *
 * # Safety
 * `edges` must point to `2 * edge_count` readable ids (or be null when
 * `edge_count` is 0); `out` must be writable.
 */
enum SparsityStatus sparsity_graph_new(size_t n,
                                       const size_t *edges,
                                       size_t edge_count,
                                       struct SparsityGraph **out);

/**
 * Parses an edge-list document. Ids are remapped densely when the
 * document has no `p n m` header.
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be writable.
 */
enum SparsityStatus sparsity_graph_parse(const char *text, struct SparsityGraph **out);

/**
 * # Safety
 * `g` must come from this library and not be used afterwards.
 */
void sparsity_graph_free(struct SparsityGraph *g);

/**
 * # Safety
 * `g` must be a live handle or null (returns 0).
 */
size_t sparsity_graph_vertex_count(const struct SparsityGraph *g);

/**
 * # Safety
 * `g` must be a live handle or null (returns 0).
 */
size_t sparsity_graph_edge_count(const struct SparsityGraph *g);

/**
 * Profile maxima under `order` at radius `r`. The per-vertex arrays are
 * optional (null to skip) and must hold `n` entries each.
 *
 * # Safety
 * Pointers must be valid for the sizes described above.
 */
enum SparsityStatus sparsity_profile(const struct SparsityGraph *g,
                                     const size_t *order,
                                     size_t r,
                                     bool exact_adm,
                                     struct SparsityProfile *out,
                                     size_t *wreach_sizes,
                                     size_t *adm_upper);

/**
 * Minimum of `metric` over all orders; `out_order` (optional, `n`
 * entries) receives an optimal order.
 *
 * # Safety
 * Pointers must be valid for the sizes described above.
 */
enum SparsityStatus sparsity_exact_optimum(const struct SparsityGraph *g,
                                           size_t r,
                                           enum SparsityMetric metric,
                                           size_t cap,
                                           size_t *out_value,
                                           size_t *out_order);

/**
 * Heuristic order for radius `r` into `out_order` (`n` entries).
 *
 * # Safety
 * `out_order` must hold `n` entries.
 */
enum SparsityStatus sparsity_greedy_order(const struct SparsityGraph *g,
                                          size_t r,
                                          size_t *out_order);

/**
 * Radius-independent fragment order into `out_order` (`n` entries). The
 * construction trace is verified; a failed check yields `CheckFailed`.
 * `out_trace_json` (optional) receives the trace as JSON.
 *
 * # Safety
 * `out_order` must hold `n` entries; `out_trace_json` must be writable or null.
 */
enum SparsityStatus sparsity_uniform_order(const struct SparsityGraph *g,
                                           enum SparsityVariant variant,
                                           size_t *out_order,
                                           char **out_trace_json);

/**
 * Scatter extraction on `a` (`a_len` ids). The result JSON, including its
 * audit, goes to `out_json`; a failed audit yields `CheckFailed`.
 *
 * # Safety
 * `a` must hold `a_len` ids; `order` is null or holds `n` ids; `out_json` writable.
 */
enum SparsityStatus sparsity_scatter(const struct SparsityGraph *g,
                                     const size_t *order,
                                     size_t r,
                                     const size_t *a,
                                     size_t a_len,
                                     size_t m,
                                     char **out_json);

/**
 * Plays the splitter game with the order-minimum splitter. The transcript
 * is replay-validated.
 *
 * # Safety
 * `order` is null or holds `n` ids; outputs must be writable.
 */
enum SparsityStatus sparsity_splitter_game(const struct SparsityGraph *g,
                                           const size_t *order,
                                           size_t r,
                                           enum SparsityConnector connector,
                                           uint64_t seed,
                                           size_t round_cap,
                                           size_t *out_rounds,
                                           bool *out_splitter_won);

/**
 * Spanning tree of the augmented graph as a parent array (`n` entries,
 * [`SPARSITY_NO_PARENT`] at the root). `out_added_edges` (optional)
 * receives the number of edges added to the input graph.
 *
 * # Safety
 * `out_parent` must hold `n` entries; the other outputs writable or null.
 */
enum SparsityStatus sparsity_spanning_tree(const struct SparsityGraph *g,
                                           size_t *out_parent,
                                           size_t *out_root,
                                           size_t *out_added_edges);

/**
 * Claim checks of the augmentation at radius `r`; the report JSON goes to
 * `out_json` (optional) and `out_ok` receives the verdict.
 *
 * # Safety
 * `out_ok` must be writable; `out_json` writable or null.
 */
enum SparsityStatus sparsity_verify_claims(const struct SparsityGraph *g,
                                           size_t r,
                                           bool *out_ok,
                                           char **out_json);

/**
 * # Safety
 * `s` must be a string returned by this library, or null.
 */
void sparsity_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SPARSITY_H */
