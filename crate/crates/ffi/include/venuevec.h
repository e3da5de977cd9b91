#ifndef VENUEVEC_H
#define VENUEVEC_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result codes. `VV_STATUS_OK` is zero; every other value is an error.
typedef enum VvStatus {
  VV_STATUS_OK = 0,
  VV_STATUS_NULL_POINTER = 1,
  VV_STATUS_INVALID_UTF8 = 2,
  VV_STATUS_IO = 3,
  VV_STATUS_PARSE = 4,
  VV_STATUS_INTEGRITY = 5,
  VV_STATUS_CONFIG = 6,
  VV_STATUS_LOOKUP = 7,
  VV_STATUS_UNSATISFIABLE = 8,
  VV_STATUS_UNDEFINED_SIMILARITY = 9,
  VV_STATUS_DEGENERATE_AXIS = 10,
  VV_STATUS_CONVERGENCE = 11,
  VV_STATUS_UNDEFINED = 12,
  VV_STATUS_PANIC = 99,
} VvStatus;

// Opaque handle to a loaded paper citation graph.
typedef struct VvGraph VvGraph;

// Opaque ranked result list.
typedef struct VvNeighbors VvNeighbors;

// Opaque handle to loaded periodical vectors.
typedef struct VvStore VvStore;

// Training hyperparameters. `subsample <= 0` disables subsampling.
typedef struct VvTrainConfig {
  size_t window;
  size_t dim;
  size_t negatives;
  uint64_t min_count;
  size_t epochs;
  double initial_lr;
  double final_lr;
  double subsample;
  bool shrink_window;
  double noise_exponent;
  uint64_t seed;
} VvTrainConfig;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message describing the most recent failure on this thread, or NULL if
// the last call succeeded. Valid until the next call on this thread.
const char *vv_last_error_message(void);

// Library version as a static string.
const char *vv_version(void);

// Loads a model file. `metadata_path` may be NULL.
//
// # Safety
// String arguments must be NULL or valid NUL-terminated strings; `out`
// must be a valid pointer.
enum VvStatus vv_store_load(const char *model_path,
                            const char *metadata_path,
                            struct VvStore **out);

// Releases a store. NULL is ignored.
//
// # Safety
// `store` must come from [`vv_store_load`] and not be used afterwards.
void vv_store_free(struct VvStore *store);

// Number of periodicals, or 0 for a NULL handle.
//
// # Safety
// `store` must be NULL or a live handle.
size_t vv_store_len(const struct VvStore *store);

// Vector dimension, or 0 for a NULL handle.
//
// # Safety
// `store` must be NULL or a live handle.
size_t vv_store_dim(const struct VvStore *store);

// Cosine similarity between two periodicals.
//
// # Safety
// Pointers must be valid; strings NUL-terminated.
enum VvStatus vv_store_similarity(const struct VvStore *store,
                                  const char *a,
                                  const char *b,
                                  double *out);

// The `top_n` periodicals most similar to `id`.
//
// # Safety
// Pointers must be valid; strings NUL-terminated.
enum VvStatus vv_store_most_similar(const struct VvStore *store,
                                    const char *id,
                                    size_t top_n,
                                    struct VvNeighbors **out);

// The `top_n` periodicals closest to `c − a + b`, excluding the three
// query periodicals.
//
// # Safety
// Pointers must be valid; strings NUL-terminated.
enum VvStatus vv_store_analogy(const struct VvStore *store,
                               const char *a,
                               const char *b,
                               const char *c,
                               size_t top_n,
                               struct VvNeighbors **out);

// Cosine projection of `id` on the axis from the centroid of `negative`
// to the centroid of `positive`.
//
// # Safety
// Arrays must hold the given number of valid strings.
enum VvStatus vv_store_project(const struct VvStore *store,
                               const char *id,
                               const char *const *positive,
                               size_t n_positive,
                               const char *const *negative,
                               size_t n_negative,
                               double *out);

// Number of entries, or 0 for NULL.
//
// # Safety
// `list` must be NULL or a live handle.
size_t vv_neighbors_len(const struct VvNeighbors *list);

// Periodical id at position `i`, or NULL when out of range. The string
// lives as long as the list.
//
// # Safety
// `list` must be NULL or a live handle.
const char *vv_neighbors_id(const struct VvNeighbors *list, size_t i);

// Score at position `i`, or NaN when out of range.
//
// # Safety
// `list` must be NULL or a live handle.
double vv_neighbors_score(const struct VvNeighbors *list, size_t i);

// Releases a result list. NULL is ignored.
//
// # Safety
// `list` must come from this library and not be used afterwards.
void vv_neighbors_free(struct VvNeighbors *list);

// Loads `edges.tsv` and `papers.tsv`.
//
// # Safety
// Strings must be valid; `out` must be a valid pointer.
enum VvStatus vv_graph_load(const char *edges_path, const char *papers_path, struct VvGraph **out);

// Releases a graph. NULL is ignored.
//
// # Safety
// `graph` must come from [`vv_graph_load`] and not be used afterwards.
void vv_graph_free(struct VvGraph *graph);

// # Safety
// `graph` must be NULL or a live handle.
size_t vv_graph_paper_count(const struct VvGraph *graph);

// # Safety
// `graph` must be NULL or a live handle.
size_t vv_graph_edge_count(const struct VvGraph *graph);

// # Safety
// `graph` must be NULL or a live handle.
size_t vv_graph_periodical_count(const struct VvGraph *graph);

// Samples `n` citation trails and writes them as periodical trails.
//
// # Safety
// `graph` must be a live handle and `out_path` a valid string.
enum VvStatus vv_walk(const struct VvGraph *graph,
                      size_t n,
                      uint64_t seed,
                      size_t workers,
                      const char *out_path);

// The library's default training configuration.
struct VvTrainConfig vv_train_config_default(void);

// Trains on a trail file and writes the model file.
//
// # Safety
// `config` must point to a valid struct; strings must be valid.
enum VvStatus vv_train(const char *corpus_path,
                       const struct VvTrainConfig *config,
                       size_t workers,
                       const char *out_path);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* VENUEVEC_H */
