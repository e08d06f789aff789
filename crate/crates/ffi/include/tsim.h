#ifndef TSIM_H
#define TSIM_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum TsimMeasure {
  TSIM_MEASURE_TSIM = 0,
  TSIM_MEASURE_JACCARD = 1,
  TSIM_MEASURE_COSINE = 2,
  TSIM_MEASURE_EUCLIDEAN = 3,
} TsimMeasure;

typedef enum TsimStdMode {
  TSIM_STD_MODE_SAMPLE = 0,
  TSIM_STD_MODE_POPULATION = 1,
} TsimStdMode;

// Result code of every fallible call.
typedef enum TsimStatus {
  TSIM_STATUS_OK = 0,
  TSIM_STATUS_NULL_POINTER = 1,
  TSIM_STATUS_INVALID_UTF8 = 2,
  TSIM_STATUS_INVALID_ARGUMENT = 3,
  TSIM_STATUS_PARSE = 4,
  TSIM_STATUS_NOT_FOUND = 5,
  TSIM_STATUS_COMPUTE = 6,
  TSIM_STATUS_OUT_OF_RANGE = 7,
  TSIM_STATUS_PANIC = 8,
} TsimStatus;

// Opaque threshold clustering.
typedef struct TsimClustering TsimClustering;

// Opaque transaction dataset.
typedef struct TsimDataset TsimDataset;

// Opaque pairwise similarity matrix.
typedef struct TsimMatrix TsimMatrix;

typedef struct TsimConfig {
  enum TsimMeasure measure;
  enum TsimStdMode std_mode;
  // Must be finite and >= 1.
  double lambda;
} TsimConfig;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static NUL-terminated string.
const char *tsim_version(void);

// TSIM with sample deviation and lambda 1.
struct TsimConfig tsim_config_default(void);

// Message for the last failed call on this thread, or NULL after a success.
// The pointer stays valid until the next call into this library on the same thread.
const char *tsim_last_error_message(void);

// Parses basket CSV (`transaction_id,item[,count]`).
//
// # Safety
// `data` must point to `len` readable bytes; `out` must be a valid pointer.
enum TsimStatus tsim_dataset_parse_basket(const uint8_t *data,
                                          size_t len,
                                          struct TsimDataset **out);

// Parses a transaction/item count matrix CSV.
//
// # Safety
// `data` must point to `len` readable bytes; `out` must be a valid pointer.
enum TsimStatus tsim_dataset_parse_matrix(const uint8_t *data,
                                          size_t len,
                                          struct TsimDataset **out);

// # Safety
// `ds` must be NULL or a handle from this library that has not been freed.
void tsim_dataset_free(struct TsimDataset *ds);

// # Safety
// `ds` must be a live dataset handle.
size_t tsim_dataset_transaction_count(const struct TsimDataset *ds);

// # Safety
// `ds` must be a live dataset handle.
size_t tsim_dataset_item_count(const struct TsimDataset *ds);

// Similarity of two transactions under `config`. Per-item statistics are
// taken over the whole dataset.
//
// # Safety
// `ds` must be a live handle, `tid_a`/`tid_b` NUL-terminated strings, `out` valid.
enum TsimStatus tsim_pair_similarity(const struct TsimDataset *ds,
                                     const char *tid_a,
                                     const char *tid_b,
                                     struct TsimConfig config,
                                     double *out);

// # Safety
// `ds` must be a live handle; `out` must be a valid pointer.
enum TsimStatus tsim_matrix_compute(const struct TsimDataset *ds,
                                    struct TsimConfig config,
                                    struct TsimMatrix **out);

// # Safety
// `m` must be NULL or a handle from this library that has not been freed.
void tsim_matrix_free(struct TsimMatrix *m);

// Number of rows (= columns).
//
// # Safety
// `m` must be a live matrix handle.
size_t tsim_matrix_size(const struct TsimMatrix *m);

// # Safety
// `m` must be a live matrix handle; `out` must be a valid pointer.
enum TsimStatus tsim_matrix_get(const struct TsimMatrix *m, size_t row, size_t col, double *out);

// Matrix as CSV with six decimals. Release the string with [`tsim_string_free`].
//
// # Safety
// `m` must be a live matrix handle; `out` must be a valid pointer.
enum TsimStatus tsim_matrix_to_csv(const struct TsimMatrix *m, char **out);

// Connected components of the graph with edges where similarity >= `threshold`.
//
// # Safety
// `m` must be a live matrix handle; `out` must be a valid pointer.
enum TsimStatus tsim_cluster(const struct TsimMatrix *m,
                             double threshold,
                             struct TsimClustering **out);

// # Safety
// `c` must be NULL or a handle from this library that has not been freed.
void tsim_clustering_free(struct TsimClustering *c);

// # Safety
// `c` must be a live clustering handle.
size_t tsim_clustering_count(const struct TsimClustering *c);

// # Safety
// `c` must be a live clustering handle; `out` must be a valid pointer.
enum TsimStatus tsim_clustering_cluster_size(const struct TsimClustering *c,
                                             size_t index,
                                             size_t *out);

// Clustering as the JSON cluster document. Release with [`tsim_string_free`].
//
// # Safety
// `c` must be a live clustering handle; `out` must be a valid pointer.
enum TsimStatus tsim_clustering_to_json(const struct TsimClustering *c, char **out);

// # Safety
// `s` must be NULL or a string returned by this library that has not been freed.
void tsim_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TSIM_H */
