#ifndef LAYERSCOPE_H
#define LAYERSCOPE_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes. Every fallible call returns one; on anything but LS_OK the
 * thread-local message from ls_last_error() describes what went wrong. */
typedef enum ls_status {
  LS_OK = 0,
  LS_ERROR_PARSE = 1,
  LS_ERROR_VALIDATION = 2,
  LS_ERROR_ARGUMENT = 3,
  LS_ERROR_INTERNAL = 4
} ls_status;

typedef struct ls_space ls_space;
typedef struct ls_clustering ls_clustering;

const char* ls_version(void);

/* Message for the most recent failure on the calling thread, or "". */
const char* ls_last_error(void);

/* Frees strings returned through char** out parameters. */
void ls_string_free(char* s);

/* Frees index arrays returned through size_t** out parameters. */
void ls_indices_free(size_t* indices);

/* Parses a distance-matrix CSV: a header row of labels, then a full square
 * matrix of decimal distances. */
ls_status ls_space_from_matrix_csv(const char* text, ls_space** out);

/* Parses a point-cloud CSV of rows "label,x1,...,xd" (no header) under the
 * named metric: "euclidean", "manhattan" or "chebyshev". */
ls_status ls_space_from_points_csv(const char* text, const char* metric, ls_space** out);

void ls_space_free(ls_space* space);

ls_status ls_space_size(const ls_space* space, size_t* out);

/* Greedy farthest-point subsample of the given size, seeded. The result is a
 * strictly increasing index array of length `count`. */
ls_status ls_farthest_point_sample(const ls_space* space, size_t count, uint64_t seed,
                                   size_t** indices, size_t* len);

/* The degree-Rips clustering of `space` up to vertex degree k_max, as a
 * two-parameter step function (scale ascending, degree descending). */
ls_status ls_degree_rips(const ls_space* space, int k_max, ls_clustering** out);

void ls_clustering_free(ls_clustering* clustering);

ls_status ls_clustering_json(const ls_clustering* clustering, char** out);

/* Graphviz digraph of the (cell, cluster) poset, covering edges only. */
ls_status ls_gamma_dot(const ls_clustering* clustering, char** out);

/* Families of marked poset elements for ls_layer_points_json/_dot. */
typedef enum ls_point_family {
  LS_LAYER_POINTS = 1,
  LS_BRANCH_POINTS = 2
} ls_point_family;

/* JSON of the selected point families. `families` is a bitwise or of
 * ls_point_family values; `slice_axis` restricts the output to one axis'
 * slice points (1-based) or reports global plus all slices when 0. */
ls_status ls_layer_points_json(const ls_clustering* clustering, unsigned families,
                               int slice_axis, char** out);

/* Graphviz digraph of the sub-poset induced on the selected points. */
ls_status ls_layer_points_dot(const ls_clustering* clustering, unsigned families,
                              int slice_axis, char** out);

/* Retract analysis of a subsample against its ambient space. `sample` holds
 * strictly increasing indices into `parent`. The parameters c, eps and delta
 * are decimal strings; pass NULL to use the documented defaults (c = 0,
 * eps = N_k, delta = max(2h, N_k - eps)). `outcome` is the suggested process
 * exit code: 0 retract verified, 1 conditions unmet, 3 soundness violation.
 * The JSON report is written regardless of the outcome. */
ls_status ls_retract_check(const ls_space* parent, const size_t* sample, size_t sample_len,
                           int k, const char* c, const char* eps, const char* delta,
                           int force_merge_index_max, char** report, int* outcome);

/* Small-parameter corollary: tests N_k + 2h against the phase-change gaps and
 * on success verifies the exact-top-triangle retract at the default
 * parameters. Outcomes as in ls_retract_check. */
ls_status ls_smallparam_check(const ls_space* parent, const size_t* sample, size_t sample_len,
                              int k, int force_merge_index_max, char** report, int* outcome);

/* Truncation corollary on a single space: the (0, c) self-interleaving between
 * the tower truncated below c and the full tower, plus the direct
 * layer-point isomorphism test for small c. */
ls_status ls_truncation_check(const ls_space* space, const char* c, int force_merge_index_max,
                              char** report, int* outcome);

/* The k > 0 obstruction note for X = Y: admissible parameters force
 * c + eps + delta to reach the first positive phase-change value. Outcome 0
 * means the obstruction held, 1 not applicable or not admissible, 3 a
 * counterexample (which the theory rules out). */
ls_status ls_xy_note_check(const ls_space* space, int k, const char* c, const char* eps,
                           const char* delta, char** report, int* outcome);

#ifdef __cplusplus
}
#endif

#endif /* LAYERSCOPE_H */
