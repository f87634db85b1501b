#ifndef PARALLEL_EA_H
#define PARALLEL_EA_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum PeaStatus {
  PEA_STATUS_OK = 0,
  PEA_STATUS_NULL_POINTER = 1,
  PEA_STATUS_INVALID_ARGUMENT = 2,
  PEA_STATUS_TOPOLOGY = 3,
  PEA_STATUS_OBJECTIVE = 4,
  PEA_STATUS_MODEL = 5,
  PEA_STATUS_BOUND = 6,
  PEA_STATUS_ORACLE = 7,
  PEA_STATUS_PANIC = 8,
} PeaStatus;

// Objective function handle.
typedef struct PeaObjective PeaObjective;

// Migration topology handle.
typedef struct PeaTopology PeaTopology;

// Result of one island-model run.
typedef struct PeaRunOutcome {
  uint64_t t_par;
  uint64_t t_seq;
  uint64_t t_com;
  bool success;
  int64_t best_fitness;
} PeaRunOutcome;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or NULL. The pointer stays
// valid until the next failing call on the same thread.
const char *pea_last_error_message(void);

// Builds a topology from its text form (`uniring`, `biring`, `torus`,
// `torus:WxH`, `hypercube`, `complete`) and island count.
//
// # Safety
// `name` must be a NUL-terminated string; `out_handle` must be writable.
enum PeaStatus pea_topology_new(const char *name, size_t mu, struct PeaTopology **out_handle);

// # Safety
// `handle` must come from [`pea_topology_new`] and not be freed twice. NULL is ignored.
void pea_topology_free(struct PeaTopology *handle);

// # Safety
// `handle` must be a live topology handle or NULL (returns 0).
size_t pea_topology_num_vertices(const struct PeaTopology *handle);

// # Safety
// `handle` must be a live topology handle or NULL (returns 0).
size_t pea_topology_num_edges(const struct PeaTopology *handle);

// # Safety
// `handle` must be a live topology handle; `out_diameter` must be writable.
enum PeaStatus pea_topology_diameter(const struct PeaTopology *handle, size_t *out_diameter);

// Builds an objective from `onemax`, `lo`, `jump:k` or `custom:trailingones`.
//
// # Safety
// `name` must be a NUL-terminated string; `out_handle` must be writable.
enum PeaStatus pea_objective_new(const char *name, size_t n, struct PeaObjective **out_handle);

// # Safety
// `handle` must come from [`pea_objective_new`] and not be freed twice. NULL is ignored.
void pea_objective_free(struct PeaObjective *handle);

// Evaluates `bits` (one byte per bit, 0 or 1) of length `len`.
//
// # Safety
// `bits` must point to `len` readable bytes; `out_value` must be writable.
enum PeaStatus pea_objective_evaluate(const struct PeaObjective *handle,
                                      const uint8_t *bits,
                                      size_t len,
                                      int64_t *out_value);

// Runs the island model once from a uniform random start.
//
// # Safety
// Handles must be live; `out_outcome` must be writable.
enum PeaStatus pea_run(const struct PeaObjective *objective,
                       const struct PeaTopology *topology,
                       double p,
                       uint64_t tau,
                       uint64_t seed,
                       uint64_t budget,
                       struct PeaRunOutcome *out_outcome);

// Samples propagation hitting times: `out_times[k-1] = T(k)` for `k = 1..=μ`,
// or -1 where the budget ran out. `out_len` must equal the island count.
//
// # Safety
// `out_times` must point to `out_len` writable values.
enum PeaStatus pea_hitting_times(const struct PeaTopology *topology,
                                 double p,
                                 size_t source,
                                 uint64_t budget,
                                 uint64_t seed,
                                 int64_t *out_times,
                                 size_t out_len);

// Single-island expected time bound `Σ 1/s_i` over the canonical levels.
//
// # Safety
// `objective` must be live; `out_value` must be writable.
enum PeaStatus pea_seq_bound(const struct PeaObjective *objective, double *out_value);

// Expected parallel time bound for the topology's kind and island count
// (`+inf` at `p = 0`).
//
// # Safety
// Handles must be live; `out_value` must be writable.
enum PeaStatus pea_topology_bound(const struct PeaObjective *objective,
                                  const struct PeaTopology *topology,
                                  double p,
                                  double *out_value);

// Per-level minimum over every bound valid for the topology.
//
// # Safety
// Handles must be live; `out_value` must be writable.
enum PeaStatus pea_best_bound(const struct PeaObjective *objective,
                              const struct PeaTopology *topology,
                              double p,
                              double *out_value);

// Exact expected `t_par` for a tiny instance. `fixed_start` may be NULL for a
// uniform random start, or a string of `0`/`1` placed on every island.
//
// # Safety
// Handles must be live; `fixed_start` must be NULL or NUL-terminated;
// `out_value` must be writable.
enum PeaStatus pea_oracle_expected_time(const struct PeaObjective *objective,
                                        const struct PeaTopology *topology,
                                        double p,
                                        uint64_t tau,
                                        const char *fixed_start,
                                        double *out_value);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PARALLEL_EA_H */
