#ifndef QUBO_SEMISYM_H
#define QUBO_SEMISYM_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum QsStatus {
  QS_STATUS_OK = 0,
  QS_STATUS_NULL_POINTER = 1,
  QS_STATUS_DIMENSION = 2,
  QS_STATUS_CAPACITY = 3,
  QS_STATUS_PARAMETER = 4,
  QS_STATUS_FORMAT = 5,
  QS_STATUS_CONTRACT = 6,
  QS_STATUS_IO = 7,
  /**
   * A Rust panic was caught at the boundary.
   */
  QS_STATUS_INTERNAL = 8,
} QsStatus;

typedef enum QsProblem {
  QS_PROBLEM_MAX_CLIQUE = 0,
  QS_PROBLEM_HAMILTON_CYCLES = 1,
  QS_PROBLEM_GRAPH_COLORING = 2,
  QS_PROBLEM_VERTEX_COVER = 3,
  QS_PROBLEM_GRAPH_ISOMORPHISM = 4,
} QsProblem;

typedef struct QsCircuit QsCircuit;

typedef struct QsGraph QsGraph;

typedef struct QsQubo QsQubo;

typedef struct QsReport QsReport;

/**
 * Mirror of the library's equivalence verdict.
 */
typedef struct QsVerdict {
  bool valid_preserved;
  bool invalid_not_lower;
  bool global_min_preserved;
  size_t valid_count;
  size_t invalid_count;
  size_t invalid_lowered;
  double original_min;
  double modified_min;
} QsVerdict;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failing call on this thread, or null. The pointer
 * stays valid until the next failing call on this thread.
 */
const char *qs_last_error(void);

void qs_string_free(char *s);

/**
 * Uniformly random simple graph with `v` vertices and `e` edges.
 */
enum QsStatus qs_graph_sample(size_t v, size_t e, uint64_t seed, struct QsGraph **out);

/**
 * Graph from `count` edges stored as consecutive `(a, b)` pairs.
 */
enum QsStatus qs_graph_from_edges(size_t v,
                                  const size_t *edges,
                                  size_t count,
                                  struct QsGraph **out);

/**
 * Relabelled copy of `g` under a uniformly random permutation.
 */
enum QsStatus qs_graph_permuted(const struct QsGraph *g, uint64_t seed, struct QsGraph **out);

size_t qs_graph_num_vertices(const struct QsGraph *g);

size_t qs_graph_num_edges(const struct QsGraph *g);

void qs_graph_free(struct QsGraph *g);

enum QsStatus qs_qubo_new(size_t n, struct QsQubo **out);

void qs_qubo_free(struct QsQubo *q);

/**
 * Number of qubits; 0 for a null handle.
 */
size_t qs_qubo_n(const struct QsQubo *q);

size_t qs_qubo_coupling_count(const struct QsQubo *q);

/**
 * Sets entry `(i, j)`; `(j, i)` is the same entry. Zero removes it.
 */
enum QsStatus qs_qubo_set(struct QsQubo *q, size_t i, size_t j, double value);

enum QsStatus qs_qubo_get(const struct QsQubo *q, size_t i, size_t j, double *out);

enum QsStatus qs_qubo_set_offset(struct QsQubo *q, double offset);

/**
 * Energy of the bitvector `bits[0..len]` (each byte 0 or 1).
 */
enum QsStatus qs_qubo_energy(const struct QsQubo *q, const uint8_t *bits, size_t len, double *out);

enum QsStatus qs_qubo_from_json(const char *text, struct QsQubo **out);

enum QsStatus qs_qubo_to_json(const struct QsQubo *q, char **out);

/**
 * Encodes a graph problem. `g2` is only read for isomorphism and `colors`
 * only for coloring.
 */
enum QsStatus qs_encode(enum QsProblem problem,
                        const struct QsGraph *g1,
                        const struct QsGraph *g2,
                        size_t colors,
                        double penalty,
                        struct QsQubo **out);

/**
 * Sum of absolute coefficients; 0 for a null handle.
 */
double qs_default_z(const struct QsQubo *q);

/**
 * Factors out up to `budget` semi-symmetries with penalty `z`. Both output
 * handles are written on success.
 */
enum QsStatus qs_factor_out(const struct QsQubo *q,
                            size_t budget,
                            double z,
                            struct QsQubo **out_qubo,
                            struct QsReport **out_report);

size_t qs_report_num_ancillas(const struct QsReport *r);

enum QsStatus qs_report_to_json(const struct QsReport *r, char **out);

void qs_report_free(struct QsReport *r);

/**
 * Brute-force equivalence check of a factoring result.
 */
enum QsStatus qs_verify(const struct QsQubo *q,
                        const struct QsQubo *q_mod,
                        const struct QsReport *report,
                        struct QsVerdict *out);

/**
 * QAOA circuit with `p` layers at uniform angles. `packed` selects the
 * matching-based coupling order.
 */
enum QsStatus qs_circuit_build(const struct QsQubo *q,
                               size_t p,
                               double gamma,
                               double beta,
                               bool packed,
                               struct QsCircuit **out);

size_t qs_circuit_cnot_count(const struct QsCircuit *c);

size_t qs_circuit_depth(const struct QsCircuit *c);

size_t qs_circuit_num_gates(const struct QsCircuit *c);

enum QsStatus qs_circuit_to_text(const struct QsCircuit *c, char **out);

void qs_circuit_free(struct QsCircuit *c);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QUBO_SEMISYM_H */
