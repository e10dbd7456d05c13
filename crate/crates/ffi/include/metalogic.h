#ifndef METALOGIC_H
#define METALOGIC_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum MlStatus {
  ML_STATUS_OK = 0,
  ML_STATUS_NULL_ARGUMENT = 1,
  ML_STATUS_INVALID_UTF8 = 2,
  ML_STATUS_PANIC = 3,
  ML_STATUS_INVALID_GRAPH = 10,
  ML_STATUS_SENTENCE_MISMATCH = 11,
  ML_STATUS_PASSAGE_MISMATCH = 12,
  ML_STATUS_SYNTAX = 13,
  ML_STATUS_UNKNOWN_ID = 14,
  ML_STATUS_UNKNOWN_OPERATOR = 15,
  ML_STATUS_UNRESOLVED_DEGREE = 16,
  ML_STATUS_SCHEMA_VIOLATION = 17,
  ML_STATUS_LENGTH_MISMATCH = 18,
  ML_STATUS_UNKNOWN_LABEL = 19,
  ML_STATUS_EMPTY_INPUT = 20,
  ML_STATUS_MISSING_SPANS = 21,
  ML_STATUS_VARIABLE_ALIGNMENT = 22,
  ML_STATUS_PAIRING = 23,
  ML_STATUS_PARSE_MISMATCH = 24,
  ML_STATUS_MALFORMED_ROW = 25,
  ML_STATUS_MULTIPLE_ROOTS = 26,
  ML_STATUS_INVALID_TREE = 27,
  ML_STATUS_LEXICON_OVERLAP = 28,
  ML_STATUS_MALFORMED_LEXICON = 29,
  ML_STATUS_EMPTY_CORPUS = 30,
  ML_STATUS_IO = 31,
} MlStatus;

// Opaque metagraph handle.
typedef struct MlGraph MlGraph;

// Opaque running scorer.
typedef struct MlScorer MlScorer;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failure on this thread, or null. The pointer stays
// valid until the next call into this library on the same thread.
const char *ml_last_error(void);

// Releases a string returned by this library. Null is ignored.
//
// # Safety
// `s` must be null or a string produced by this library and not yet freed.
void ml_string_free(char *s);

// Reads one graph in canonical JSON.
//
// # Safety
// `json` must be a NUL-terminated string; `out` must be writable.
enum MlStatus ml_graph_from_json(const char *json, struct MlGraph **out);

// Reads a linearized graph. `source` is the passage in labelled form
// (`sent1: v1: ... sent2: ...`); `strict` rejects any diagnostic, while
// lenient parsing keeps whatever could be recovered.
//
// # Safety
// String arguments must be NUL-terminated; `out` must be writable.
enum MlStatus ml_graph_from_linearized(const char *passage_id,
                                       const char *source,
                                       const char *linearized,
                                       bool strict,
                                       struct MlGraph **out);

// # Safety
// `g` must be null or a handle from this library, not yet freed.
void ml_graph_free(struct MlGraph *g);

// # Safety
// `g` must be a live handle; `out` must be writable.
enum MlStatus ml_graph_to_json(const struct MlGraph *g, char **out);

// Fails with `InvalidGraph` if the graph does not validate.
//
// # Safety
// `g` must be a live handle; `out` must be writable.
enum MlStatus ml_graph_to_linearized(const struct MlGraph *g, char **out);

// Writes the violation list as a JSON array to `out` (empty when valid)
// and returns `InvalidGraph` if it is non-empty.
//
// # Safety
// `g` must be a live handle; `out` must be writable.
enum MlStatus ml_graph_validate(const struct MlGraph *g, char **out);

// Normalizes a whitespace-separated operator string (`[necessary]
// [negative]` or `□ ¬`), outermost first. `out` receives the normal
// form in bracket words, empty for the identity.
//
// # Safety
// `prefix` must be NUL-terminated; `out` must be writable.
enum MlStatus ml_modal_normalize(const char *prefix, char **out);

// Degree of certainty of an operator string: 0 impossible .. 4 necessary.
//
// # Safety
// `prefix` must be NUL-terminated; `out` must be writable.
enum MlStatus ml_modal_degree(const char *prefix, uint8_t *out);

// Cohen's kappa of two integer label sequences of length `len` over the
// `space_len` labels in `space`.
//
// # Safety
// `a` and `b` must point to `len` values, `space` to `space_len` values
// (each may be null when its length is 0); `out` must be writable.
enum MlStatus ml_kappa(const int32_t *a,
                       const int32_t *b,
                       size_t len,
                       const int32_t *space,
                       size_t space_len,
                       double *out);

struct MlScorer *ml_scorer_new(void);

// # Safety
// `s` must be null or a handle from [`ml_scorer_new`], not yet freed.
void ml_scorer_free(struct MlScorer *s);

// Adds one sample. A passage mismatch is recorded in the report rather
// than returned.
//
// # Safety
// All handles must be live.
enum MlStatus ml_scorer_add(struct MlScorer *s,
                            const struct MlGraph *gold,
                            const struct MlGraph *pred);

// Adds one sample whose prediction is linearized text, parsed against the
// gold passage. Parse problems lower the score instead of failing.
//
// # Safety
// `s` and `gold` must be live handles; `linearized` NUL-terminated.
enum MlStatus ml_scorer_add_linearized(struct MlScorer *s,
                                       const struct MlGraph *gold,
                                       const char *linearized,
                                       bool strict);

// Dataset report as JSON. The scorer stays usable.
//
// # Safety
// `s` must be a live handle; `out` must be writable.
enum MlStatus ml_scorer_report(const struct MlScorer *s, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* METALOGIC_H */
