#ifndef ONTOCDM_H
#define ONTOCDM_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum OcStatus {
  OC_STATUS_OK = 0,
  OC_STATUS_NULL_ARGUMENT = 1,
  OC_STATUS_INVALID_UTF8 = 2,
  OC_STATUS_PARSE_ERROR = 3,
  OC_STATUS_INVALID_INPUT = 4,
  OC_STATUS_TRANSFORM_ERROR = 5,
  OC_STATUS_DEGENERATE_INPUT = 6,
  OC_STATUS_REPAIR_CONFLICT = 7,
  OC_STATUS_PANIC = 8,
} OcStatus;

typedef enum OcCategory {
  OC_CATEGORY_TYPE = 0,
  OC_CATEGORY_PHASED_SORTAL = 1,
  OC_CATEGORY_ROLE = 2,
  OC_CATEGORY_ATTRIBUTION = 3,
  OC_CATEGORY_UNCLASSIFIABLE = 4,
} OcCategory;

typedef enum OcRigidity {
  OC_RIGIDITY_RIGID = 0,
  OC_RIGIDITY_NON_RIGID = 1,
  OC_RIGIDITY_ANTI_RIGID = 2,
} OcRigidity;

/**
 * A conceptual data model.
 */
typedef struct OcModel OcModel;

/**
 * A parsed ontology.
 */
typedef struct OcOntology OcOntology;

typedef struct OcCounts {
  size_t entity_types;
  size_t relationships;
  size_t attributes;
  size_t generalizations;
} OcCounts;

typedef struct OcRegression {
  double slope;
  double intercept;
  double r_squared;
  size_t n;
} OcRegression;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parse an ontology in the JSON interchange format.
 *
 * # Safety
 * `data` must point to `len` readable bytes; `out` must be writable.
 */
enum OcStatus oc_ontology_read_json(const uint8_t *data, size_t len, struct OcOntology **out);

/**
 * Parse an RDF/XML ontology. With `strict`, constructs outside the
 * supported vocabulary are an error instead of being skipped.
 *
 * # Safety
 * `data` must point to `len` readable bytes; `out` must be writable.
 */
enum OcStatus oc_ontology_read_rdfxml(const uint8_t *data,
                                      size_t len,
                                      bool strict,
                                      struct OcOntology **out);

/**
 * # Safety
 * `ontology` must be null or a handle from this library, not yet freed.
 */
void oc_ontology_free(struct OcOntology *ontology);

/**
 * Transform an ontology into a model. `roots` may be null when
 * `n_roots` is 0, which selects every class. When `trace_json` is not
 * null it receives the rule trace.
 *
 * # Safety
 * `roots` must hold `n_roots` NUL-terminated strings; out pointers must
 * be writable.
 */
enum OcStatus oc_transform(const struct OcOntology *ontology,
                           const char *const *roots,
                           size_t n_roots,
                           struct OcModel **out,
                           char **trace_json);

/**
 * Parse a model document.
 *
 * # Safety
 * `data` must point to `len` readable bytes; `out` must be writable.
 */
enum OcStatus oc_model_read_json(const uint8_t *data, size_t len, struct OcModel **out);

/**
 * Canonical JSON for a model.
 *
 * # Safety
 * `model` must be a live handle; `out` must be writable.
 */
enum OcStatus oc_model_to_json(const struct OcModel *model, char **out);

/**
 * PlantUML class diagram for a model.
 *
 * # Safety
 * `model` must be a live handle; `out` must be writable.
 */
enum OcStatus oc_model_to_plantuml(const struct OcModel *model, bool provenance, char **out);

/**
 * # Safety
 * `model` must be a live handle; `out` must be writable.
 */
enum OcStatus oc_model_counts(const struct OcModel *model, struct OcCounts *out);

/**
 * # Safety
 * `model` must be null or a handle from this library, not yet freed.
 */
void oc_model_free(struct OcModel *model);

/**
 * Check a model against the modelling rules and taxonomy axioms, given
 * a meta-property annotation document. `diagnostics_json` receives the
 * findings; `error_count` the number with error severity.
 *
 * # Safety
 * `model` must be a live handle; `annotations_json` must point to `len`
 * readable bytes; out pointers must be writable.
 */
enum OcStatus oc_validate(const struct OcModel *model,
                          const uint8_t *annotations_json,
                          size_t len,
                          char **diagnostics_json,
                          size_t *error_count);

/**
 * Validate and apply every suggested repair, producing a new model.
 *
 * # Safety
 * As for [`oc_validate`]; `out` must be writable.
 */
enum OcStatus oc_repair(const struct OcModel *model,
                        const uint8_t *annotations_json,
                        size_t len,
                        struct OcModel **out);

/**
 * Ordinary least-squares fit of `ys` on `xs`.
 *
 * # Safety
 * `xs` and `ys` must each hold `n` doubles; `out` must be writable.
 */
enum OcStatus oc_fit_regression(const double *xs,
                                const double *ys,
                                size_t n,
                                struct OcRegression *out);

/**
 * Category of a concept from its rigidity, identity and dependence.
 * `rigidity` is an [`OcRigidity`] value.
 *
 * # Safety
 * `out` must be writable.
 */
enum OcStatus oc_classify_category(int32_t rigidity,
                                   bool identity,
                                   bool dependence,
                                   enum OcCategory *out);

/**
 * Message for the last failed call on this thread, or null. Valid until
 * the next call into the library from the same thread; do not free.
 */
const char *oc_last_error_message(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void oc_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ONTOCDM_H */
