#ifndef SAPP_H
#define SAPP_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SappEngine {
  SAPP_ENGINE_DIRECT = 0,
  SAPP_ENGINE_TRANSLATION = 1,
} SappEngine;

typedef enum SappStatus {
  SAPP_STATUS_OK = 0,
  SAPP_STATUS_NULL_POINTER = 1,
  SAPP_STATUS_INVALID_UTF8 = 2,
  SAPP_STATUS_PARSE = 3,
  SAPP_STATUS_NOT_SENTENCE = 4,
  SAPP_STATUS_QUANTIFIER_CAP = 5,
  SAPP_STATUS_AXIOM = 6,
  SAPP_STATUS_INTERNAL = 7,
} SappStatus;

typedef enum SappVerdict {
  SAPP_VERDICT_INVALID = 0,
  SAPP_VERDICT_VALID = 1,
} SappVerdict;

// Opaque parsed sentence.
typedef struct SappFormula SappFormula;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Parse a sentence. On success `*out` owns a new handle.
//
// # Safety
// `text` must be a NUL-terminated string and `out` a valid pointer.
enum SappStatus sapp_formula_parse(const char *text, struct SappFormula **out);

// Build an axiom instance by name (`lambda1` .. `lambda6`). `n` is the
// schema parameter for `lambda1` and `lambda2`, and must be negative for
// the others.
//
// # Safety
// `name` must be a NUL-terminated string and `out` a valid pointer.
enum SappStatus sapp_axiom(const char *name, int32_t n, struct SappFormula **out);

// Release a handle. Null is ignored.
//
// # Safety
// `f` must be null or a handle from this library not yet freed.
void sapp_formula_free(struct SappFormula *f);

// Decide validity with one engine. `cap` is the quantifier cap, or 0 for
// the engine default.
//
// # Safety
// `f` must be a live handle and `verdict` a valid pointer.
enum SappStatus sapp_decide(const struct SappFormula *f,
                            enum SappEngine engine,
                            uint32_t cap,
                            enum SappVerdict *verdict);

// Print the pure-equality translation. `*out` must be released with
// [`sapp_string_free`].
//
// # Safety
// `f` must be a live handle and `out` a valid pointer.
enum SappStatus sapp_translate(const struct SappFormula *f, char **out);

// Print a formula in the concrete syntax.
//
// # Safety
// `f` must be a live handle and `out` a valid pointer.
enum SappStatus sapp_formula_print(const struct SappFormula *f, char **out);

// Number of quantifiers in the formula, or -1 for a null handle.
//
// # Safety
// `f` must be null or a live handle.
int64_t sapp_formula_quantifiers(const struct SappFormula *f);

// Release a string returned by this library. Null is ignored.
//
// # Safety
// `s` must be null or a string from this library not yet freed.
void sapp_string_free(char *s);

// Message for the most recent failed call on this thread; empty after a
// success. Valid until the next call into the library on this thread.
const char *sapp_last_error_message(void);

// Stable name of a status code.
const char *sapp_status_name(enum SappStatus status);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SAPP_H */
