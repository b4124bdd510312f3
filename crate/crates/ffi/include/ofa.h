/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#ifndef OFA_H
#define OFA_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum OfaMode {
  OFA_MODE_END_POSITIONS = 0,
  OFA_MODE_ANCHORED = 1,
} OfaMode;

/**
 * Result code of every call.
 */
typedef enum OfaStatus {
  OFA_STATUS_OK = 0,
  OFA_STATUS_NULL_ARGUMENT = 1,
  OFA_STATUS_INVALID_UTF8 = 2,
  OFA_STATUS_PARSE = 3,
  OFA_STATUS_BUDGET = 4,
  OFA_STATUS_FORMAT = 5,
  OFA_STATUS_FOREIGN_CHAR = 6,
  OFA_STATUS_INTERNAL = 7,
} OfaStatus;

/**
 * A compiled automaton.
 */
typedef struct OfaAutomaton OfaAutomaton;

/**
 * End positions found by [`ofa_find`].
 */
typedef struct OfaMatches OfaMatches;

typedef struct OfaCompileOptions {
  enum OfaMode mode;
  uint32_t max_lookahead;
  size_t max_nodes_per_trie;
  size_t dfa_state_cap;
} OfaCompileOptions;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. Valid until the
 * next failing call on the same thread.
 */
const char *ofa_last_error_message(void);

struct OfaCompileOptions ofa_default_options(void);

/**
 * Compiles a NUL-terminated UTF-8 pattern. `options` may be null for the
 * defaults.
 */
enum OfaStatus ofa_compile(const char *pattern,
                           const struct OfaCompileOptions *options,
                           struct OfaAutomaton **out);

/**
 * Loads an automaton from the text format.
 */
enum OfaStatus ofa_load(const uint8_t *text, size_t len, struct OfaAutomaton **out);

/**
 * Renders the automaton in the text format as a NUL-terminated string.
 * Release it with [`ofa_string_free`].
 */
enum OfaStatus ofa_serialize(const struct OfaAutomaton *automaton, char **out);

size_t ofa_automaton_state_count(const struct OfaAutomaton *automaton);

size_t ofa_automaton_class_count(const struct OfaAutomaton *automaton);

/**
 * Finds every end-of-match position in `len` bytes of UTF-8 input.
 * Positions count code points.
 */
enum OfaStatus ofa_find(const struct OfaAutomaton *automaton,
                        const uint8_t *input,
                        size_t len,
                        struct OfaMatches **out);

size_t ofa_matches_len(const struct OfaMatches *matches);

/**
 * Pointer to `ofa_matches_len` ascending positions; valid until the
 * handle is freed.
 */
const size_t *ofa_matches_positions(const struct OfaMatches *matches);

size_t ofa_matches_chars_read(const struct OfaMatches *matches);

/**
 * Input length in code points.
 */
size_t ofa_matches_input_len(const struct OfaMatches *matches);

void ofa_matches_free(struct OfaMatches *matches);

void ofa_automaton_free(struct OfaAutomaton *automaton);

void ofa_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* OFA_H */
