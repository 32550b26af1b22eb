#ifndef TASBENCH_H
#define TASBENCH_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes.
 */
typedef enum TasbenchStatus {
  TASBENCH_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  TASBENCH_STATUS_NULL_ARGUMENT = 1,
  /**
   * A string argument was not UTF-8.
   */
  TASBENCH_STATUS_INVALID_UTF8 = 2,
  /**
   * The tile system text did not parse.
   */
  TASBENCH_STATUS_PARSE = 3,
  /**
   * Compilation was refused because the system is not locally consistent.
   */
  TASBENCH_STATUS_NOT_LOCALLY_CONSISTENT = 4,
  /**
   * Compilation failed for another reason.
   */
  TASBENCH_STATUS_COMPILE = 5,
  /**
   * The random-bit string was not made of '0' and '1'.
   */
  TASBENCH_STATUS_INVALID_BITS = 6,
  /**
   * The address is past the last table entry.
   */
  TASBENCH_STATUS_ADDRESS_RANGE = 7,
  /**
   * The addressed entry has no sub-entries.
   */
  TASBENCH_STATUS_EMPTY_ENTRY = 8,
  /**
   * The table itself is malformed.
   */
  TASBENCH_STATUS_LOOKUP = 9,
  /**
   * The library panicked; the message has the details.
   */
  TASBENCH_STATUS_INTERNAL = 10,
} TasbenchStatus;

/**
 * A compiled lookup table together with its source system.
 */
typedef struct TasbenchCompiled TasbenchCompiled;

/**
 * A parsed tile assembly system.
 */
typedef struct TasbenchSystem TasbenchSystem;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. The pointer is
 * valid until the next call into the library from this thread.
 */
const char *tasbench_last_error(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void tasbench_string_free(char *s);

/**
 * Parses a tile system in the text format.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a valid pointer.
 */
enum TasbenchStatus tasbench_system_parse(const char *text, struct TasbenchSystem **out);

/**
 * Releases a system. Null is ignored.
 *
 * # Safety
 * `sys` must come from [`tasbench_system_parse`] and not have been freed.
 */
void tasbench_system_free(struct TasbenchSystem *sys);

/**
 * Number of tile types, or 0 for a null handle.
 *
 * # Safety
 * `sys` must be null or a live handle.
 */
size_t tasbench_system_tile_count(const struct TasbenchSystem *sys);

/**
 * Checks local consistency over assemblies of at most `bound` tiles.
 * `witness` may be null; otherwise it receives a description of the
 * violation, or null when the system passes.
 *
 * # Safety
 * `sys` must be a live handle, `consistent` a valid pointer, and `witness`
 * null or a valid pointer.
 */
enum TasbenchStatus tasbench_check_local_consistency(const struct TasbenchSystem *sys,
                                                     size_t bound,
                                                     bool *consistent,
                                                     char **witness);

/**
 * Compiles the lookup table. With `force` the local-consistency check is
 * skipped.
 *
 * # Safety
 * `sys` must be a live handle and `out` a valid pointer.
 */
enum TasbenchStatus tasbench_compile(const struct TasbenchSystem *sys,
                                     bool force,
                                     struct TasbenchCompiled **out);

/**
 * Releases a compiled system. Null is ignored.
 *
 * # Safety
 * `cs` must come from [`tasbench_compile`] and not have been freed.
 */
void tasbench_compiled_free(struct TasbenchCompiled *cs);

/**
 * Number of table entries, or 0 for a null handle.
 *
 * # Safety
 * `cs` must be null or a live handle.
 */
uint64_t tasbench_compiled_entry_count(const struct TasbenchCompiled *cs);

/**
 * Table length in columns, or 0 for a null handle.
 *
 * # Safety
 * `cs` must be null or a live handle.
 */
size_t tasbench_compiled_table_len(const struct TasbenchCompiled *cs);

/**
 * The compiled artifact as text, or null for a null handle. Free with
 * [`tasbench_string_free`].
 *
 * # Safety
 * `cs` must be null or a live handle.
 */
char *tasbench_compiled_to_text(const struct TasbenchCompiled *cs);

/**
 * Runs the table sweep for `addr` with random bits `bits` (most significant
 * first; null means all zeros). On success `selected` receives the index of
 * the chosen sub-entry in table order and `count` the number of sub-entries.
 *
 * # Safety
 * `cs` must be a live handle, `bits` null or a NUL-terminated string, and
 * `selected` and `count` valid pointers.
 */
enum TasbenchStatus tasbench_lookup(const struct TasbenchCompiled *cs,
                                    uint64_t addr,
                                    const char *bits,
                                    uint64_t *selected,
                                    uint64_t *count);

/**
 * Checks the simulation conditions up to `bound`. `passed` receives the
 * verdict; `report`, if not null, receives the full report text.
 *
 * # Safety
 * `cs` must be a live handle, `passed` a valid pointer, and `report` null or
 * a valid pointer.
 */
enum TasbenchStatus tasbench_verify(const struct TasbenchCompiled *cs,
                                    size_t bound,
                                    bool *passed,
                                    char **report);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TASBENCH_H */
