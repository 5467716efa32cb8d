#ifndef ELASTIC_SYNC_H
#define ELASTIC_SYNC_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum EsStatus {
  ES_STATUS_OK = 0,
  ES_STATUS_NULL_ARGUMENT = 1,
  ES_STATUS_INVALID_UTF8 = 2,
  ES_STATUS_IO = 3,
  ES_STATUS_PARSE = 4,
  ES_STATUS_VALIDATION = 5,
  ES_STATUS_CONFIG = 6,
  ES_STATUS_SYNC = 7,
  ES_STATUS_OUT_OF_RANGE = 8,
  ES_STATUS_INTERNAL = 9,
  ES_STATUS_PANIC = 10,
} EsStatus;

typedef enum EsReceiverKind {
  ES_RECEIVER_KIND_NONE = 0,
  ES_RECEIVER_KIND_PLAYER = 1,
  ES_RECEIVER_KIND_OUT = 2,
  ES_RECEIVER_KIND_GOAL = 3,
} EsReceiverKind;

/**
 * Schema and tuning parameters.
 */
typedef struct EsConfig EsConfig;

/**
 * A loaded match.
 */
typedef struct EsMatch EsMatch;

/**
 * Synchronization output. Strings handed out stay valid until the handle
 * is freed.
 */
typedef struct EsResults EsResults;

/**
 * One synchronized event. Frames are -1 when absent.
 */
typedef struct EsResultRow {
  uint8_t period;
  int64_t start_frame;
  int64_t end_frame;
  enum EsReceiverKind receiver_kind;
  double score;
} EsResultRow;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL. Valid until the
 * next failing call on the same thread.
 */
const char *es_last_error_message(void);

void es_clear_last_error(void);

/**
 * Library version as a static string.
 */
const char *es_version(void);

/**
 * # Safety
 * `out` must be a valid pointer to writable storage for a handle.
 */
enum EsStatus es_config_new(struct EsConfig **out);

/**
 * Reads a TOML schema file.
 *
 * # Safety
 * `path` must be a NUL-terminated string; `out` as for [`es_config_new`].
 */
enum EsStatus es_config_load(const char *path, struct EsConfig **out);

/**
 * Overrides one dotted key, e.g. `sync.window_half_s` = `4`.
 *
 * # Safety
 * `config` must be a live handle; `key` and `value` NUL-terminated strings.
 */
enum EsStatus es_config_set(struct EsConfig *config, const char *key, const char *value);

/**
 * # Safety
 * `config` must be NULL or a handle not yet freed.
 */
void es_config_free(struct EsConfig *config);

/**
 * Loads tracking and event files with the given schema.
 *
 * # Safety
 * Paths must be NUL-terminated strings, `config` a live handle and `out`
 * writable.
 */
enum EsStatus es_match_load(const char *tracking,
                            const char *events,
                            const struct EsConfig *config,
                            struct EsMatch **out);

/**
 * Number of events in the match, 0 for NULL.
 *
 * # Safety
 * `m` must be NULL or a live handle.
 */
size_t es_match_event_count(const struct EsMatch *m);

/**
 * # Safety
 * `m` must be NULL or a handle not yet freed.
 */
void es_match_free(struct EsMatch *m);

/**
 * Runs the full pipeline with the sync section of `config`.
 *
 * # Safety
 * `m` and `config` must be live handles and `out` writable.
 */
enum EsStatus es_synchronize(const struct EsMatch *m,
                             const struct EsConfig *config,
                             struct EsResults **out);

/**
 * Number of result rows, 0 for NULL.
 *
 * # Safety
 * `results` must be NULL or a live handle.
 */
size_t es_results_len(const struct EsResults *results);

/**
 * Copies row `index` into `out`.
 *
 * # Safety
 * `results` must be a live handle and `out` writable.
 */
enum EsStatus es_results_row(const struct EsResults *results,
                             size_t index,
                             struct EsResultRow *out);

/**
 * Event id of row `index`, or NULL when out of range. Owned by `results`.
 *
 * # Safety
 * `results` must be NULL or a live handle.
 */
const char *es_results_event_id(const struct EsResults *results, size_t index);

/**
 * Receiver of row `index` (a player id, `OUT` or `GOAL`), or NULL. Owned
 * by `results`.
 *
 * # Safety
 * `results` must be NULL or a live handle.
 */
const char *es_results_receiver(const struct EsResults *results, size_t index);

/**
 * Writes the results file, in the same format as the command-line tool.
 *
 * # Safety
 * `results` must be a live handle and `path` a NUL-terminated string.
 */
enum EsStatus es_results_write_csv(const struct EsResults *results, const char *path);

/**
 * # Safety
 * `results` must be NULL or a handle not yet freed.
 */
void es_results_free(struct EsResults *results);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ELASTIC_SYNC_H */
