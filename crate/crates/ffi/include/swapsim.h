#ifndef SWAPSIM_H
#define SWAPSIM_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every call. Positive values mirror the simulator's error codes.
 */
typedef enum SwapsimStatus {
  SWAPSIM_STATUS_OK = 0,
  SWAPSIM_STATUS_INVALID_REQUEST = 1,
  SWAPSIM_STATUS_INVALID_TRADE = 2,
  SWAPSIM_STATUS_INVALID_TRANSITION = 3,
  SWAPSIM_STATUS_INVALID_SCHEDULE = 4,
  SWAPSIM_STATUS_INVALID_INTERVAL = 5,
  SWAPSIM_STATUS_UNKNOWN_PARTY = 6,
  SWAPSIM_STATUS_UNROUTABLE_COMMAND = 7,
  SWAPSIM_STATUS_RESET_MISSING = 8,
  SWAPSIM_STATUS_CLOCK_REGRESSION = 9,
  SWAPSIM_STATUS_NO_CLOCK = 10,
  SWAPSIM_STATUS_NOT_FOUND = 11,
  SWAPSIM_STATUS_DUPLICATE_TRADE = 12,
  SWAPSIM_STATUS_DUPLICATE_LEI = 13,
  SWAPSIM_STATUS_PARTY_IN_USE = 14,
  SWAPSIM_STATUS_CONCURRENCY_CONFLICT = 15,
  SWAPSIM_STATUS_ALREADY_RESET = 16,
  SWAPSIM_STATUS_ALREADY_PAID = 17,
  SWAPSIM_STATUS_ALREADY_EXISTS = 18,
  SWAPSIM_STATUS_NOTHING_SCHEDULED = 19,
  SWAPSIM_STATUS_STORAGE = 20,
  SWAPSIM_STATUS_INTERNAL = 21,
  SWAPSIM_STATUS_NULL_ARGUMENT = -1,
  SWAPSIM_STATUS_INVALID_UTF8 = -2,
  SWAPSIM_STATUS_INVALID_JSON = -3,
  SWAPSIM_STATUS_PANIC = -4,
} SwapsimStatus;

/**
 * Opaque simulator handle.
 */
typedef struct SwapsimHandle SwapsimHandle;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *swapsim_version(void);

/**
 * Message for the last failing call on this thread, or NULL. The pointer
 * stays valid until the next call on the same thread.
 */
const char *swapsim_last_error(void);

/**
 * Release a string returned through an out pointer. NULL is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed already.
 */
void swapsim_string_free(char *s);

/**
 * Create an in-memory simulator.
 *
 * # Safety
 * `out` must be a valid pointer to write the handle to.
 */
enum SwapsimStatus swapsim_new(uint64_t seed, struct SwapsimHandle **out);

/**
 * Open a simulator backed by files in `data_dir`, resuming any run stored there.
 *
 * # Safety
 * `data_dir` must be a NUL-terminated string and `out` a valid pointer.
 */
enum SwapsimStatus swapsim_open(const char *data_dir, uint64_t seed, struct SwapsimHandle **out);

/**
 * Destroy a handle. NULL is ignored.
 *
 * # Safety
 * `h` must come from `swapsim_new` or `swapsim_open` and not be used afterwards.
 */
void swapsim_free(struct SwapsimHandle *h);

/**
 * Start a new run with `seed`. Registered parties are kept.
 *
 * # Safety
 * `h` must be a live handle.
 */
enum SwapsimStatus swapsim_reset(struct SwapsimHandle *h, uint64_t seed);

/**
 * Register a party; the new party is written to `out_json`.
 *
 * # Safety
 * `h` must be a live handle, the strings NUL-terminated, `out_json` valid.
 */
enum SwapsimStatus swapsim_create_party(struct SwapsimHandle *h,
                                        const char *name,
                                        const char *legal_entity_id,
                                        char **out_json);

/**
 * Remove a party that no live trade references.
 *
 * # Safety
 * `h` must be a live handle and `party_id` NUL-terminated.
 */
enum SwapsimStatus swapsim_delete_party(struct SwapsimHandle *h, const char *party_id);

/**
 * Create the clock at `initial_time` (`YYYY-MM-DDTHH:MM:SS`).
 *
 * # Safety
 * `h` must be a live handle and `initial_time` NUL-terminated.
 */
enum SwapsimStatus swapsim_create_clock(struct SwapsimHandle *h, const char *initial_time);

/**
 * Current simulation time as a JSON clock document.
 *
 * # Safety
 * `h` must be a live handle and `out_json` valid.
 */
enum SwapsimStatus swapsim_clock(struct SwapsimHandle *h, char **out_json);

/**
 * Submit an executed trade given as JSON.
 *
 * # Safety
 * `h` must be a live handle and `trade_json` NUL-terminated.
 */
enum SwapsimStatus swapsim_submit_trade(struct SwapsimHandle *h, const char *trade_json);

/**
 * Confirm (`confirm` true) or reject an executed trade.
 *
 * # Safety
 * `h` must be a live handle and `trade_id` NUL-terminated.
 */
enum SwapsimStatus swapsim_consent(struct SwapsimHandle *h, const char *trade_id, bool confirm);

/**
 * Advance the clock to `to`; the trigger report is written to `out_json`.
 *
 * # Safety
 * `h` must be a live handle, `to` NUL-terminated, `out_json` valid.
 */
enum SwapsimStatus swapsim_advance_to(struct SwapsimHandle *h, const char *to, char **out_json);

/**
 * Advance to the next open deadline.
 *
 * # Safety
 * `h` must be a live handle and `out_json` valid.
 */
enum SwapsimStatus swapsim_forward(struct SwapsimHandle *h, char **out_json);

/**
 * Advance until no open deadlines remain.
 *
 * # Safety
 * `h` must be a live handle and `out_json` valid.
 */
enum SwapsimStatus swapsim_play(struct SwapsimHandle *h, char **out_json);

/**
 * Every blotter row as a JSON array.
 *
 * # Safety
 * `h` must be a live handle and `out_json` valid.
 */
enum SwapsimStatus swapsim_blotter(struct SwapsimHandle *h, char **out_json);

/**
 * One blotter row.
 *
 * # Safety
 * `h` must be a live handle, `trade_id` NUL-terminated, `out_json` valid.
 */
enum SwapsimStatus swapsim_trade(struct SwapsimHandle *h, const char *trade_id, char **out_json);

/**
 * The `limit` most recent events, newest first.
 *
 * # Safety
 * `h` must be a live handle and `out_json` valid.
 */
enum SwapsimStatus swapsim_event_stream(struct SwapsimHandle *h,
                                        size_t limit,
                                        bool cdm_only,
                                        char **out_json);

/**
 * The earliest open deadline, if any.
 *
 * # Safety
 * `h` must be a live handle and `out_json` valid.
 */
enum SwapsimStatus swapsim_next_deadline(struct SwapsimHandle *h, char **out_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SWAPSIM_H */
