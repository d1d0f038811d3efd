#ifndef ISOBOT_H
#define ISOBOT_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum IsoStatus {
  ISO_STATUS_OK = 0,
  ISO_STATUS_NULL_ARGUMENT = 1,
  ISO_STATUS_INVALID_UTF8 = 2,
  ISO_STATUS_INVALID_DIMS = 3,
  ISO_STATUS_LEVEL_ERROR = 4,
  ISO_STATUS_PARSE_ERROR = 5,
  ISO_STATUS_SLOT_LIMIT = 6,
  ISO_STATUS_INVALID_TRANSITION = 7,
  ISO_STATUS_UAT_ERROR = 8,
  ISO_STATUS_PANIC = 9,
} IsoStatus;

/**
 * A validated level.
 */
typedef struct IsoLevel IsoLevel;

/**
 * A protocol endpoint answering JSON request lines.
 */
typedef struct IsoProtocol IsoProtocol;

/**
 * One playable episode on a copy of a level.
 */
typedef struct IsoSession IsoSession;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread; empty after a success.
 * The pointer stays valid until the next call on the same thread.
 */
const char *iso_last_error(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void iso_string_free(char *s);

/**
 * Parses level JSON into a new handle written to `out`.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum IsoStatus iso_level_parse(const char *json, struct IsoLevel **out);

/**
 * # Safety
 * `level` must come from [`iso_level_parse`] and not have been freed. Null is ignored.
 */
void iso_level_free(struct IsoLevel *level);

/**
 * Rows of the height matrix; 0 for a null handle.
 *
 * # Safety
 * `level` must be null or a live handle.
 */
uint32_t iso_level_rows(const struct IsoLevel *level);

/**
 * Columns of the height matrix; 0 for a null handle.
 *
 * # Safety
 * `level` must be null or a live handle.
 */
uint32_t iso_level_cols(const struct IsoLevel *level);

/**
 * Stack height at a cell; 0 off the grid or for a null handle.
 *
 * # Safety
 * `level` must be null or a live handle.
 */
uint32_t iso_level_height(const struct IsoLevel *level, uint32_t row, uint32_t col);

/**
 * Number of tile placements, the sum of all heights.
 *
 * # Safety
 * `level` must be null or a live handle.
 */
uint64_t iso_level_tile_count(const struct IsoLevel *level);

/**
 * Draw-order dump of the level's tiles, one `order kind row col stack` line each.
 *
 * # Safety
 * `level` must be a live handle; `out` must be writable.
 */
enum IsoStatus iso_level_draw_order(const struct IsoLevel *level, char **out);

/**
 * Screen position of a grid cell at a stack level, y up.
 *
 * # Safety
 * `out_x` and `out_y` must be writable.
 */
enum IsoStatus iso_grid_to_screen(uint32_t row,
                                  uint32_t col,
                                  uint32_t stack,
                                  double diamond_width,
                                  double sprite_height,
                                  double space_height,
                                  double *out_x,
                                  double *out_y);

/**
 * Angle in degrees between a row step on screen and the horizontal.
 *
 * # Safety
 * `out` must be writable.
 */
enum IsoStatus iso_projection_angle(double diamond_width,
                                    double sprite_height,
                                    double space_height,
                                    double *out);

/**
 * Runs a program on a level and writes the trace as JSON.
 *
 * # Safety
 * `level` must be a live handle, `program` a NUL-terminated string and
 * `out` writable.
 */
enum IsoStatus iso_run(const struct IsoLevel *level, const char *program, char **out);

/**
 * Starts a session on a copy of `level`; null if `level` is null.
 *
 * # Safety
 * `level` must be null or a live handle.
 */
struct IsoSession *iso_session_new(const struct IsoLevel *level);

/**
 * # Safety
 * `session` must come from [`iso_session_new`] and not have been freed. Null is ignored.
 */
void iso_session_free(struct IsoSession *session);

/**
 * Parses and installs a program, resetting the episode.
 *
 * # Safety
 * `session` must be a live handle and `program` a NUL-terminated string.
 */
enum IsoStatus iso_session_set_program(struct IsoSession *session, const char *program);

/**
 * Executes one primitive and writes the step report as JSON.
 *
 * # Safety
 * `session` must be a live handle and `out` writable.
 */
enum IsoStatus iso_session_step(struct IsoSession *session, char **out);

/**
 * Back to editing with the same program.
 *
 * # Safety
 * `session` must be a live handle.
 */
enum IsoStatus iso_session_reset(struct IsoSession *session);

/**
 * Writes the session snapshot as JSON.
 *
 * # Safety
 * `session` must be a live handle and `out` writable.
 */
enum IsoStatus iso_session_snapshot(const struct IsoSession *session, char **out);

struct IsoProtocol *iso_protocol_new(void);

/**
 * # Safety
 * `protocol` must come from [`iso_protocol_new`] and not have been freed. Null is ignored.
 */
void iso_protocol_free(struct IsoProtocol *protocol);

/**
 * Answers one request line. Protocol-level failures are reported inside
 * the JSON response; the status only covers bad arguments.
 *
 * # Safety
 * `protocol` must be a live handle, `request` a NUL-terminated string and
 * `out` writable.
 */
enum IsoStatus iso_protocol_request(struct IsoProtocol *protocol, const char *request, char **out);

/**
 * Scores questionnaire CSV text and writes the JSON report.
 *
 * # Safety
 * `csv` must be a NUL-terminated string and `out` writable.
 */
enum IsoStatus iso_score_uat(const char *csv, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ISOBOT_H */
