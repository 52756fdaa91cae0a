#ifndef RAMSEYLAB_H
#define RAMSEYLAB_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define RL_RED 0

#define RL_BLUE 1

typedef enum RlOutcome {
  RL_OUTCOME_ONGOING = 0,
  RL_OUTCOME_RED_WIN = 1,
  RL_OUTCOME_BLUE_WIN = 2,
} RlOutcome;

typedef enum RlStatus {
  RL_STATUS_OK = 0,
  RL_STATUS_NULL_POINTER = 1,
  RL_STATUS_INVALID_UTF8 = 2,
  RL_STATUS_INVALID_ARGUMENT = 3,
  RL_STATUS_ILLEGAL_MOVE = 4,
  RL_STATUS_GAME_OVER = 5,
  RL_STATUS_LIMIT_EXCEEDED = 6,
  RL_STATUS_STRATEGY_ERROR = 7,
  RL_STATUS_PANIC = 8,
} RlStatus;

/**
 * Opaque game handle.
 */
typedef struct RlGame RlGame;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. The pointer is
 * valid until the next call into this library from the same thread.
 */
const char *rl_last_error(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void rl_string_free(char *s);

/**
 * Starts a game. Targets use the `kind:size` form, e.g. `"path:3"`,
 * `"star:4"`, `"cycle:5"`.
 *
 * # Safety
 * `red` and `blue` must be nul-terminated strings; `out` must be writable.
 */
enum RlStatus rl_game_new(const char *red, const char *blue, struct RlGame **out);

/**
 * # Safety
 * `game` must be null or a handle from [`rl_game_new`], not yet freed.
 */
void rl_game_free(struct RlGame *game);

/**
 * Places a blue path on `n` fresh vertices before the first round.
 *
 * # Safety
 * `game` must be a live handle.
 */
enum RlStatus rl_game_seed_blue_path(struct RlGame *game, size_t n);

/**
 * Plays edge `{u, v}` with Painter's choice `color` (`RL_RED` or
 * `RL_BLUE`). A repeated edge keeps its old color. `outcome_out` may be null.
 *
 * # Safety
 * `game` must be a live handle; `outcome_out` null or writable.
 */
enum RlStatus rl_game_play(struct RlGame *game,
                           uint32_t u,
                           uint32_t v,
                           uint32_t color,
                           enum RlOutcome *outcome_out);

/**
 * Rounds played so far.
 *
 * # Safety
 * `game` must be a live handle; `out` writable.
 */
enum RlStatus rl_game_round(const struct RlGame *game, size_t *out);

/**
 * # Safety
 * `game` must be a live handle; `out` writable.
 */
enum RlStatus rl_game_outcome(const struct RlGame *game, enum RlOutcome *out);

/**
 * Transcript as JSON lines: a header, then one object per round.
 *
 * # Safety
 * `game` must be a live handle; `out` writable. Free the result with
 * [`rl_string_free`].
 */
enum RlStatus rl_game_transcript(const struct RlGame *game, char **out);

/**
 * Exact online Ramsey number for the target pair, searched up to
 * `max_rounds`. Writes -1 when Builder needs more rounds than that.
 *
 * # Safety
 * `red` and `blue` must be nul-terminated strings; `out_value` writable.
 */
enum RlStatus rl_solve(const char *red, const char *blue, uint32_t max_rounds, int64_t *out_value);

/**
 * Runs a registered Builder strategy against every Painter. `params_json`
 * holds the strategy parameters, e.g. `{"k":3,"n":4}`. `budget` 0 means the
 * strategy's declared budget. `out_report` may be null; otherwise it
 * receives the report as JSON.
 *
 * # Safety
 * String arguments must be nul-terminated; `out_pass` writable; `out_report`
 * null or writable.
 */
enum RlStatus rl_verify(const char *strategy,
                        const char *params_json,
                        size_t budget,
                        bool *out_pass,
                        char **out_report);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* RAMSEYLAB_H */
