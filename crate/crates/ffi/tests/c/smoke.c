#include <stdio.h>
#include <string.h>
#include "ramseylab.h"

#define CHECK(x) do { if (!(x)) { fprintf(stderr, "failed: %s\n", #x); return 1; } } while (0)

int main(void) {
    RlGame *g = NULL;
    RlOutcome o = RL_OUTCOME_ONGOING;
    CHECK(rl_game_new("path:3", "path:3", &g) == RL_STATUS_OK);
    CHECK(rl_game_play(g, 0, 1, RL_BLUE, &o) == RL_STATUS_OK && o == RL_OUTCOME_ONGOING);
    CHECK(rl_game_play(g, 1, 2, RL_BLUE, &o) == RL_STATUS_OK && o == RL_OUTCOME_BLUE_WIN);
    CHECK(rl_game_play(g, 2, 3, RL_RED, &o) == RL_STATUS_GAME_OVER);
    CHECK(strstr(rl_last_error(), "over") != NULL);

    char *t = NULL;
    CHECK(rl_game_transcript(g, &t) == RL_STATUS_OK);
    CHECK(strstr(t, "\"round\":2") != NULL);
    rl_string_free(t);
    rl_game_free(g);

    int64_t value = 0;
    CHECK(rl_solve("path:2", "path:4", 8, &value) == RL_STATUS_OK && value == 3);
    CHECK(rl_solve("path:2", "cycle:2", 8, &value) == RL_STATUS_INVALID_ARGUMENT);

    bool pass = false;
    CHECK(rl_verify("join-paths", "{\"k\":3,\"m\":4,\"n\":4}", 0, &pass, NULL) == RL_STATUS_OK && pass);
    printf("ok\n");
    return 0;
}
