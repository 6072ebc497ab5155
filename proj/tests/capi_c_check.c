/* Compiled as plain C to prove the public header is C-compatible. */
#include <stdio.h>
#include <string.h>

#include "minuet.h"

int main(void) {
  if (minuet_version() == NULL) {
    fprintf(stderr, "no version string\n");
    return 1;
  }
  if (strcmp(minuet_status_name(MINUET_OK), "ok") != 0) {
    fprintf(stderr, "bad status name\n");
    return 1;
  }

  char err[256];
  minuet_scenario* sc = NULL;
  if (minuet_scenario_builtin("clique", &sc, err, sizeof err) != MINUET_OK) {
    fprintf(stderr, "builtin failed: %s\n", err);
    return 1;
  }

  minuet_run* run = NULL;
  if (minuet_simulate(sc, NULL, &run, err, sizeof err) != MINUET_OK) {
    fprintf(stderr, "simulate failed: %s\n", err);
    minuet_scenario_free(sc);
    return 1;
  }

  char* summary = NULL;
  if (minuet_run_summary_json(run, &summary, err, sizeof err) != MINUET_OK) {
    fprintf(stderr, "summary failed: %s\n", err);
    minuet_run_free(run);
    minuet_scenario_free(sc);
    return 1;
  }

  printf("c api ok: %s, summary %zu bytes\n", minuet_version(), strlen(summary));
  minuet_string_free(summary);
  minuet_run_free(run);
  minuet_scenario_free(sc);
  return 0;
}
