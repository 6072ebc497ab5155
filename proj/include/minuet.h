/* C interface to the minuet simulation library.
 *
 * Conventions:
 *   - Every fallible call returns a minuet_status and, on failure, writes a
 *     NUL-terminated message into errbuf (when errbuf_len > 0).
 *   - Objects are opaque handles created by the library and released with the
 *     matching *_free function. Strings returned through char** outputs are
 *     heap-allocated and released with minuet_string_free.
 *   - Handles are not internally synchronized: share a handle across threads
 *     only with external locking. Distinct handles are fully independent, and
 *     the library keeps no mutable global state.
 */
#ifndef MINUET_H
#define MINUET_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum minuet_status {
  MINUET_OK = 0,
  MINUET_ERR_INVALID_ARGUMENT = 1, /* bad handle/pointer/enum value */
  MINUET_ERR_PARSE = 2,            /* malformed JSON or trace text */
  MINUET_ERR_VALIDATION = 3,       /* well-formed but inconsistent scenario */
  MINUET_ERR_UNKNOWN_NAME = 4,     /* no such built-in scenario or strategy */
  MINUET_ERR_IO = 5,               /* file system failure */
  MINUET_ERR_INTERNAL = 6          /* unexpected library failure */
} minuet_status;

typedef struct minuet_scenario minuet_scenario;
typedef struct minuet_run minuet_run;

/* Metric knobs; zero-initialize for defaults. */
typedef struct minuet_options {
  /* grouped-vehicle ratio: integrate the triangular sum n(n+1)/2 of the
   * vehicle count in the denominator instead of the count itself */
  int literal_group_denominator;
  /* average delay over first receipts only instead of all receipts */
  int per_unique_delay;
} minuet_options;

const char* minuet_version(void);
const char* minuet_status_name(minuet_status status);

/* Newline-separated list of built-in scenario names (static storage). */
const char* minuet_builtin_scenarios(void);

/* --- scenarios ----------------------------------------------------------- */

minuet_status minuet_scenario_from_file(const char* path, minuet_scenario** out,
                                        char* errbuf, size_t errbuf_len);
minuet_status minuet_scenario_from_json(const char* json_text, minuet_scenario** out,
                                        char* errbuf, size_t errbuf_len);
minuet_status minuet_scenario_builtin(const char* name, minuet_scenario** out,
                                      char* errbuf, size_t errbuf_len);

/* Overrides rewrite the document and re-validate it (regenerating any
 * derived traffic), so the handle always holds a valid scenario. */
minuet_status minuet_scenario_set_seed(minuet_scenario* sc, uint64_t seed,
                                       char* errbuf, size_t errbuf_len);
minuet_status minuet_scenario_set_strategy(minuet_scenario* sc, const char* strategy,
                                           char* errbuf, size_t errbuf_len);

/* Valid until the handle is freed. */
const char* minuet_scenario_name(const minuet_scenario* sc);
/* 16 hex digits over the canonical document; valid until the handle is freed. */
const char* minuet_scenario_hash(const minuet_scenario* sc);
/* Canonical JSON document (all defaults explicit); free the result. */
minuet_status minuet_scenario_canonical_json(const minuet_scenario* sc, char** out,
                                             char* errbuf, size_t errbuf_len);

void minuet_scenario_free(minuet_scenario* sc);

/* --- runs ---------------------------------------------------------------- */

/* Simulates the scenario to completion and computes all metrics.
 * opts may be NULL for defaults. */
minuet_status minuet_simulate(const minuet_scenario* sc, const minuet_options* opts,
                              minuet_run** out, char* errbuf, size_t errbuf_len);

/* Per-event metric summaries as a JSON object; free the result. */
minuet_status minuet_run_summary_json(const minuet_run* run, char** out,
                                      char* errbuf, size_t errbuf_len);

/* Full event log in its text form (can be large); free the result. */
minuet_status minuet_run_log_text(const minuet_run* run, char** out,
                                  char* errbuf, size_t errbuf_len);

/* Writes the event log, per-event series CSVs, summary CSV/text and a JSON
 * manifest into out_dir (created if needed). File names are prefixed
 * "<scenario>_<strategy>_". */
minuet_status minuet_run_write_artifacts(const minuet_run* run, const char* out_dir,
                                         char* errbuf, size_t errbuf_len);

void minuet_run_free(minuet_run* run);

/* --- sweeps ---------------------------------------------------------------
 * Runs every strategy x seed combination of the scenario on `threads` worker
 * threads and returns a JSON object whose "cells" array is ordered
 * strategies-major then seeds, independent of thread count. Each cell carries
 * the per-event summaries plus a digest of the serialized log.
 * strategies_csv/seeds_csv are comma-separated, e.g. "dca_like,pctt_like"
 * and "1,2,3". */
minuet_status minuet_sweep_json(const minuet_scenario* sc, const char* strategies_csv,
                                const char* seeds_csv, int threads,
                                const minuet_options* opts, char** out,
                                char* errbuf, size_t errbuf_len);

void minuet_string_free(char* s);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* MINUET_H */
