/* betaflow: C API of the shared library. Opaque handles, integer status
 * codes, no exceptions across the boundary. Every function is safe to call
 * with NULL handles (it reports BF_ERR_INVALID_ARGUMENT or returns a neutral
 * value); strings returned as const char* stay valid until the owning handle
 * is freed. Error messages go into caller-supplied buffers and are always
 * NUL-terminated, truncating when too long. */
#ifndef BETAFLOW_C_H
#define BETAFLOW_C_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum bf_status {
  BF_OK = 0,
  BF_ERR_INVALID_ARGUMENT = 1, /* bad handle, bad key, value out of range */
  BF_ERR_PARSE = 2,            /* config text or file did not parse */
  BF_ERR_UNKNOWN_EXPERIMENT = 3,
  BF_ERR_NUMERIC = 4, /* simulation or statistics failure at runtime */
  BF_ERR_IO = 5,      /* output files could not be written */
  BF_ERR_INTERNAL = 6
} bf_status;

typedef struct bf_config bf_config;
typedef struct bf_report bf_report;

/* Version of the library, static storage. */
const char* bf_version(void);

/* Experiment registry, in its stable order. */
size_t bf_experiment_count(void);
/* Name at `index`, or NULL when out of range. Static storage. */
const char* bf_experiment_name(size_t index);
int bf_is_experiment(const char* name);

/* Fresh config holding the global defaults, with no key marked as set.
 * Returns NULL only on allocation failure. Free with bf_config_free. */
bf_config* bf_config_new(void);

/* Parses config text (`key = value` lines, `#` comments). On failure returns
 * NULL and fills errbuf (when given) with the parse error. */
bf_config* bf_config_parse(const char* text, char* errbuf, size_t errbuf_len);

/* Reads and parses a config file. Same failure contract as bf_config_parse. */
bf_config* bf_config_load(const char* path, char* errbuf, size_t errbuf_len);

void bf_config_free(bf_config* cfg);

/* Assigns one key from its text form, marking it as explicitly set (explicit
 * keys override experiment defaults). Unknown keys and out-of-range values
 * leave the config unchanged and return BF_ERR_INVALID_ARGUMENT; values that
 * fail to scan as their type return BF_ERR_PARSE. */
bf_status bf_config_set(bf_config* cfg, const char* key, const char* value,
                        char* errbuf, size_t errbuf_len);

/* Renders the full configuration as config text. Returns the length of the
 * rendering (excluding the terminator) and writes as much as fits into buf;
 * buf may be NULL when len is 0. Returns 0 for a NULL config. */
size_t bf_config_render(const bf_config* cfg, char* buf, size_t len);

/* Runs a named experiment. Writes config.resolved, CSV tables, and
 * report.json under the config's output directory, and hands back a report
 * handle through out_report (may be NULL when only the status matters). */
bf_status bf_run_experiment(const char* name, const bf_config* cfg,
                            bf_report** out_report, char* errbuf, size_t errbuf_len);

void bf_report_free(bf_report* report);

/* 1 when every check passed (and there was at least one), else 0. */
int bf_report_all_pass(const bf_report* report);
size_t bf_report_check_count(const bf_report* report);
/* Check accessors; index out of range gives NULL / 0. */
const char* bf_report_check_id(const bf_report* report, size_t index);
int bf_report_check_pass(const bf_report* report, size_t index);
double bf_report_check_statistic(const bf_report* report, size_t index);
double bf_report_check_threshold(const bf_report* report, size_t index);
const char* bf_report_check_detail(const bf_report* report, size_t index);

/* The report serialized as JSON, valid until bf_report_free. */
const char* bf_report_json(const bf_report* report);

#ifdef __cplusplus
}
#endif

#endif /* BETAFLOW_C_H */
