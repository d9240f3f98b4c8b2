/* SPDX-License-Identifier: Apache-2.0 */
/*
 * swarmft — deterministic simulator of agent-based proactive fault tolerance
 * for parallel reduction workloads.
 *
 * C API over the simulation core. All objects are opaque handles created and
 * destroyed through this interface; every fallible call returns a status code
 * and leaves a human-readable message in sft_last_error() on failure.
 * Out-parameters are only written on SFT_OK.
 */
#ifndef SWARMFT_H
#define SWARMFT_H

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sft_status {
  SFT_OK = 0,
  SFT_ERROR_ARGUMENT = 1,   /* null handle or invalid argument */
  SFT_ERROR_CONFIG = 2,     /* configuration rejected by validation */
  SFT_ERROR_PARSE = 3,      /* malformed JSON or CSV input */
  SFT_ERROR_IO = 4,         /* file could not be read or written */
  SFT_ERROR_INCOMPLETE = 5, /* not enough data to aggregate */
  SFT_ERROR_INTERNAL = 6
} sft_status;

/* Message of the most recent failure on this thread. Never NULL. */
const char* sft_last_error(void);

/* Frees strings returned through char** out-parameters. */
void sft_string_free(char* s);

/* --- experiment configuration ------------------------------------------- */

typedef struct sft_config sft_config;

sft_status sft_config_create_default(sft_config** out);
/* Accepts the documented config JSON object; unknown keys are ignored. */
sft_status sft_config_from_json(const char* json_text, sft_config** out);
sft_status sft_config_to_json(const sft_config* cfg, char** out_json);
/* Resolves auto grid sizing and schedule files, then validates. */
sft_status sft_config_validate(const sft_config* cfg);
void sft_config_destroy(sft_config* cfg);

/* --- campaigns ------------------------------------------------------------ */

typedef struct sft_campaign sft_campaign;

/* Runs the configured campaign. When out_dir is non-NULL, campaign.csv and
 * per-trial traces are written under it during the run. */
sft_status sft_campaign_run(const sft_config* cfg, const char* out_dir, sft_campaign** out);
int sft_campaign_trial_count(const sft_campaign* c);
int sft_campaign_failed_count(const sft_campaign* c);
int sft_campaign_migration_count(const sft_campaign* c);
/* The campaign summary CSV as a string (same bytes as campaign.csv). */
sft_status sft_campaign_csv(const sft_campaign* c, char** out_csv);
void sft_campaign_destroy(sft_campaign* c);

/* --- reinstatement-time samples and aggregation --------------------------- */

typedef struct sft_samples sft_samples;

sft_status sft_samples_read_csv(const char* path, sft_samples** out);
sft_status sft_samples_parse_csv(const char* text, sft_samples** out);
sft_status sft_samples_from_campaign(const sft_campaign* c, sft_samples** out);
int sft_samples_node_count(const sft_samples* s);
int sft_samples_excluded_count(const sft_samples* s);
void sft_samples_destroy(sft_samples* s);

typedef struct sft_metrics sft_metrics;

sft_status sft_metrics_compute(const sft_samples* s, sft_metrics** out);
sft_status sft_metrics_node_mean(const sft_metrics* m, int node_id, double* out);
sft_status sft_metrics_level_mean(const sft_metrics* m, int level, double* out);
sft_status sft_metrics_overall(const sft_metrics* m, double* by_node, double* by_level);
sft_status sft_metrics_table_text(const sft_metrics* m, char** out_text);
/* Writes table.txt, table.csv and per-level sample CSVs into out_dir. */
sft_status sft_metrics_write_report(const sft_metrics* m, const sft_samples* s,
                                    const char* out_dir);
void sft_metrics_destroy(sft_metrics* m);

/* --- dependency sweep ------------------------------------------------------ */

typedef struct sft_sweep sft_sweep;

sft_status sft_sweep_run(const sft_config* cfg, int fan_in_min, int fan_in_max, sft_sweep** out);
int sft_sweep_row_count(const sft_sweep* s);
sft_status sft_sweep_row(const sft_sweep* s, int index, int* total_dependencies,
                         double* mean_reinstatement_ms, int* samples);
sft_status sft_sweep_csv(const sft_sweep* s, char** out_csv);
void sft_sweep_destroy(sft_sweep* s);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* SWARMFT_H */
