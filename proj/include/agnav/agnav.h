#pragma once

/// C interface to the air-ground navigation stack. Every entry point is
/// exported from the shared library; handles are opaque and freed by the
/// matching *_free call. Functions that return a pointer yield NULL on
/// failure; functions that return int yield a status code. Either way the
/// failure detail is in agnav_last_error(), which is thread local.

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum agnav_status {
  AGNAV_OK = 0,
  AGNAV_ERR_ARGUMENT = 1,  /* null or out-of-range argument */
  AGNAV_ERR_PARSE = 2,     /* malformed config or trace text */
  AGNAV_ERR_IO = 3,        /* file or directory access failed */
  AGNAV_ERR_RUNTIME = 4,   /* internal failure while running */
} agnav_status;

/* Message for the most recent failure on this thread; "" when none. The
 * pointer stays valid until the next API call on the same thread. */
const char* agnav_last_error(void);

/* Frees a string returned by an agnav_* call that documents it. */
void agnav_string_free(char* s);

/* ---- worlds ------------------------------------------------------------ */

typedef struct agnav_world agnav_world;

/* Presets: "city", "flat", "ramp_fixture", "handoff". clusters and
 * roadblocks only shape the city preset. */
agnav_world* agnav_world_generate(const char* preset, uint64_t seed, int clusters,
                                  int roadblocks);
agnav_world* agnav_world_load(const char* dir);
int agnav_world_save(const agnav_world* w, const char* dir);
void agnav_world_free(agnav_world* w);

int agnav_world_width(const agnav_world* w);
int agnav_world_height(const agnav_world* w);
double agnav_world_resolution(const agnav_world* w);
int agnav_world_goal_count(const agnav_world* w);
int agnav_world_start_count(const agnav_world* w);

/* Writes viewable dumps of the ground truth into dir: class.ppm (palette
 * colors), color.ppm, elevation.pgm and surface.pgm (height normalized to
 * 0..255), known.pgm. Images are flipped so north is up. */
int agnav_world_export_images(const agnav_world* w, const char* dir);

/* ---- mission configs --------------------------------------------------- */

typedef struct agnav_config agnav_config;

agnav_config* agnav_config_parse(const char* text);
agnav_config* agnav_config_load(const char* path);
void agnav_config_free(agnav_config* c);

/* Applies one "key = value" assignment with full validation. */
int agnav_config_set(agnav_config* c, const char* key, const char* value);

/* Canonical text form; free with agnav_string_free. */
char* agnav_config_text(const agnav_config* c);

/* ---- missions and metrics ---------------------------------------------- */

typedef struct agnav_result agnav_result;

typedef struct agnav_robot_stats {
  int id;
  double distance;         /* meters driven */
  double nav_time;         /* seconds holding an active claim */
  double nav_time_visited; /* claim time that ended in a visit */
  double nav_time_failed;  /* claim time ended by yield, unreach, or cutoff */
} agnav_robot_stats;

/* Runs the configured mission to completion. Deterministic per config. */
agnav_result* agnav_mission_run(const agnav_config* c);

/* Recomputes metrics from trace text captured earlier. */
agnav_result* agnav_metrics_parse(const char* trace);

void agnav_result_free(agnav_result* r);

/* Line-delimited event trace; valid until the result is freed. */
const char* agnav_result_trace(const agnav_result* r);

double agnav_result_duration(const agnav_result* r);
int agnav_result_goals_identified(const agnav_result* r);
int agnav_result_goals_visited(const agnav_result* r);
/* Median time to first visit over all goals; unvisited goals count the
 * mission duration. NaN when no goals were identified. */
double agnav_result_visit_time_median(const agnav_result* r);
double agnav_result_claim_to_visit_median(const agnav_result* r);
long agnav_result_records_moved(const agnav_result* r);
int agnav_result_contacts(const agnav_result* r);
int agnav_result_robot_count(const agnav_result* r);
int agnav_result_robot(const agnav_result* r, int index, agnav_robot_stats* out);

/* CSV row matching agnav_metrics_csv_header(); free with agnav_string_free. */
char* agnav_result_csv_row(const agnav_result* r, const char* label, uint64_t seed);
char* agnav_metrics_csv_header(void);

/* ---- batteries --------------------------------------------------------- */

typedef struct agnav_battery agnav_battery;

/* Runs reps missions per sweep value on top of the base config; each rep
 * offsets seed and world_seed together. Pass sweep_key = "" with no values
 * to run the base config alone. */
agnav_battery* agnav_battery_run(const agnav_config* base, const char* sweep_key,
                                 const char* const* values, int value_count, int reps);
void agnav_battery_free(agnav_battery* b);

int agnav_battery_failures(const agnav_battery* b);
/* CSV bodies; valid until the battery is freed. */
const char* agnav_battery_runs_csv(const agnav_battery* b);
const char* agnav_battery_aggregates_csv(const agnav_battery* b);
const char* agnav_battery_failures_csv(const agnav_battery* b);

#ifdef __cplusplus
}
#endif
