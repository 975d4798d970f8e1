#ifndef COOPRPL_H
#define COOPRPL_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define COOPRPL_API __declspec(dllexport)
#else
#define COOPRPL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cooprpl_status {
  COOPRPL_OK = 0,
  COOPRPL_ERR_CONFIG = 1,
  COOPRPL_ERR_IO = 2,
  COOPRPL_ERR_INVALID_ARGUMENT = 3,
  COOPRPL_ERR_SIMULATION = 4,
  COOPRPL_ERR_PARTIAL = 5
} cooprpl_status;

/* Scenario parameters plus sweep settings. */
typedef struct cooprpl_config cooprpl_config;

typedef struct cooprpl_metrics {
  double pdr;
  double mean_retransmissions;
  double mean_delay_slots; /* NaN when nothing was delivered */
  double mean_delay_ms;
  uint64_t sent;
  uint64_t delivered;
  uint64_t dropped;
  int disconnected;
} cooprpl_metrics;

typedef struct cooprpl_sweep_summary {
  size_t runs;
  size_t failed;
} cooprpl_sweep_summary;

/* Message for the last failed call on this thread; empty after success. */
COOPRPL_API const char* cooprpl_last_error(void);
COOPRPL_API const char* cooprpl_version(void);

COOPRPL_API cooprpl_status cooprpl_config_new(cooprpl_config** out);
COOPRPL_API cooprpl_status cooprpl_config_load(const char* path, cooprpl_config** out);
COOPRPL_API cooprpl_status cooprpl_config_parse(const char* text, cooprpl_config** out);
COOPRPL_API cooprpl_status cooprpl_config_clone(const cooprpl_config* config, cooprpl_config** out);
COOPRPL_API void cooprpl_config_free(cooprpl_config* config);

/* key is "section.name" or a bare name. */
COOPRPL_API cooprpl_status cooprpl_config_set(cooprpl_config* config, const char* key, const char* value);
COOPRPL_API cooprpl_status cooprpl_config_validate(const cooprpl_config* config);

/* Resolved config in file syntax. Release with cooprpl_string_free. */
COOPRPL_API cooprpl_status cooprpl_config_echo(const cooprpl_config* config, char** out);
/* One "section.name<TAB>help" line per accepted key. */
COOPRPL_API cooprpl_status cooprpl_config_schema(char** out);
COOPRPL_API void cooprpl_string_free(char* text);

/* Single run of the scenario section. trace_path may be NULL. */
COOPRPL_API cooprpl_status cooprpl_run_scenario(const cooprpl_config* config, const char* trace_path,
                                                cooprpl_metrics* out);

/* Sweep over the sweep section; writes the CSV to csv_path ("-" for stdout).
   Returns COOPRPL_ERR_PARTIAL when some points failed. */
COOPRPL_API cooprpl_status cooprpl_run_sweep(const cooprpl_config* config, int workers, const char* csv_path,
                                             const char* trace_path, cooprpl_sweep_summary* out);

/* Comparison table built from the mean rows of a sweep CSV. */
COOPRPL_API cooprpl_status cooprpl_compare_csv(const char* csv_path, char** out);

/* node_id,x,y for the scenario section's placement. */
COOPRPL_API cooprpl_status cooprpl_export_placements(const cooprpl_config* config, char** out);

#ifdef __cplusplus
}
#endif

#endif
