/* C API for the minerr interval-observer toolkit.
 *
 * All functions return minerr_status; output objects are opaque handles
 * released with the matching _free call. Strings returned through out
 * parameters are owned by the caller and released with
 * minerr_string_free. On any non-OK status, minerr_last_error() holds a
 * thread-local message.
 */
#ifndef MINERR_H
#define MINERR_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef struct minerr_scenario minerr_scenario;
typedef struct minerr_trajectory minerr_trajectory;

typedef enum minerr_status {
    MINERR_OK = 0,
    MINERR_HYPOTHESIS_FAILED = 1, /* theorem hypotheses or guaranteed properties violated */
    MINERR_INPUT_ERROR = 2,       /* unreadable file, bad JSON, schema violation */
    MINERR_RUNTIME_ERROR = 3      /* evaluation or envelope failure during simulation */
} minerr_status;

const char* minerr_last_error(void);
void minerr_string_free(char* s);

minerr_status minerr_scenario_load_file(const char* path, minerr_scenario** out);
minerr_status minerr_scenario_load_json(const char* json_text, minerr_scenario** out);
void minerr_scenario_free(minerr_scenario* scenario);

/* Pass a value <= 0 to keep the scenario file's setting. */
minerr_status minerr_scenario_override_sim(minerr_scenario* scenario, double dt, double t_end);

size_t minerr_scenario_phi(const minerr_scenario* scenario);

/* Checks the Metzler and Hurwitz-certificate hypotheses plus the initial
 * sandwich. *report_json is set on both OK and HYPOTHESIS_FAILED. */
minerr_status minerr_verify(const minerr_scenario* scenario, char** report_json);

/* force skips the verify gate. Divergence is reported as OK with the
 * diverged flag set on the trajectory; callers decide how to exit. */
minerr_status minerr_simulate(const minerr_scenario* scenario, int force,
                              minerr_trajectory** out);
void minerr_trajectory_free(minerr_trajectory* trajectory);

int minerr_trajectory_diverged(const minerr_trajectory* trajectory, double* t_escape);
minerr_status minerr_trajectory_csv(const minerr_trajectory* trajectory, char** csv);
minerr_status minerr_metrics_json(const minerr_scenario* scenario,
                                  const minerr_trajectory* trajectory, char** json_text);

/* Runs the direct error-dynamics integration and reports the sup-norm
 * deviation from the joint simulation's errors. */
minerr_status minerr_error_oracle(const minerr_scenario* scenario, char** csv,
                                  double* sup_deviation);

/* Multi-gain observer against its single-gain variants; HYPOTHESIS_FAILED
 * when the dominance margin drops below -1e-6. Both outputs are set
 * whenever the simulations themselves succeed. */
minerr_status minerr_compare(const minerr_scenario* scenario, char** comparison_csv,
                             char** report_json);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* MINERR_H */
