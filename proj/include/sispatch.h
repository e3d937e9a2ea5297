#ifndef SISPATCH_H
#define SISPATCH_H

/* C interface to the patch-model analysis library.
 *
 * All analyses operate on an opaque scenario handle built from config JSON.
 * Output strings are heap-allocated JSON or CSV documents; release them with
 * sisp_string_free. On failure, functions return a status code and leave a
 * human-readable reason retrievable through sisp_last_error (thread-local).
 */

#ifdef __cplusplus
extern "C" {
#endif

typedef struct sisp_scenario sisp_scenario;

typedef enum sisp_status {
    SISP_OK = 0,
    SISP_VALIDATION_ERROR = 2, /* bad config or parameter domain violation */
    SISP_NUMERIC_ERROR = 3,    /* solver or iteration failure */
} sisp_status;

/* Builds a scenario from config JSON. On success *out owns the handle. */
sisp_status sisp_scenario_create(const char* config_json, sisp_scenario** out);
void sisp_scenario_destroy(sisp_scenario* s);

/* Last error message of the calling thread; empty string if none. */
const char* sisp_last_error(void);

void sisp_string_free(char* s);

/* Reproduction-number analysis (r0, spectral bound, dispersal limits) as JSON. */
sisp_status sisp_reproduction_json(const sisp_scenario* s, char** out);

/* Disease-free equilibrium, its global-stability classification, and the
 * endemic-nonexistence check as JSON. */
sisp_status sisp_dfe_json(const sisp_scenario* s, char** out);

/* All endemic equilibria with stability tags.
 * scan_points <= 0 and l_cap <= 0 select the defaults. */
sisp_status sisp_equilibria_json(const sisp_scenario* s, int scan_points, double l_cap,
                                 char** out);
sisp_status sisp_equilibria_csv(const sisp_scenario* s, int scan_points, double l_cap,
                                char** out);

/* Trajectory CSV (columns t, S_1..S_n, I_1..I_n). Requires S0/I0 in the
 * config. samples <= 0 selects the default cadence. */
sisp_status sisp_simulate_csv(const sisp_scenario* s, double horizon, int samples, char** out);

/* Equilibrium count across a dS grid (CSV: dS, count, l_roots, stability)
 * plus threshold estimates appended as comment lines. */
sisp_status sisp_sweep_ds_csv(const sisp_scenario* s, double from, double to, int points,
                              char** out);

/* Endemic-equilibrium limit profile as dS -> 0 (JSON). */
sisp_status sisp_asymptotics_ds0_json(const sisp_scenario* s, char** out);

/* Endemic-equilibrium limit profile as dI -> 0 (JSON). */
sisp_status sisp_asymptotics_di0_json(const sisp_scenario* s, char** out);

/* Joint-limit profile at dI/dS -> sigma (JSON). */
sisp_status sisp_sigma_profile_json(const sisp_scenario* s, double sigma, char** out);

/* Critical total-population estimate with its analytic bracket (JSON). */
sisp_status sisp_critical_n_json(const sisp_scenario* s, char** out);

#ifdef __cplusplus
}
#endif

#endif
