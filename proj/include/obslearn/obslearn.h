/* Observational-learning toolkit: C API.
 *
 * Opaque handles + integer status codes. Every function returns
 * OBSLEARN_OK on success; on failure the return names the error class and
 * obslearn_last_error() describes it (thread-local storage).
 *
 * Players are integers: 0 = a, 1 = b. Interval endpoints may be +-INFINITY.
 */
#ifndef OBSLEARN_H
#define OBSLEARN_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum obslearn_status {
  OBSLEARN_OK = 0,
  OBSLEARN_ERR_INVALID_ARGUMENT = 1,
  OBSLEARN_ERR_DEGENERATE_SUPPORT = 2,
  OBSLEARN_ERR_NO_SIGN_CHANGE = 3,
  OBSLEARN_ERR_OFF_PATH = 4,
  OBSLEARN_ERR_INCOMPLETE_STRATEGY = 5,
  OBSLEARN_ERR_NOT_ASYMMETRIC = 6,
  OBSLEARN_ERR_NON_TERMINATION = 7,
  OBSLEARN_ERR_PRECONDITION = 8,
  OBSLEARN_ERR_CONFIG = 9,
  OBSLEARN_ERR_IO = 10,
  OBSLEARN_ERR_UNSUPPORTED = 11,
  OBSLEARN_ERR_INTERNAL = 12
} obslearn_status;

typedef struct obslearn_model obslearn_model;
typedef struct obslearn_config obslearn_config;
typedef struct obslearn_trace obslearn_trace;

typedef struct obslearn_trace_row {
  int date;
  int z_a;
  int z_b;
  double s_a_lo, s_a_hi;
  double s_b_lo, s_b_hi;
  double m_a, m_b;
  int agreed;
} obslearn_trace_row;

const char* obslearn_version(void);
/* Message for the most recent failure on this thread; empty string if none. */
const char* obslearn_last_error(void);

/* ---- model / signal services ---- */

obslearn_status obslearn_model_create(double sigma0, double sigma_a, double sigma_b,
                                      obslearn_model** out);
obslearn_status obslearn_model_create_with(double sigma0, double sigma_a, double sigma_b,
                                           double quad_abs_tol, double quad_rel_tol,
                                           int quad_max_subdivisions, double tail_mass_cutoff,
                                           double root_tol, obslearn_model** out);
void obslearn_model_destroy(obslearn_model* m);

obslearn_status obslearn_posterior_mean(const obslearn_model* m, double s_a, double s_b,
                                        double* out);
obslearn_status obslearn_marginal_expectation(const obslearn_model* m, int player, double s_own,
                                              double* out);
obslearn_status obslearn_truncated_expectation(const obslearn_model* m, int player, double s_own,
                                               double lo, double hi, double* out);
obslearn_status obslearn_conditional_type_density(const obslearn_model* m, int player,
                                                  double s_own, double t, double lo, double hi,
                                                  double* out);
obslearn_status obslearn_type_probability(const obslearn_model* m, int player, double s_own,
                                          double lo, double hi, double* out);
obslearn_status obslearn_myopic_threshold(const obslearn_model* m, int player, double lo,
                                          double hi, double* out);
/* *action is +1/-1 when one action is dominant, 0 otherwise. */
obslearn_status obslearn_dominant_action(const obslearn_model* m, int player, double s_own,
                                         double lo, double hi, int* action);

/* ---- myopic belief dynamics ---- */

obslearn_status obslearn_evolve_myopic(const obslearn_model* m, double s_a, double s_b,
                                       int horizon, obslearn_trace** out);
int obslearn_trace_length(const obslearn_trace* t);
/* Date of first agreement, or -1 if none within the horizon. */
int obslearn_trace_first_agreement(const obslearn_trace* t);
obslearn_status obslearn_trace_row_at(const obslearn_trace* t, int index, obslearn_trace_row* out);
obslearn_status obslearn_trace_write_csv(const obslearn_trace* t, const obslearn_model* m,
                                         const char* path);
obslearn_status obslearn_trace_write_json(const obslearn_trace* t, const obslearn_model* m,
                                          double s_a, double s_b, const char* path);
void obslearn_trace_destroy(obslearn_trace* t);

/* ---- configuration ---- */

obslearn_status obslearn_config_default(obslearn_config** out);
obslearn_status obslearn_config_load(const char* path, obslearn_config** out);
obslearn_status obslearn_config_set_output_dir(obslearn_config* c, const char* dir);
obslearn_status obslearn_config_set_seed(obslearn_config* c, unsigned long long seed);
obslearn_status obslearn_config_set_workers(obslearn_config* c, int workers);
obslearn_status obslearn_config_set_verbose(obslearn_config* c, int verbose);
/* Writes the 16-hex-character config hash (plus NUL) into buf. */
obslearn_status obslearn_config_hash(const obslearn_config* c, char* buf, size_t buflen);
void obslearn_config_destroy(obslearn_config* c);

/* ---- experiment runners ----
 * On success *outcome is 0 (expected result reproduced), 1 (refuted) or
 * 2 (inconclusive); files land in the config's output directory.
 */

obslearn_status obslearn_run_simulate(const obslearn_config* c, double s_a, double s_b,
                                      int* outcome);
obslearn_status obslearn_run_check(const obslearn_config* c, int* outcome);
obslearn_status obslearn_run_aggregate(const obslearn_config* c, int* outcome);
obslearn_status obslearn_run_construct(const obslearn_config* c, int* outcome);
obslearn_status obslearn_run_oracle(const obslearn_config* c, int* outcome);

#ifdef __cplusplus
}
#endif

#endif /* OBSLEARN_H */
