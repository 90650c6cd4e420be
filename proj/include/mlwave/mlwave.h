/* C interface of the mlwave library.
 *
 * Functions return an mlw_status; on failure a thread-local message is available from
 * mlw_last_error() until the next call on the same thread. Scenario handles are opaque and
 * must be released with mlw_scenario_free. Angles are in degrees. */
#ifndef MLWAVE_MLWAVE_H
#define MLWAVE_MLWAVE_H

#include <stddef.h>
#include <stdint.h>

#if defined(MLWAVE_BUILDING_LIB)
#define MLW_API __attribute__((visibility("default")))
#else
#define MLW_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mlw_status {
  MLW_OK = 0,
  MLW_ERR_INVALID_ARGUMENT = 1,
  MLW_ERR_DOMAIN = 2,
  MLW_ERR_CONTRACT = 3,
  MLW_ERR_PARSE = 4,
  MLW_ERR_IO = 5,
  MLW_ERR_INFEASIBLE = 6,
  MLW_ERR_SOLVER = 7,
  MLW_ERR_INTERNAL = 8
} mlw_status;

typedef struct mlw_scenario mlw_scenario;

MLW_API const char* mlw_version(void);
MLW_API const char* mlw_status_name(mlw_status status);
MLW_API const char* mlw_last_error(void);

/* Scenario files. `source_name` is the name quoted in parse errors. */
MLW_API mlw_status mlw_scenario_load(const char* path, mlw_scenario** out);
MLW_API mlw_status mlw_scenario_parse(const char* text, const char* source_name,
                                      mlw_scenario** out);
MLW_API void mlw_scenario_free(mlw_scenario* scenario);

/* Overrides; the scenario is left unchanged when the new value is rejected. */
MLW_API mlw_status mlw_scenario_set_seed(mlw_scenario* scenario, uint64_t seed);
MLW_API mlw_status mlw_scenario_set_trials(mlw_scenario* scenario, uint64_t trials);
MLW_API mlw_status mlw_scenario_set_psi(mlw_scenario* scenario, const double* psi, size_t count);
MLW_API mlw_status mlw_scenario_set_weights(mlw_scenario* scenario, const double* weights,
                                            size_t count);
/* Sets R for both the target and the clutter grids. */
MLW_API mlw_status mlw_scenario_set_grid_resolution(mlw_scenario* scenario, int resolution);

/* Canonical text of the scenario. Writes at most `capacity` bytes including the terminator
 * and always reports the full length (without terminator) through `length`. */
MLW_API mlw_status mlw_scenario_to_text(const mlw_scenario* scenario, char* buffer,
                                        size_t capacity, size_t* length);

/* Runs "single", "robust", "pareto" or "simulate", writing CSV and run_log.json into
 * `output_dir`. Returns the process exit code: 0 success, 2 usage, 3 I/O, 4 infeasible,
 * 5 solver failure, 1 internal error. The diagnostic is in mlw_last_error(). */
MLW_API int mlw_run(const mlw_scenario* scenario, const char* subcommand,
                    const char* output_dir);

/* Wave impedance of one layer: out[0] = Re, out[1] = Im. */
MLW_API mlw_status mlw_layer_impedance(double mu, double epsilon, double sigma,
                                       double angular_frequency, double out[2]);

/* Composite reflection coefficients of a stack. `layers` holds 5 doubles per layer
 * (mu, epsilon, sigma, beta, depth); `zeta` receives 2 doubles (Re, Im) per layer. */
MLW_API mlw_status mlw_transfer_coefficients(const double* layers, size_t count,
                                             double angular_frequency, double ambient_impedance,
                                             int normalize, double* zeta);

/* P_max * lambda_max of the target form for an M-antenna array over N samples.
 * `zeta` holds 2 doubles per coefficient. */
MLW_API mlw_status mlw_single_target_power(int antennas, double spacing_over_wavelength,
                                           int horizon, double theta_deg, const double* zeta,
                                           size_t count, double power_budget, double* power);

#ifdef __cplusplus
}
#endif

#endif
