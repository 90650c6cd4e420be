#include "mlwave/mlwave.h"

#include <algorithm>
#include <cstring>
#include <new>
#include <string>

#include "mlwave/designs.hpp"
#include "mlwave/multilayer.hpp"
#include "mlwave/runner.hpp"
#include "mlwave/scenario.hpp"
#include "mlwave/spacetime.hpp"

struct mlw_scenario {
  mlwave::Scenario value;
};

namespace {

thread_local std::string last_error;

mlw_status to_status(mlwave::ErrorCode code) {
  using mlwave::ErrorCode;
  switch (code) {
    case ErrorCode::kInvalidArgument: return MLW_ERR_INVALID_ARGUMENT;
    case ErrorCode::kDomain: return MLW_ERR_DOMAIN;
    case ErrorCode::kContract: return MLW_ERR_CONTRACT;
    case ErrorCode::kParse: return MLW_ERR_PARSE;
    case ErrorCode::kIo: return MLW_ERR_IO;
    case ErrorCode::kInfeasible: return MLW_ERR_INFEASIBLE;
    case ErrorCode::kSolver: return MLW_ERR_SOLVER;
  }
  return MLW_ERR_INTERNAL;
}

mlw_status fail(mlw_status status, std::string message) {
  last_error = std::move(message);
  return status;
}

// Runs `body`, mapping every exception onto a status and the thread-local message.
template <typename F>
mlw_status guarded(F&& body) {
  try {
    last_error.clear();
    body();
    return MLW_OK;
  } catch (const mlwave::Error& e) {
    return fail(to_status(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(MLW_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(MLW_ERR_INTERNAL, e.what());
  }
}

template <typename F>
mlw_status modify(mlw_scenario* s, F&& change) {
  if (!s) return fail(MLW_ERR_INVALID_ARGUMENT, "scenario handle is null");
  return guarded([&] {
    mlwave::Scenario copy = s->value;
    change(copy);
    mlwave::validate(copy);
    s->value = std::move(copy);
  });
}

}  // namespace

extern "C" {

const char* mlw_version(void) { return MLWAVE_VERSION_STRING; }

const char* mlw_status_name(mlw_status status) {
  switch (status) {
    case MLW_OK: return "ok";
    case MLW_ERR_INVALID_ARGUMENT: return "invalid argument";
    case MLW_ERR_DOMAIN: return "domain error";
    case MLW_ERR_CONTRACT: return "contract violation";
    case MLW_ERR_PARSE: return "parse error";
    case MLW_ERR_IO: return "i/o error";
    case MLW_ERR_INFEASIBLE: return "infeasible";
    case MLW_ERR_SOLVER: return "solver failure";
    case MLW_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* mlw_last_error(void) { return last_error.c_str(); }

mlw_status mlw_scenario_load(const char* path, mlw_scenario** out) {
  if (!path || !out) return fail(MLW_ERR_INVALID_ARGUMENT, "path and out must be non-null");
  *out = nullptr;
  return guarded([&] { *out = new mlw_scenario{mlwave::load_scenario(path)}; });
}

mlw_status mlw_scenario_parse(const char* text, const char* source_name, mlw_scenario** out) {
  if (!text || !out) return fail(MLW_ERR_INVALID_ARGUMENT, "text and out must be non-null");
  *out = nullptr;
  return guarded([&] {
    *out = new mlw_scenario{mlwave::parse_scenario(text, source_name ? source_name : "<string>")};
  });
}

void mlw_scenario_free(mlw_scenario* scenario) { delete scenario; }

mlw_status mlw_scenario_set_seed(mlw_scenario* scenario, uint64_t seed) {
  return modify(scenario, [&](mlwave::Scenario& s) { s.simulation.seed = seed; });
}

mlw_status mlw_scenario_set_trials(mlw_scenario* scenario, uint64_t trials) {
  return modify(scenario, [&](mlwave::Scenario& s) { s.simulation.trials = trials; });
}

mlw_status mlw_scenario_set_psi(mlw_scenario* scenario, const double* psi, size_t count) {
  if (count > 0 && !psi) return fail(MLW_ERR_INVALID_ARGUMENT, "psi is null");
  return modify(scenario, [&](mlwave::Scenario& s) { s.clutter_sum_bounds.assign(psi, psi + count); });
}

mlw_status mlw_scenario_set_weights(mlw_scenario* scenario, const double* weights, size_t count) {
  if (count > 0 && !weights) return fail(MLW_ERR_INVALID_ARGUMENT, "weights is null");
  return modify(scenario, [&](mlwave::Scenario& s) { s.weights.assign(weights, weights + count); });
}

mlw_status mlw_scenario_set_grid_resolution(mlw_scenario* scenario, int resolution) {
  return modify(scenario, [&](mlwave::Scenario& s) {
    s.grid_resolution = resolution;
    s.clutter_grid_resolution = resolution;
  });
}

mlw_status mlw_scenario_to_text(const mlw_scenario* scenario, char* buffer, size_t capacity,
                                size_t* length) {
  if (!scenario) return fail(MLW_ERR_INVALID_ARGUMENT, "scenario handle is null");
  if (capacity > 0 && !buffer) return fail(MLW_ERR_INVALID_ARGUMENT, "buffer is null");
  return guarded([&] {
    const std::string text = mlwave::to_toml(scenario->value);
    if (length) *length = text.size();
    if (capacity > 0) {
      const size_t n = std::min(capacity - 1, text.size());
      std::memcpy(buffer, text.data(), n);
      buffer[n] = '\0';
    }
  });
}

int mlw_run(const mlw_scenario* scenario, const char* subcommand, const char* output_dir) {
  if (!scenario || !subcommand || !output_dir) {
    last_error = "scenario, subcommand and output_dir must be non-null";
    return static_cast<int>(mlwave::ExitCode::kUsage);
  }
  const mlwave::RunOutcome r = mlwave::run(subcommand, scenario->value, output_dir);
  last_error = r.message;
  return static_cast<int>(r.code);
}

mlw_status mlw_layer_impedance(double mu, double epsilon, double sigma, double angular_frequency,
                               double out[2]) {
  if (!out) return fail(MLW_ERR_INVALID_ARGUMENT, "out is null");
  return guarded([&] {
    const mlwave::Layer layer{mu, epsilon, sigma, 0.0, 1.0};
    const mlwave::cplx eta = mlwave::layer_impedance(layer, angular_frequency);
    out[0] = eta.real();
    out[1] = eta.imag();
  });
}

mlw_status mlw_transfer_coefficients(const double* layers, size_t count, double angular_frequency,
                                     double ambient_impedance, int normalize, double* zeta) {
  if (count > 0 && (!layers || !zeta))
    return fail(MLW_ERR_INVALID_ARGUMENT, "layers and zeta must be non-null");
  return guarded([&] {
    mlwave::MaterialStack stack;
    stack.angular_frequency = angular_frequency;
    stack.ambient_impedance = {ambient_impedance, 0.0};
    for (size_t i = 0; i < count; ++i) {
      const double* p = layers + 5 * i;
      stack.layers.push_back({p[0], p[1], p[2], p[3], p[4]});
    }
    mlwave::MultilayerResponse r = mlwave::transfer_coefficients(stack);
    if (normalize) r = mlwave::normalize_to_surface(r);
    for (size_t i = 0; i < count; ++i) {
      zeta[2 * i] = r.zeta[i].real();
      zeta[2 * i + 1] = r.zeta[i].imag();
    }
  });
}

mlw_status mlw_single_target_power(int antennas, double spacing_over_wavelength, int horizon,
                                   double theta_deg, const double* zeta, size_t count,
                                   double power_budget, double* power) {
  if (!power || (count > 0 && !zeta))
    return fail(MLW_ERR_INVALID_ARGUMENT, "zeta and power must be non-null");
  return guarded([&] {
    mlwave::MultilayerResponse r;
    for (size_t i = 0; i < count; ++i) r.zeta.emplace_back(zeta[2 * i], zeta[2 * i + 1]);
    const mlwave::ArrayGeometry geom{antennas, spacing_over_wavelength};
    const mlwave::QuadraticForm qf = mlwave::target_form(geom, r, horizon, theta_deg);
    *power = mlwave::solve_single_target_analytic(qf, power_budget).power;
  });
}

}  // extern "C"
