#pragma once

#include <string>
#include <vector>

#include "mlwave/common.hpp"

namespace mlwave {

/// Free-space wave impedance in ohms, the default medium in front of the first layer.
inline constexpr double kFreeSpaceImpedance = 376.73;

/// Material constants of one stratum. SI units throughout.
struct Layer {
  double mu = 0.0;       // magnetic permeability (H/m)
  double epsilon = 0.0;  // dielectric permittivity (F/m)
  double sigma = 0.0;    // electrical conductivity (S/m)
  double beta = 0.0;     // power attenuation factor (1/m)
  double depth = 0.0;    // physical thickness (m)

  friend bool operator==(const Layer&, const Layer&) = default;
};

/// Throws DomainError unless mu > 0, epsilon > 0, sigma >= 0, beta >= 0, depth > 0.
void validate(const Layer& layer);

struct MaterialStack {
  std::vector<Layer> layers;
  cplx ambient_impedance{kFreeSpaceImpedance, 0.0};
  double angular_frequency = 0.0;  // rad/s
  double sample_period = 1.0;      // s, one layer of two-way delay per sample

  friend bool operator==(const MaterialStack&, const MaterialStack&) = default;
};

void validate(const MaterialStack& stack);

/// Composite reflection coefficients of the stack, ordered from the surface inward.
struct MultilayerResponse {
  std::vector<cplx> zeta;
  double sample_period = 1.0;
  // Non-fatal observations made while building the response (e.g. alpha > 1).
  std::vector<std::string> diagnostics;

  int num_layers() const { return static_cast<int>(zeta.size()); }
};

/// Complex impedance sqrt(mu/eps) * (1 - j sigma w / eps)^(-1/2), principal branches.
cplx layer_impedance(const Layer& layer, double angular_frequency);

/// (eta_cur - eta_prev) / (eta_cur + eta_prev). Throws DomainError when the sum vanishes.
cplx reflection_coefficient(cplx eta_prev, cplx eta_cur);

/// alpha = (1 - exp(-beta l)) / beta, with the limit alpha = l once beta*l < 1e-12.
double layer_attenuation(const Layer& layer);

MultilayerResponse transfer_coefficients(const MaterialStack& stack);

/// Divides every coefficient by |zeta[0]| so the surface term has unit magnitude.
MultilayerResponse normalize_to_surface(const MultilayerResponse& response);

}  // namespace mlwave
