#include "mlwave/spacetime.hpp"

#include <cmath>

#include <fmt/format.h>

namespace mlwave {

void validate(const ArrayGeometry& geometry) {
  if (geometry.num_antennas < 1)
    throw DomainError(fmt::format("array needs at least one antenna (got {})", geometry.num_antennas));
  if (!(geometry.spacing_over_wavelength > 0.0) || !std::isfinite(geometry.spacing_over_wavelength))
    throw DomainError(fmt::format("antenna spacing must be > 0 wavelengths (got {})",
                                  geometry.spacing_over_wavelength));
}

SteeringVector steering_vector(const ArrayGeometry& geometry, double theta_deg) {
  validate(geometry);
  if (!(theta_deg >= -90.0 && theta_deg <= 90.0))
    throw DomainError(fmt::format("angle {} deg outside [-90, 90]", theta_deg));
  const double phase_step =
      -2.0 * kPi * geometry.spacing_over_wavelength * std::sin(theta_deg * kPi / 180.0);
  SteeringVector sv;
  sv.angle_deg = theta_deg;
  sv.entries.resize(geometry.num_antennas);
  sv.entries(0) = cplx(1.0, 0.0);
  for (int m = 1; m < geometry.num_antennas; ++m) sv.entries(m) = std::polar(1.0, phase_step * m);
  return sv;
}

BlockSteering block_steering(const SteeringVector& sv, int horizon) {
  if (horizon < 1) throw DomainError(fmt::format("horizon must be >= 1 (got {})", horizon));
  const int m = sv.num_antennas();
  BlockSteering out;
  out.angle_deg = sv.angle_deg;
  out.a = CMatrix::Zero(horizon, static_cast<Eigen::Index>(horizon) * m);
  const Eigen::RowVectorXcd row = sv.entries.adjoint();
  for (int n = 0; n < horizon; ++n) out.a.block(n, static_cast<Eigen::Index>(n) * m, 1, m) = row;
  return out;
}

ResponseMatrix response_matrix(const MultilayerResponse& response, int horizon) {
  const int layers = response.num_layers();
  if (layers < 1) throw DomainError("response has no layers");
  if (horizon < layers)
    throw DomainError(
        fmt::format("horizon N={} is shorter than the layer count L={}", horizon, layers));
  ResponseMatrix rm;
  rm.z = CMatrix::Zero(horizon, horizon);
  for (int col = 0; col < horizon; ++col)
    for (int i = 0; i < layers && col + i < horizon; ++i) rm.z(col + i, col) = response.zeta[i];
  return rm;
}

QuadraticForm quadratic_form(const ResponseMatrix& rm, const BlockSteering& steering) {
  if (steering.horizon() != rm.horizon())
    throw ContractViolation(fmt::format("block steering has {} rows but Z is {}x{}",
                                        steering.horizon(), rm.horizon(), rm.horizon()));
  const CMatrix za = rm.z * steering.a;
  QuadraticForm qf;
  qf.angle_deg = steering.angle_deg;
  qf.ztilde = hermitian_part(za.adjoint() * za);
  return qf;
}

QuadraticForm clutter_form(const BlockSteering& steering) {
  QuadraticForm qf;
  qf.angle_deg = steering.angle_deg;
  qf.ztilde = hermitian_part(steering.a.adjoint() * steering.a);
  return qf;
}

QuadraticForm target_form(const ArrayGeometry& geometry, const MultilayerResponse& response,
                          int horizon, double theta_deg) {
  const BlockSteering a = block_steering(steering_vector(geometry, theta_deg), horizon);
  return quadratic_form(response_matrix(response, horizon), a);
}

QuadraticForm incident_form(const ArrayGeometry& geometry, int horizon, double phi_deg) {
  return clutter_form(block_steering(steering_vector(geometry, phi_deg), horizon));
}

}  // namespace mlwave
