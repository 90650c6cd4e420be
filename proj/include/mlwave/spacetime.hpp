#pragma once

#include "mlwave/common.hpp"
#include "mlwave/linalg.hpp"
#include "mlwave/multilayer.hpp"

namespace mlwave {

/// Uniform linear array; antenna 0 is the phase reference.
struct ArrayGeometry {
  int num_antennas = 1;
  double spacing_over_wavelength = 0.5;
};

void validate(const ArrayGeometry& geometry);

struct SteeringVector {
  CVector entries;  // unit modulus, entries[0] == 1
  double angle_deg = 0.0;

  int num_antennas() const { return static_cast<int>(entries.size()); }
};

/// I_N (x) a^H: maps the stacked space-time signal to the N incident samples.
struct BlockSteering {
  CMatrix a;  // N x MN
  double angle_deg = 0.0;

  int horizon() const { return static_cast<int>(a.rows()); }
  int dimension() const { return static_cast<int>(a.cols()); }
};

/// Banded lower-triangular Toeplitz convolution matrix of the layer response.
struct ResponseMatrix {
  CMatrix z;  // N x N
  int horizon() const { return static_cast<int>(z.rows()); }
};

/// Hermitian PSD form whose trace against C gives received power at one angle.
struct QuadraticForm {
  CMatrix ztilde;  // MN x MN
  double angle_deg = 0.0;

  int dimension() const { return static_cast<int>(ztilde.rows()); }
};

// Angles are in degrees on the public surface and must lie in [-90, 90].
SteeringVector steering_vector(const ArrayGeometry& geometry, double theta_deg);
BlockSteering block_steering(const SteeringVector& sv, int horizon);
ResponseMatrix response_matrix(const MultilayerResponse& response, int horizon);

/// A^H Z^H Z A, symmetrized as (X + X^H)/2 afterwards.
QuadraticForm quadratic_form(const ResponseMatrix& rm, const BlockSteering& steering);

/// A^H A, the incident-power form used for clutter directions without a material model.
QuadraticForm clutter_form(const BlockSteering& steering);

/// Convenience composition: steering vector, block operator and quadratic form at one angle.
QuadraticForm target_form(const ArrayGeometry& geometry, const MultilayerResponse& response,
                          int horizon, double theta_deg);
QuadraticForm incident_form(const ArrayGeometry& geometry, int horizon, double phi_deg);

}  // namespace mlwave
