#include "mlwave/multilayer.hpp"

#include <cmath>

#include <fmt/format.h>

namespace mlwave {

namespace {

constexpr double kSmallAttenuationProduct = 1e-12;

}  // namespace

void validate(const Layer& layer) {
  auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
  auto nonnegative = [](double v) { return std::isfinite(v) && v >= 0.0; };
  if (!positive(layer.mu)) throw DomainError(fmt::format("layer mu must be > 0 (got {})", layer.mu));
  if (!positive(layer.epsilon))
    throw DomainError(fmt::format("layer epsilon must be > 0 (got {})", layer.epsilon));
  if (!nonnegative(layer.sigma))
    throw DomainError(fmt::format("layer sigma must be >= 0 (got {})", layer.sigma));
  if (!nonnegative(layer.beta))
    throw DomainError(fmt::format("layer beta must be >= 0 (got {})", layer.beta));
  // depth may be +inf (semi-infinite backing layer); it only enters through exp(-beta*l).
  if (!(layer.depth > 0.0) || std::isnan(layer.depth))
    throw DomainError(fmt::format("layer depth must be > 0 (got {})", layer.depth));
}

void validate(const MaterialStack& stack) {
  if (stack.layers.empty()) throw DomainError("material stack needs at least one layer");
  if (!(stack.angular_frequency > 0.0) || !std::isfinite(stack.angular_frequency))
    throw DomainError(
        fmt::format("angular frequency must be > 0 (got {})", stack.angular_frequency));
  if (!std::isfinite(stack.ambient_impedance.real()) ||
      !std::isfinite(stack.ambient_impedance.imag()))
    throw DomainError("ambient impedance must be finite");
  if (!(stack.sample_period > 0.0))
    throw DomainError(fmt::format("sample period must be > 0 (got {})", stack.sample_period));
  for (std::size_t i = 0; i < stack.layers.size(); ++i) {
    try {
      validate(stack.layers[i]);
    } catch (const DomainError& e) {
      throw DomainError(fmt::format("layer {}: {}", i + 1, e.what()));
    }
  }
}

cplx layer_impedance(const Layer& layer, double angular_frequency) {
  validate(layer);
  if (!(angular_frequency > 0.0))
    throw DomainError(fmt::format("angular frequency must be > 0 (got {})", angular_frequency));
  const double loss_tangent = layer.sigma * angular_frequency / layer.epsilon;
  const cplx lossy = std::sqrt(cplx(1.0, -loss_tangent));
  const cplx eta = std::sqrt(layer.mu / layer.epsilon) / lossy;
  if (!std::isfinite(eta.real()) || !std::isfinite(eta.imag()) || !std::isfinite(loss_tangent))
    throw DomainError(fmt::format(
        "impedance is not finite (mu={}, epsilon={}, sigma*w/epsilon={})", layer.mu,
        layer.epsilon, loss_tangent));
  return eta;
}

cplx reflection_coefficient(cplx eta_prev, cplx eta_cur) {
  const cplx sum = eta_cur + eta_prev;
  const double scale = std::abs(eta_cur) + std::abs(eta_prev);
  if (std::abs(sum) <= 1e-15 * scale || scale == 0.0)
    throw DomainError("degenerate boundary: impedances cancel (eta_cur = -eta_prev)");
  return (eta_cur - eta_prev) / sum;
}

double layer_attenuation(const Layer& layer) {
  validate(layer);
  const double product = layer.beta * layer.depth;
  if (product < kSmallAttenuationProduct) return layer.depth;
  // -expm1(-x) keeps full precision when beta*l is small but above the cutoff.
  return -std::expm1(-product) / layer.beta;
}

MultilayerResponse transfer_coefficients(const MaterialStack& stack) {
  validate(stack);
  MultilayerResponse out;
  out.sample_period = stack.sample_period;
  out.zeta.reserve(stack.layers.size());

  cplx eta_prev = stack.ambient_impedance;
  double attenuation = 1.0;  // product of alpha over shallower layers
  for (std::size_t i = 0; i < stack.layers.size(); ++i) {
    const Layer& layer = stack.layers[i];
    cplx rho;
    cplx eta;
    try {
      eta = layer_impedance(layer, stack.angular_frequency);
      rho = reflection_coefficient(eta_prev, eta);
    } catch (const DomainError& e) {
      throw DomainError(fmt::format("layer {}: {}", i + 1, e.what()));
    }
    out.zeta.push_back(attenuation * rho);

    const double alpha = layer_attenuation(layer);
    if (alpha > 1.0)
      out.diagnostics.push_back(
          fmt::format("layer {}: attenuation alpha = {:.6g} exceeds 1 (beta={}, depth={})", i + 1,
                      alpha, layer.beta, layer.depth));
    attenuation *= alpha;
    eta_prev = eta;
  }
  return out;
}

MultilayerResponse normalize_to_surface(const MultilayerResponse& response) {
  if (response.zeta.empty()) throw DomainError("cannot normalize an empty response");
  const double surface = std::abs(response.zeta.front());
  if (!(surface > 0.0))
    throw DomainError("surface reflection is zero; normalization to the surface is undefined");
  MultilayerResponse out = response;
  for (cplx& z : out.zeta) z /= surface;
  return out;
}

}  // namespace mlwave
