#pragma once

// Seeded random instances for the property tests.

#include <cstdint>
#include <random>
#include <vector>

#include "mlwave/multilayer.hpp"
#include "oracles.hpp"

namespace gen {

inline constexpr double kMu0 = 1.25663706212e-6;
inline constexpr double kEps0 = 8.8541878128e-12;

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  std::complex<double> complex(double scale = 1.0) {
    return {uniform(-scale, scale), uniform(-scale, scale)};
  }

  std::vector<std::complex<double>> zeta(int layers) {
    std::vector<std::complex<double>> z;
    for (int i = 0; i < layers; ++i) z.push_back(complex());
    return z;
  }

  /// Lossy dielectric strata in front of free space.
  mlwave::MaterialStack passive_stack(int layers) {
    mlwave::MaterialStack s;
    s.angular_frequency = 2.0 * 3.141592653589793 * uniform(5e7, 5e8);
    for (int i = 0; i < layers; ++i)
      s.layers.push_back({kMu0 * uniform(1.0, 1.5), kEps0 * uniform(1.5, 30.0), uniform(0.0, 0.1),
                          uniform(0.05, 2.0), uniform(0.1, 2.0)});
    return s;
  }

  /// Hermitian PSD n x n of the given rank, as nested vectors.
  oracle::Mat psd(int n, int rank) {
    oracle::Mat g = oracle::zeros(n, rank);
    for (auto& row : g)
      for (auto& x : row) x = complex();
    return oracle::multiply(g, oracle::adjoint(g));
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

}  // namespace gen
