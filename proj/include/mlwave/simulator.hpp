#pragma once

#include <cstdint>
#include <string_view>

#include "mlwave/common.hpp"
#include "mlwave/designs.hpp"
#include "mlwave/multilayer.hpp"
#include "mlwave/spacetime.hpp"

namespace mlwave {

enum class SymbolDistribution {
  kComplexGaussian,  // CN(0, 1) i.i.d.
  kQpsk,             // (+-1 +- j)/sqrt(2), same second moments
};

struct SimulationConfig {
  std::uint64_t trials = 100000;
  std::uint64_t seed = 0;
  SymbolDistribution symbols = SymbolDistribution::kComplexGaussian;
  unsigned threads = 1;  // result does not depend on this
};

struct SimulationResult {
  double mean_power = 0.0;
  double std_error = 0.0;
  double predicted = 0.0;  // Tr(Ztilde C)
  double z_score = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
};

/// Trials are split into fixed-size chunks, each driven by its own generator seeded from
/// (seed, chunk index); chunk statistics are merged in chunk order.
inline constexpr std::string_view kRngAlgorithm =
    "mt19937_64 per 4096-trial chunk, seeded by seed_seq{seed_lo, seed_hi, chunk}; "
    "libstdc++ normal_distribution";
inline constexpr std::uint64_t kTrialsPerChunk = 4096;

/// Time-domain path: s = U w, r_inc(n) = a^H s(n), r_bsc(n) = sum_i zeta_i r_inc(n - i).
CVector backscatter_samples(const Precoder& precoder, const SteeringVector& sv,
                            const MultilayerResponse& response, int horizon,
                            const CVector& symbols);

SimulationResult estimate_power(const Precoder& precoder, const SteeringVector& sv,
                                const MultilayerResponse& response, int horizon,
                                const SimulationConfig& config);

}  // namespace mlwave
