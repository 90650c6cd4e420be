#include "mlwave/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <thread>
#include <vector>

#include <fmt/format.h>

#include "mlwave/linalg.hpp"

namespace mlwave {

namespace {

struct RunningStats {
  double count = 0.0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    count += 1.0;
    const double delta = x - mean;
    mean += delta / count;
    m2 += delta * (x - mean);
  }

  void merge(const RunningStats& o) {
    if (o.count == 0.0) return;
    const double total = count + o.count;
    const double delta = o.mean - mean;
    mean += delta * o.count / total;
    m2 += o.m2 + delta * delta * count * o.count / total;
    count = total;
  }
};

void check_dimensions(const Precoder& precoder, const SteeringVector& sv, int horizon) {
  const Eigen::Index expected = static_cast<Eigen::Index>(sv.num_antennas()) * horizon;
  if (precoder.u.rows() != expected)
    throw ContractViolation(fmt::format("precoder has {} rows, expected M*N = {}",
                                        precoder.u.rows(), expected));
}

void draw_symbols(std::mt19937_64& rng, SymbolDistribution kind, CVector& w) {
  if (kind == SymbolDistribution::kComplexGaussian) {
    std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
    for (Eigen::Index i = 0; i < w.size(); ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      w(i) = cplx(re, im);
    }
  } else {
    const double a = 1.0 / std::sqrt(2.0);
    for (Eigen::Index i = 0; i < w.size(); ++i) {
      const auto bits = rng();
      w(i) = cplx((bits & 1u) ? a : -a, (bits & 2u) ? a : -a);
    }
  }
}

}  // namespace

CVector backscatter_samples(const Precoder& precoder, const SteeringVector& sv,
                            const MultilayerResponse& response, int horizon,
                            const CVector& symbols) {
  check_dimensions(precoder, sv, horizon);
  if (symbols.size() != precoder.u.cols())
    throw ContractViolation("symbol vector length does not match the precoder");
  const int m = sv.num_antennas();
  const CVector s = precoder.u * symbols;

  CVector incident(horizon);
  for (int n = 0; n < horizon; ++n) incident(n) = sv.entries.dot(s.segment(static_cast<Eigen::Index>(n) * m, m));

  CVector out = CVector::Zero(horizon);
  const int layers = response.num_layers();
  for (int n = 0; n < horizon; ++n)
    for (int i = 0; i < layers && i <= n; ++i) out(n) += response.zeta[i] * incident(n - i);
  return out;
}

SimulationResult estimate_power(const Precoder& precoder, const SteeringVector& sv,
                                const MultilayerResponse& response, int horizon,
                                const SimulationConfig& config) {
  if (config.trials < 1) throw DomainError("simulation needs at least one trial");
  check_dimensions(precoder, sv, horizon);

  const std::uint64_t chunks = (config.trials + kTrialsPerChunk - 1) / kTrialsPerChunk;
  std::vector<RunningStats> stats(chunks);
  const Eigen::Index dim = precoder.u.cols();

  auto run_chunk = [&](std::uint64_t chunk) {
    std::seed_seq seq{static_cast<std::uint32_t>(config.seed & 0xffffffffu),
                      static_cast<std::uint32_t>(config.seed >> 32),
                      static_cast<std::uint32_t>(chunk & 0xffffffffu),
                      static_cast<std::uint32_t>(chunk >> 32)};
    std::mt19937_64 rng(seq);
    const std::uint64_t begin = chunk * kTrialsPerChunk;
    const std::uint64_t end = std::min(config.trials, begin + kTrialsPerChunk);
    CVector w(dim);
    RunningStats local;
    for (std::uint64_t t = begin; t < end; ++t) {
      draw_symbols(rng, config.symbols, w);
      local.add(backscatter_samples(precoder, sv, response, horizon, w).squaredNorm());
    }
    stats[chunk] = local;
  };

  const unsigned threads =
      std::max(1u, std::min<unsigned>(config.threads, static_cast<unsigned>(chunks)));
  if (threads == 1) {
    for (std::uint64_t c = 0; c < chunks; ++c) run_chunk(c);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t)
      pool.emplace_back([&, t] {
        for (std::uint64_t c = t; c < chunks; c += threads) run_chunk(c);
      });
    for (auto& th : pool) th.join();
  }

  RunningStats total;
  for (const auto& s : stats) total.merge(s);

  SimulationResult out;
  out.trials = config.trials;
  out.seed = config.seed;
  out.mean_power = total.mean;
  const double variance = total.count > 1.0 ? total.m2 / (total.count - 1.0) : 0.0;
  out.std_error = std::sqrt(std::max(variance, 0.0) / total.count);

  const CMatrix c = precoder.u * precoder.u.adjoint();
  const QuadraticForm qf = quadratic_form(response_matrix(response, horizon), block_steering(sv, horizon));
  out.predicted = trace_product(qf.ztilde, c);
  const double diff = std::abs(out.mean_power - out.predicted);
  if (out.std_error > 0.0)
    out.z_score = diff / out.std_error;
  else
    out.z_score = diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return out;
}

}  // namespace mlwave
