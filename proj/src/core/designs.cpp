#include "mlwave/designs.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <thread>

#include <fmt/format.h>

#include "mlwave/linalg.hpp"

namespace mlwave {

namespace {

constexpr double kTieTolerance = 1e-10;
constexpr double kRankTolerance = 1e-8;
constexpr double kNegativeEigenTolerance = 1e-9;

// Largest-magnitude entry made real positive.
void fix_phase(Eigen::Ref<CVector> v) {
  Eigen::Index idx = 0;
  v.cwiseAbs().maxCoeff(&idx);
  const double mag = std::abs(v(idx));
  if (mag > 0.0) v *= std::conj(v(idx)) / mag;
}

CMatrix sum_of_forms(std::span<const QuadraticForm> forms, std::span<const double> weights,
                     int dimension) {
  CMatrix out = CMatrix::Zero(dimension, dimension);
  for (std::size_t j = 0; j < forms.size(); ++j) {
    const double w = weights.empty() ? 1.0 : weights[j];
    out += w * forms[j].ztilde;
  }
  return out;
}

int common_dimension(std::span<const QuadraticForm> a, std::span<const QuadraticForm> b) {
  int dim = -1;
  for (auto forms : {a, b})
    for (const auto& f : forms) {
      if (dim < 0) dim = f.dimension();
      if (f.dimension() != dim)
        throw ContractViolation(
            fmt::format("quadratic forms disagree in dimension ({} vs {})", f.dimension(), dim));
    }
  if (dim < 1) throw ContractViolation("design needs at least one target form");
  return dim;
}

void check_budget(double p_max) {
  if (!(p_max >= 0.0) || !std::isfinite(p_max))
    throw DomainError(fmt::format("power budget must be >= 0 (got {})", p_max));
}

}  // namespace

UncertaintyGrid make_grid(std::span<const AngleInterval> intervals, int resolution) {
  if (intervals.empty()) throw DomainError("uncertainty grid needs at least one interval");
  if (resolution < 2) throw DomainError(fmt::format("grid resolution must be >= 2 (got {})", resolution));
  UncertaintyGrid grid;
  grid.resolution = resolution;
  for (const auto& iv : intervals) {
    if (!(iv.low <= iv.high))
      throw DomainError(fmt::format("interval [{}, {}] has low > high", iv.low, iv.high));
    if (iv.low == iv.high) {
      grid.points.push_back(iv.low);
      continue;
    }
    const double step = (iv.high - iv.low) / (resolution - 1);
    for (int r = 0; r < resolution; ++r)
      grid.points.push_back(r == resolution - 1 ? iv.high : iv.low + step * r);
  }
  std::sort(grid.points.begin(), grid.points.end());
  return grid;
}

std::vector<double> lp_power_allocation(std::span<const double> eigenvalues, double p_max) {
  check_budget(p_max);
  std::vector<double> p(eigenvalues.size(), 0.0);
  if (eigenvalues.empty() || p_max == 0.0) return p;
  // Highest index among the maxima: with ascending input this is the last vertex.
  std::size_t best = 0;
  for (std::size_t i = 1; i < eigenvalues.size(); ++i)
    if (eigenvalues[i] >= eigenvalues[best]) best = i;
  p[best] = p_max;
  return p;
}

AnalyticDesign solve_single_target_analytic(const QuadraticForm& qf, double p_max) {
  check_budget(p_max);
  require_hermitian(qf.ztilde, 1e-10, "quadratic form");
  const int n = qf.dimension();
  Eigen::SelfAdjointEigenSolver<CMatrix> es(qf.ztilde);
  const RVector& ev = es.eigenvalues();

  AnalyticDesign out;
  out.top_eigenvalue = ev(n - 1);
  out.eigenvalue_tie =
      n > 1 && ev(n - 2) >= ev(n - 1) - kTieTolerance * std::max(std::abs(ev(n - 1)), 1e-300);

  const std::vector<double> p =
      lp_power_allocation(std::span<const double>(ev.data(), static_cast<std::size_t>(n)), p_max);
  out.covariance.c = CMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    if (p[i] == 0.0) continue;
    CVector v = es.eigenvectors().col(i);
    fix_phase(v);
    out.covariance.c += p[i] * (v * v.adjoint());
  }
  out.covariance.c = hermitian_part(out.covariance.c);
  out.power = p_max * out.top_eigenvalue;
  return out;
}

RobustReport solve_robust(const RobustProblem& problem, const SdpTolerances& tol) {
  if (problem.targets.empty()) throw DomainError("robust design needs a nonempty target grid");
  if (!(problem.clutter_bound > 0.0))
    throw DomainError(fmt::format("clutter bound xi must be > 0 (got {})", problem.clutter_bound));
  if (!(problem.power_budget > 0.0))
    throw DomainError(fmt::format("power budget must be > 0 (got {})", problem.power_budget));
  const int n = common_dimension(problem.targets, problem.clutters);

  SdpProblem sdp;
  sdp.dimension = n;
  for (const auto& t : problem.targets)
    sdp.objectives.push_back({t.ztilde, 1.0, fmt::format("target {:.6g}", t.angle_deg)});
  for (const auto& c : problem.clutters)
    sdp.constraints.push_back(
        {c.ztilde, problem.clutter_bound, fmt::format("clutter {:.6g}", c.angle_deg)});
  sdp.constraints.push_back({CMatrix::Identity(n, n), problem.power_budget, "power"});

  RobustReport out;
  out.sdp = solve_maxmin(sdp, tol);
  out.worst_case_power = out.sdp.objective;
  const CMatrix& c = out.sdp.solution.c;
  for (const auto& t : problem.targets) out.target_powers.push_back(trace_product(t.ztilde, c));
  out.clutter_bounds_verified = true;
  for (const auto& k : problem.clutters) {
    const double p = trace_product(k.ztilde, c);
    out.clutter_powers.push_back(p);
    if (p > problem.clutter_bound * (1.0 + 1e-8)) out.clutter_bounds_verified = false;
  }
  return out;
}

ParetoPoint solve_pareto_point(const ParetoProblem& problem, std::span<const double> weights,
                               const SdpTolerances& tol) {
  const int n = common_dimension(problem.targets, problem.clutters);
  if (weights.size() != problem.targets.size())
    throw DomainError(fmt::format("got {} weights for {} targets", weights.size(),
                                  problem.targets.size()));
  double total = 0.0;
  for (double g : weights) {
    if (!(g > 0.0 && g <= 1.0)) throw DomainError(fmt::format("weight {} outside (0, 1]", g));
    total += g;
  }
  if (std::abs(total - 1.0) > 1e-9) throw DomainError(fmt::format("weights sum to {}, not 1", total));
  if (!(problem.clutter_sum_bound > 0.0))
    throw DomainError(fmt::format("clutter sum bound psi must be > 0 (got {})", problem.clutter_sum_bound));
  if (!(problem.power_budget > 0.0))
    throw DomainError(fmt::format("power budget must be > 0 (got {})", problem.power_budget));

  SdpProblem sdp;
  sdp.dimension = n;
  sdp.objectives.push_back({sum_of_forms(problem.targets, weights, n), 1.0, "weighted targets"});
  if (!problem.clutters.empty())
    sdp.constraints.push_back(
        {sum_of_forms(problem.clutters, {}, n), problem.clutter_sum_bound, "clutter sum"});
  sdp.constraints.push_back({CMatrix::Identity(n, n), problem.power_budget, "power"});

  const SolveReport rep = solve_max(sdp, tol);
  ParetoPoint pt;
  pt.weights.assign(weights.begin(), weights.end());
  pt.status = rep.status;
  pt.message = rep.message;
  pt.iterations = rep.iterations;
  pt.duality_gap = rep.duality_gap;
  pt.weighted_objective = rep.objective;
  for (const auto& t : problem.targets) pt.target_powers.push_back(trace_product(t.ztilde, rep.solution.c));
  for (const auto& k : problem.clutters) pt.clutter_power += trace_product(k.ztilde, rep.solution.c);
  pt.rank = effective_rank(rep.solution);
  return pt;
}

std::vector<std::vector<double>> simplex_weights(int targets, int weight_count) {
  if (targets < 1) throw DomainError("need at least one target");
  if (weight_count < 1) throw DomainError(fmt::format("weight count must be >= 1 (got {})", weight_count));
  std::vector<std::vector<double>> out;
  if (targets == 1) {
    out.push_back({1.0});
    return out;
  }
  const int divisions = weight_count + targets - 1;
  std::vector<int> parts(targets);
  std::function<void(int, int)> recurse = [&](int index, int remaining) {
    if (index == targets - 1) {
      parts[index] = remaining;
      std::vector<double> w(targets);
      for (int j = 0; j < targets; ++j) w[j] = static_cast<double>(parts[j]) / divisions;
      out.push_back(std::move(w));
      return;
    }
    for (int k = 1; k <= remaining - (targets - 1 - index); ++k) {
      parts[index] = k;
      recurse(index + 1, remaining - k);
    }
  };
  recurse(0, divisions);
  return out;
}

std::vector<ParetoPoint> sweep_pareto(const ParetoProblem& problem, int weight_count,
                                      const SdpTolerances& tol, unsigned threads) {
  const auto weights = simplex_weights(static_cast<int>(problem.targets.size()), weight_count);
  std::vector<ParetoPoint> points(weights.size());

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < weights.size(); i = next++) {
      try {
        points[i] = solve_pareto_point(problem, weights[i], tol);
      } catch (const Error& e) {
        points[i].weights = weights[i];
        points[i].status = SolveStatus::kMaxIterations;
        points[i].message = e.what();
      }
    }
  };
  const unsigned count = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(weights.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < count; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  std::vector<ParetoPoint> unique;
  for (auto& p : points) {
    const bool duplicate = std::any_of(unique.begin(), unique.end(), [&](const ParetoPoint& q) {
      if (q.target_powers.size() != p.target_powers.size() || p.target_powers.empty()) return false;
      for (std::size_t j = 0; j < p.target_powers.size(); ++j)
        if (std::abs(q.target_powers[j] - p.target_powers[j]) > 1e-9) return false;
      return true;
    });
    if (!duplicate) unique.push_back(std::move(p));
  }
  return unique;
}

BaselineDesign baseline_no_response(const QuadraticForm& target, const QuadraticForm& incident,
                                    double p_max) {
  check_budget(p_max);
  if (target.dimension() != incident.dimension())
    throw ContractViolation("target and incident forms disagree in dimension");
  const int n = incident.dimension();
  Eigen::SelfAdjointEigenSolver<CMatrix> es(incident.ztilde);
  const RVector& ev = es.eigenvalues();
  const double top = ev(n - 1);
  int first = n - 1;
  while (first > 0 && ev(first - 1) >= top - kTieTolerance * std::max(std::abs(top), 1e-300)) --first;
  const int multiplicity = n - first;

  BaselineDesign out;
  const CMatrix v = es.eigenvectors().rightCols(multiplicity);
  out.covariance.c = hermitian_part((p_max / multiplicity) * (v * v.adjoint()));
  out.incident_power = trace_product(incident.ztilde, out.covariance.c);
  out.backscattered_power = trace_product(target.ztilde, out.covariance.c);
  return out;
}

int effective_rank(const HermitianCovariance& cov) {
  if (cov.c.size() == 0) return 0;
  const RVector ev = hermitian_eigenvalues(cov.c);
  const double top = ev.maxCoeff();
  if (!(top > 0.0)) return 0;
  return static_cast<int>((ev.array() > kRankTolerance * top).count());
}

Precoder extract_precoder(const HermitianCovariance& cov) {
  require_hermitian(cov.c, 1e-10, "covariance");
  const int n = cov.dimension();
  Eigen::SelfAdjointEigenSolver<CMatrix> es(cov.c);
  const RVector& ev = es.eigenvalues();
  const double scale = std::max(std::abs(cov.power()), cov.c.norm());
  const double floor = -kNegativeEigenTolerance * scale - 1e-300;

  Precoder out;
  out.u = CMatrix::Zero(n, n);
  const double top = n > 0 ? ev(n - 1) : 0.0;
  for (int col = 0; col < n; ++col) {
    const int i = n - 1 - col;
    if (ev(i) < floor)
      throw ContractViolation(
          fmt::format("covariance has eigenvalue {:.3e} below -1e-9 * trace", ev(i)));
    const double lambda = std::max(ev(i), 0.0);
    if (lambda > kRankTolerance * top && top > 0.0) ++out.rank;
    CVector v = es.eigenvectors().col(i);
    fix_phase(v);
    out.u.col(col) = std::sqrt(lambda) * v;
  }
  return out;
}

}  // namespace mlwave
