#pragma once

#include <span>
#include <string>
#include <vector>

#include "mlwave/common.hpp"
#include "mlwave/sdp.hpp"
#include "mlwave/spacetime.hpp"

namespace mlwave {

struct AngleInterval {
  double low = 0.0;
  double high = 0.0;

  friend bool operator==(const AngleInterval&, const AngleInterval&) = default;
};

/// Uniformly sampled angles, `resolution` points per interval (endpoints included).
struct UncertaintyGrid {
  std::vector<double> points;
  int resolution = 0;
};

/// Intervals with low == high contribute a single point. Points are concatenated per interval
/// and then sorted.
UncertaintyGrid make_grid(std::span<const AngleInterval> intervals, int resolution);

struct AnalyticDesign {
  HermitianCovariance covariance;
  double power = 0.0;          // P_max * lambda_max
  double top_eigenvalue = 0.0;
  bool eigenvalue_tie = false;  // top eigenvalue not simple within 1e-10 relative
};

/// Rank-one optimum C = P v v^H along the top eigenvector of the form.
AnalyticDesign solve_single_target_analytic(const QuadraticForm& qf, double p_max);

/// LP over eigen-directions: the whole budget goes to the largest eigenvalue, ties toward the
/// highest index. `eigenvalues` must be sorted ascending.
std::vector<double> lp_power_allocation(std::span<const double> eigenvalues, double p_max);

struct RobustProblem {
  std::vector<QuadraticForm> targets;   // one per target grid angle
  std::vector<QuadraticForm> clutters;  // one per clutter grid angle
  double clutter_bound = 0.0;           // xi
  double power_budget = 0.0;            // P_max
};

struct RobustReport {
  SolveReport sdp;
  double worst_case_power = 0.0;  // Gamma*
  std::vector<double> target_powers;
  std::vector<double> clutter_powers;
  bool clutter_bounds_verified = false;  // each clutter power <= xi (1 + 1e-8)
};

RobustReport solve_robust(const RobustProblem& problem, const SdpTolerances& tol = {});

struct ParetoProblem {
  std::vector<QuadraticForm> targets;
  std::vector<QuadraticForm> clutters;
  double clutter_sum_bound = 0.0;  // psi
  double power_budget = 0.0;
};

struct ParetoPoint {
  std::vector<double> weights;
  std::vector<double> target_powers;  // Tr(Ztilde_j C)
  double weighted_objective = 0.0;
  double clutter_power = 0.0;  // sum_k Tr(Ztilde_ck C)
  int rank = 0;
  SolveStatus status = SolveStatus::kMaxIterations;
  std::string message;
  int iterations = 0;
  double duality_gap = 0.0;
};

ParetoPoint solve_pareto_point(const ParetoProblem& problem, std::span<const double> weights,
                               const SdpTolerances& tol = {});

/// Weight vectors strictly inside the simplex: all compositions k_j / (count + 1) with k_j >= 1.
/// For two targets this is gamma_1 = 1/(count+1), ..., count/(count+1).
std::vector<std::vector<double>> simplex_weights(int targets, int weight_count);

/// Solves every weight vector (in parallel when `threads` > 1), sorted by the weights and with
/// duplicate power vectors (within 1e-9) removed. Failed solves stay in the list with their
/// status.
std::vector<ParetoPoint> sweep_pareto(const ParetoProblem& problem, int weight_count,
                                      const SdpTolerances& tol = {}, unsigned threads = 1);

struct BaselineDesign {
  HermitianCovariance covariance;
  double incident_power = 0.0;
  double backscattered_power = 0.0;
};

/// Design that ignores the material response: maximizes Tr(A^H A C) under the power budget.
/// The optimum is not unique (the top eigenspace of A^H A has dimension N); the returned C is
/// the centre of the optimal face, equal power in every time slot steered at the target.
BaselineDesign baseline_no_response(const QuadraticForm& target, const QuadraticForm& incident,
                                    double p_max);

struct Precoder {
  CMatrix u;  // MN x MN, columns ordered by decreasing eigenvalue
  int rank = 0;
};

Precoder extract_precoder(const HermitianCovariance& cov);

/// Numerical rank: eigenvalues above 1e-8 * lambda_max.
int effective_rank(const HermitianCovariance& cov);

}  // namespace mlwave
