#pragma once

#include <string>
#include <vector>

#include "mlwave/common.hpp"

namespace mlwave {

struct SdpTolerances {
  double gap = 1e-8;          // relative duality gap
  double feasibility = 1e-8;  // relative primal/dual residual
  int max_iterations = 200;
};

enum class SolveStatus { kOptimal, kInfeasible, kMaxIterations };

const char* to_string(SolveStatus status);

/// Transmit covariance C (MN x MN, Hermitian PSD).
struct HermitianCovariance {
  CMatrix c;

  int dimension() const { return static_cast<int>(c.rows()); }
  double power() const { return c.trace().real(); }
};

struct SdpObjective {
  CMatrix f;
  double weight = 1.0;
  std::string label;
};

/// Tr(G C) <= bound.
struct SdpConstraint {
  CMatrix g;
  double bound = 0.0;
  std::string label;
};

/// max over C >= 0 of the (weighted) objective(s) subject to the trace-type constraints.
/// One objective means a plain maximization of weight * Tr(F C); several objectives mean
/// max min_j weight_j * Tr(F_j C). At least one constraint matrix must be positive
/// definite so that the feasible set is compact.
struct SdpProblem {
  int dimension = 0;
  std::vector<SdpObjective> objectives;
  std::vector<SdpConstraint> constraints;
};

/// Throws ContractViolation on shape/Hermitian defects or a missing trace bound.
void validate(const SdpProblem& problem);

struct IterationRecord {
  int iteration = 0;
  double primal_objective = 0.0;  // in the maximization sense of the caller
  double dual_objective = 0.0;
  double relative_gap = 0.0;
  double primal_infeasibility = 0.0;
  double dual_infeasibility = 0.0;
  double step_primal = 0.0;
  double step_dual = 0.0;
};

struct SolveReport {
  SolveStatus status = SolveStatus::kMaxIterations;
  double objective = 0.0;       // achieved value at the returned C
  double dual_objective = 0.0;  // dual bound from the final iterate
  double duality_gap = 0.0;     // relative
  double primal_infeasibility = 0.0;
  double dual_infeasibility = 0.0;
  int iterations = 0;
  HermitianCovariance solution;
  std::vector<double> slacks;            // bound_i - Tr(G_i C)
  std::vector<double> objective_values;  // Tr(F_j C), unweighted
  std::vector<IterationRecord> history;
  std::string message;
};

/// [[Re H, -Im H], [Im H, Re H]].
RMatrix embed_real(const CMatrix& h);

/// Inverse of embed_real for a (possibly unstructured) symmetric 2n x 2n matrix: the two
/// diagonal blocks and the two off-diagonal blocks are averaged, so the result is
/// Hermitian by construction.
CMatrix extract_complex(const RMatrix& x);

SolveReport solve_max(const SdpProblem& problem, const SdpTolerances& tol = {});
SolveReport solve_maxmin(const SdpProblem& problem, const SdpTolerances& tol = {});

}  // namespace mlwave
