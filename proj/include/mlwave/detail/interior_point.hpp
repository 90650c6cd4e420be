#pragma once

// Primal-dual path-following engine for a real conic program with one PSD block and one
// nonnegative orthant block:
//
//   min  <C, X> + c^T x   s.t.  <A_k, X> + a_k^T x = b_k,  X >= 0,  x >= 0
//   max  b^T y            s.t.  C - sum y_k A_k = Z >= 0,  c - a^T y = z >= 0
//
// Directions use Nesterov-Todd scaling with a Mehrotra predictor-corrector.

#include <string>
#include <vector>

#include "mlwave/common.hpp"
#include "mlwave/sdp.hpp"

namespace mlwave::detail {

struct ConicProgram {
  int sdp_dim = 0;
  int lp_dim = 0;
  RMatrix c_sdp;
  RVector c_lp;
  std::vector<RMatrix> a_sdp;  // one symmetric sdp_dim x sdp_dim matrix per row
  RMatrix a_lp;                // rows x lp_dim
  RVector b;
  // Added to the primal objective when forming the relative gap denominator, so that
  // variable shifts introduced during modelling do not inflate it.
  double objective_offset = 0.0;
  // Objective magnitude below which the gap is measured absolutely rather than relatively.
  double gap_scale = 1.0;

  int rows() const { return static_cast<int>(b.size()); }
};

struct ConicPoint {
  RMatrix x;
  RVector xl;
  RVector y;
  RMatrix z;
  RVector zl;
};

struct ConicResult {
  ConicPoint point;
  SolveStatus status = SolveStatus::kMaxIterations;
  int iterations = 0;
  double primal_objective = 0.0;  // min sense
  double dual_objective = 0.0;
  double relative_gap = 0.0;
  double primal_infeasibility = 0.0;
  double dual_infeasibility = 0.0;
  std::vector<IterationRecord> history;  // min sense; callers flip signs
  std::string message;
};

class InteriorPointSolver {
 public:
  explicit InteriorPointSolver(const SdpTolerances& tol) : tol_(tol) {}

  /// start.x and start.z must be positive definite and start.xl, start.zl positive.
  ConicResult solve(const ConicProgram& program, ConicPoint start);

 private:
  struct Residuals {
    RVector rp;
    RMatrix rd;
    RVector rdl;
  };

  Residuals residuals(const ConicPoint& pt) const;
  RVector apply_a(const RMatrix& x, const RVector& xl) const;
  RMatrix apply_at_sdp(const RVector& y) const;
  bool build_scaling(const ConicPoint& pt);
  void build_schur();
  bool schur_usable() const;
  void solve_direction(const Residuals& r, const RMatrix& rc, const RVector& rcl, ConicPoint& d);

  SdpTolerances tol_;
  const ConicProgram* prog_ = nullptr;

  // Per-iteration state.
  RMatrix g_;      // NT factor: W = G G^T
  RMatrix g_inv_;  // G^{-1}
  RMatrix w_;
  RVector v_;  // scaled point (diagonal): eigenvalues of (XZ)^{1/2}
  RVector wl_;
  std::vector<RMatrix> waw_;
  Eigen::LDLT<RMatrix> schur_;
};

/// Largest alpha in (0, inf] with X + alpha dX still PSD (inf when dX keeps it PSD for all steps).
double max_step_to_boundary(const RMatrix& x, const RMatrix& dx);
double max_step_to_boundary(const RVector& x, const RVector& dx);

}  // namespace mlwave::detail
