#include "mlwave/detail/interior_point.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mlwave::detail {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr const char* kPrecisionLimit =
    "stopped at the limit of floating-point precision; gap met relative to 1 + |objective|";

double inner(const RMatrix& a, const RMatrix& b) { return a.cwiseProduct(b).sum(); }

void symmetrize(RMatrix& x) { x = 0.5 * (x + x.transpose()).eval(); }

}  // namespace

double max_step_to_boundary(const RMatrix& x, const RMatrix& dx) {
  if (x.size() == 0) return kInf;
  Eigen::LLT<RMatrix> llt(x);
  if (llt.info() != Eigen::Success) return 0.0;
  const auto l = llt.matrixL();
  RMatrix tmp = l.solve(dx);
  tmp = l.solve(tmp.transpose().eval());
  symmetrize(tmp);
  const double lmin = Eigen::SelfAdjointEigenSolver<RMatrix>(tmp, Eigen::EigenvaluesOnly)
                          .eigenvalues()
                          .minCoeff();
  return lmin >= 0.0 ? kInf : -1.0 / lmin;
}

double max_step_to_boundary(const RVector& x, const RVector& dx) {
  double step = kInf;
  for (Eigen::Index i = 0; i < x.size(); ++i)
    if (dx(i) < 0.0) step = std::min(step, -x(i) / dx(i));
  return step;
}

RVector InteriorPointSolver::apply_a(const RMatrix& x, const RVector& xl) const {
  const int m = prog_->rows();
  RVector out(m);
  for (int k = 0; k < m; ++k) out(k) = inner(prog_->a_sdp[k], x);
  if (prog_->lp_dim > 0) out += prog_->a_lp * xl;
  return out;
}

RMatrix InteriorPointSolver::apply_at_sdp(const RVector& y) const {
  RMatrix out = RMatrix::Zero(prog_->sdp_dim, prog_->sdp_dim);
  for (int k = 0; k < prog_->rows(); ++k) out += y(k) * prog_->a_sdp[k];
  return out;
}

InteriorPointSolver::Residuals InteriorPointSolver::residuals(const ConicPoint& pt) const {
  Residuals r;
  r.rp = prog_->b - apply_a(pt.x, pt.xl);
  r.rd = prog_->c_sdp - apply_at_sdp(pt.y) - pt.z;
  r.rdl = prog_->c_lp - pt.zl;
  if (prog_->lp_dim > 0) r.rdl -= prog_->a_lp.transpose() * pt.y;
  return r;
}

bool InteriorPointSolver::build_scaling(const ConicPoint& pt) {
  const int d = prog_->sdp_dim;
  Eigen::LLT<RMatrix> llt(pt.x);
  if (llt.info() != Eigen::Success) return false;
  const RMatrix l = llt.matrixL();
  RMatrix s = l.transpose() * pt.z * l;
  symmetrize(s);
  Eigen::SelfAdjointEigenSolver<RMatrix> es(s);
  if (es.info() != Eigen::Success || es.eigenvalues().minCoeff() <= 0.0) return false;
  v_ = es.eigenvalues().cwiseSqrt();
  const RVector inv_sqrt_v = v_.cwiseSqrt().cwiseInverse();
  const RVector sqrt_v = v_.cwiseSqrt();
  const RMatrix l_inv = l.triangularView<Eigen::Lower>().solve(RMatrix::Identity(d, d));
  g_ = l * es.eigenvectors() * inv_sqrt_v.asDiagonal();
  g_inv_ = sqrt_v.asDiagonal() * es.eigenvectors().transpose() * l_inv;
  w_ = g_ * g_.transpose();
  symmetrize(w_);
  wl_ = pt.xl.cwiseQuotient(pt.zl);
  return true;
}

void InteriorPointSolver::build_schur() {
  const int m = prog_->rows();
  waw_.resize(m);
  for (int k = 0; k < m; ++k) waw_[k] = w_ * prog_->a_sdp[k] * w_;
  RMatrix schur(m, m);
  for (int k = 0; k < m; ++k)
    for (int l = k; l < m; ++l) schur(k, l) = schur(l, k) = inner(prog_->a_sdp[k], waw_[l]);
  if (prog_->lp_dim > 0) schur += prog_->a_lp * wl_.asDiagonal() * prog_->a_lp.transpose();
  schur_.compute(schur);
  // Nearly parallel rows (repeated objectives, say) make the matrix singular close to the
  // optimum; a tiny ridge keeps the step computable and the residual terms absorb it.
  const double scale = std::max(schur.diagonal().cwiseAbs().maxCoeff(), 1e-300);
  for (double ridge = 1e-14; !schur_usable() && ridge <= 1e-8; ridge *= 100.0) {
    schur.diagonal().array() += ridge * scale;
    schur_.compute(schur);
  }
}

bool InteriorPointSolver::schur_usable() const {
  return schur_.info() == Eigen::Success;
}

void InteriorPointSolver::solve_direction(const Residuals& r, const RMatrix& rc,
                                          const RVector& rcl, ConicPoint& d) {
  // dX + W dZ W = rc,  dZ = Rd - A^T dy,  A(dX) = rp.
  const RMatrix wrw = w_ * r.rd * w_;
  const RVector rhs = r.rp - apply_a(rc, rcl) + apply_a(wrw, wl_.cwiseProduct(r.rdl));
  d.y = schur_.solve(rhs);
  d.z = r.rd - apply_at_sdp(d.y);
  symmetrize(d.z);
  d.zl = r.rdl;
  if (prog_->lp_dim > 0) d.zl -= prog_->a_lp.transpose() * d.y;
  d.x = rc - w_ * d.z * w_;
  symmetrize(d.x);
  d.xl = rcl - wl_.cwiseProduct(d.zl);
}

ConicResult InteriorPointSolver::solve(const ConicProgram& program, ConicPoint pt) {
  prog_ = &program;
  const double nu = static_cast<double>(program.sdp_dim + program.lp_dim);
  const double norm_b = program.b.norm();
  const double norm_c = std::sqrt(program.c_sdp.squaredNorm() + program.c_lp.squaredNorm());

  ConicResult result;
  double last_step_p = 0.0;
  double last_step_d = 0.0;
  double step_fraction = 0.9;

  for (int iter = 0;; ++iter) {
    const Residuals r = residuals(pt);
    const double pobj = inner(program.c_sdp, pt.x) + program.c_lp.dot(pt.xl);
    const double dobj = program.b.dot(pt.y);
    const double complementarity = inner(pt.x, pt.z) + pt.xl.dot(pt.zl);
    const double mu = complementarity / nu;
    const double rd_norm = std::sqrt(r.rd.squaredNorm() + r.rdl.squaredNorm());
    const double pinf = r.rp.norm() / (1.0 + norm_b);
    const double dinf = rd_norm / (1.0 + norm_c);
    const double abs_gap = std::max(std::abs(pobj - dobj), complementarity);
    const double objective_size = std::abs(pobj + program.objective_offset);
    const double rel_gap = abs_gap / (program.gap_scale + objective_size);
    const bool feasible = pinf <= tol_.feasibility && dinf <= tol_.feasibility;
    // Met under the conventional 1 + |objective| normalization; accepted if precision runs out.
    const bool coarse_ok = feasible && abs_gap / (1.0 + objective_size) <= tol_.gap;

    result.iterations = iter;
    result.primal_objective = pobj;
    result.dual_objective = dobj;
    result.relative_gap = rel_gap;
    result.primal_infeasibility = pinf;
    result.dual_infeasibility = dinf;
    result.history.push_back(
        {iter, pobj, dobj, rel_gap, pinf, dinf, last_step_p, last_step_d});

    if (rel_gap <= tol_.gap && feasible) {
      result.status = SolveStatus::kOptimal;
      break;
    }
    // Dual ray: b^T y > 0 with -A^T y nearly in the cone certifies primal infeasibility.
    if (pinf > tol_.feasibility && dobj > 0.0 && (norm_c + rd_norm) / dobj < tol_.feasibility) {
      result.status = SolveStatus::kInfeasible;
      result.message = "primal infeasibility certificate found";
      break;
    }
    if (iter >= tol_.max_iterations) {
      result.status = SolveStatus::kMaxIterations;
      result.message = "iteration limit reached";
      break;
    }
    if (!build_scaling(pt)) {
      result.status = coarse_ok ? SolveStatus::kOptimal : SolveStatus::kMaxIterations;
      result.message = coarse_ok ? kPrecisionLimit : "numerical breakdown while forming the scaling matrix";
      break;
    }
    build_schur();
    if (!schur_usable()) {
      result.status = coarse_ok ? SolveStatus::kOptimal : SolveStatus::kMaxIterations;
      result.message = coarse_ok ? kPrecisionLimit : "Schur complement factorization failed";
      break;
    }

    // Predictor (affine scaling): dX + W dZ W = -X.
    ConicPoint pred;
    solve_direction(r, -pt.x, -pt.xl, pred);
    const double ap = std::min({1.0, max_step_to_boundary(pt.x, pred.x),
                                max_step_to_boundary(pt.xl, pred.xl)});
    const double ad = std::min({1.0, max_step_to_boundary(pt.z, pred.z),
                                max_step_to_boundary(pt.zl, pred.zl)});
    const double mu_aff = (inner(pt.x + ap * pred.x, pt.z + ad * pred.z) +
                           (pt.xl + ap * pred.xl).dot(pt.zl + ad * pred.zl)) /
                          nu;
    const double sigma = std::clamp(std::pow(std::max(mu_aff, 0.0) / mu, 3.0), 0.0, 1.0);

    // Corrector in the scaled space, where X and Z both become diag(v).
    const RMatrix dxs = g_inv_ * pred.x * g_inv_.transpose();
    const RMatrix dzs = g_.transpose() * pred.z * g_;
    RMatrix t = dxs * dzs;
    t += t.transpose().eval();
    const int d = program.sdp_dim;
    RMatrix h(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) h(i, j) = -t(i, j) / (v_(i) + v_(j));
    for (int i = 0; i < d; ++i) h(i, i) += sigma * mu / v_(i) - v_(i);
    RMatrix rc = g_ * h * g_.transpose();
    symmetrize(rc);
    const RVector rcl =
        ((sigma * mu - pt.xl.cwiseProduct(pt.zl).array() - pred.xl.cwiseProduct(pred.zl).array()) /
         pt.zl.array())
            .matrix();

    ConicPoint dir;
    solve_direction(r, rc, rcl, dir);

    step_fraction = 0.9 + 0.09 * std::min(ap, ad);
    const double step_p = std::min({1.0, step_fraction * max_step_to_boundary(pt.x, dir.x),
                                    step_fraction * max_step_to_boundary(pt.xl, dir.xl)});
    const double step_d = std::min({1.0, step_fraction * max_step_to_boundary(pt.z, dir.z),
                                    step_fraction * max_step_to_boundary(pt.zl, dir.zl)});
    if (step_p < 1e-12 && step_d < 1e-12) {
      result.status = coarse_ok ? SolveStatus::kOptimal : SolveStatus::kMaxIterations;
      result.message = coarse_ok ? kPrecisionLimit : "step length collapsed";
      break;
    }
    pt.x += step_p * dir.x;
    pt.xl += step_p * dir.xl;
    pt.y += step_d * dir.y;
    pt.z += step_d * dir.z;
    pt.zl += step_d * dir.zl;
    symmetrize(pt.x);
    symmetrize(pt.z);
    last_step_p = step_p;
    last_step_d = step_d;
  }
  result.point = std::move(pt);
  return result;
}

}  // namespace mlwave::detail
