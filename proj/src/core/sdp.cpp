#include "mlwave/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "mlwave/detail/interior_point.hpp"
#include "mlwave/linalg.hpp"

namespace mlwave {

namespace {

constexpr double kHermitianTol = 1e-10;

struct TraceBound {
  int row = -1;
  double min_eigenvalue = 0.0;  // of G at that row
  double trace_limit = 0.0;     // Tr(C) <= trace_limit on the feasible set
};

struct ConstraintSpectra {
  std::vector<double> min_eig;
  TraceBound trace;
};

ConstraintSpectra analyze_constraints(const SdpProblem& problem) {
  ConstraintSpectra out;
  out.trace.trace_limit = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < problem.constraints.size(); ++k) {
    const auto& c = problem.constraints[k];
    const double lmin = hermitian_eigenvalues(c.g).minCoeff();
    out.min_eig.push_back(lmin);
    if (lmin > 0.0 && c.bound >= 0.0) {
      const double limit = c.bound / lmin;
      if (limit < out.trace.trace_limit) out.trace = {static_cast<int>(k), lmin, limit};
    }
  }
  if (out.trace.row < 0)
    throw ContractViolation(
        "SDP needs a constraint with positive definite G and nonnegative bound (trace bound)");
  return out;
}

double spectral_norm(const CMatrix& h) {
  const RVector ev = hermitian_eigenvalues(h);
  return std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
}

// X0 = embed(c0 * I) with c0 chosen so every inequality has positive slack; if a bound is
// nonpositive the start is left primal infeasible and the engine works from there.
struct PrimalStart {
  double c0 = 0.0;
  std::vector<double> slacks;  // in embedded (doubled) units
  bool feasible = true;
};

PrimalStart primal_start(const SdpProblem& problem, const ConstraintSpectra& spectra) {
  const int n = problem.dimension;
  PrimalStart start;
  start.c0 = spectra.trace.trace_limit / (2.0 * n);
  if (!(start.c0 > 0.0)) start.c0 = 1.0 / (2.0 * n);

  double worst_ratio = 1.0;
  for (const auto& c : problem.constraints) {
    const double load = start.c0 * c.g.trace().real();
    if (load >= c.bound) {
      if (c.bound > 0.0 && load > 0.0)
        worst_ratio = std::min(worst_ratio, c.bound / load);
      else
        start.feasible = false;
    }
  }
  if (worst_ratio < 1.0) start.c0 *= 0.9 * worst_ratio;
  if (!(start.c0 > std::numeric_limits<double>::min())) {
    start.c0 = 1.0 / (2.0 * n);
    start.feasible = false;
  }
  for (const auto& c : problem.constraints) {
    const double s = 2.0 * (c.bound - start.c0 * c.g.trace().real());
    start.slacks.push_back(s > 0.0 ? s : std::max(1.0, std::abs(s)));
  }
  return start;
}

// Dual multipliers for the inequality rows: a small uniform delta, with the trace row
// raised until Z = base + sum delta_k G_k is at least eta * I.
std::vector<double> dual_inequality_multipliers(const SdpProblem& problem,
                                                const ConstraintSpectra& spectra,
                                                double base_max_eig, double eta) {
  const std::size_t count = problem.constraints.size();
  double scale = 1.0;
  for (const auto& c : problem.constraints) scale = std::max(scale, spectral_norm(c.g));
  const double delta = eta / (scale * static_cast<double>(std::max<std::size_t>(count, 1)));
  std::vector<double> mult(count, delta);
  double deficit = std::max(0.0, base_max_eig) + eta;
  for (std::size_t k = 0; k < count; ++k)
    if (static_cast<int>(k) != spectra.trace.row) deficit += delta * std::max(0.0, -spectra.min_eig[k]);
  mult[spectra.trace.row] = deficit / spectra.trace.min_eigenvalue;
  return mult;
}

SolveReport finalize(const SdpProblem& problem, const detail::ConicResult& res, bool maxmin,
                     double objective_offset, const SdpTolerances& tol) {
  SolveReport report;
  report.status = res.status;
  report.iterations = res.iterations;
  report.duality_gap = res.relative_gap;
  report.primal_infeasibility = res.primal_infeasibility;
  report.dual_infeasibility = res.dual_infeasibility;
  report.message = res.message;
  report.dual_objective = -(res.dual_objective + objective_offset);
  for (const auto& h : res.history) {
    IterationRecord rec = h;
    rec.primal_objective = -(h.primal_objective + objective_offset);
    rec.dual_objective = -(h.dual_objective + objective_offset);
    report.history.push_back(rec);
  }

  CMatrix c = extract_complex(res.point.x);
  auto evaluate = [&](const CMatrix& cov) {
    report.slacks.clear();
    for (const auto& con : problem.constraints)
      report.slacks.push_back(con.bound - trace_product(con.g, cov));
  };
  evaluate(c);

  // Rounding can leave a constraint violated by a few ulps; with PSD constraint matrices
  // shrinking C restores feasibility at a proportional cost in objective.
  double shrink = 1.0;
  bool psd_constraints = true;
  for (std::size_t k = 0; k < problem.constraints.size(); ++k) {
    const auto& con = problem.constraints[k];
    const double load = con.bound - report.slacks[k];
    if (report.slacks[k] < 0.0 && con.bound > 0.0 && load > 0.0)
      shrink = std::min(shrink, con.bound / load);
    if (hermitian_eigenvalues(con.g).minCoeff() < -1e-12 * std::max(1.0, spectral_norm(con.g)))
      psd_constraints = false;
  }
  if (shrink < 1.0 && psd_constraints && res.status != SolveStatus::kInfeasible) {
    c *= shrink * (1.0 - 4.0 * std::numeric_limits<double>::epsilon());
    evaluate(c);
  }

  report.solution.c = c;
  for (const auto& obj : problem.objectives) report.objective_values.push_back(trace_product(obj.f, c));
  if (maxmin) {
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < problem.objectives.size(); ++j)
      worst = std::min(worst, problem.objectives[j].weight * report.objective_values[j]);
    report.objective = worst;
  } else {
    report.objective = problem.objectives.front().weight * report.objective_values.front();
  }

  if (report.status == SolveStatus::kOptimal) {
    for (std::size_t k = 0; k < report.slacks.size(); ++k) {
      const double allowed = tol.feasibility * std::max(1.0, std::abs(problem.constraints[k].bound));
      if (report.slacks[k] < -allowed) {
        report.status = SolveStatus::kMaxIterations;
        report.message = fmt::format("constraint {} violated by {:.3e} after solve", k,
                                     -report.slacks[k]);
      }
    }
  }
  return report;
}

SolveReport zero_solution(const SdpProblem& problem) {
  SolveReport report;
  report.status = SolveStatus::kOptimal;
  report.solution.c = CMatrix::Zero(problem.dimension, problem.dimension);
  for (const auto& con : problem.constraints) report.slacks.push_back(con.bound);
  report.objective_values.assign(problem.objectives.size(), 0.0);
  report.message = "all objective matrices are zero";
  return report;
}

bool all_objectives_zero(const SdpProblem& problem) {
  return std::all_of(problem.objectives.begin(), problem.objectives.end(), [](const auto& o) {
    return o.weight == 0.0 || o.f.cwiseAbs().maxCoeff() == 0.0;
  });
}

}  // namespace

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal:
      return "optimal";
    case SolveStatus::kInfeasible:
      return "infeasible";
    case SolveStatus::kMaxIterations:
      return "max-iterations";
  }
  return "unknown";
}

RMatrix embed_real(const CMatrix& h) {
  require_hermitian(h, kHermitianTol, "embedded matrix");
  const Eigen::Index n = h.rows();
  RMatrix out(2 * n, 2 * n);
  out.topLeftCorner(n, n) = h.real();
  out.topRightCorner(n, n) = -h.imag();
  out.bottomLeftCorner(n, n) = h.imag();
  out.bottomRightCorner(n, n) = h.real();
  return out;
}

CMatrix extract_complex(const RMatrix& x) {
  if (x.rows() != x.cols() || x.rows() % 2 != 0)
    throw ContractViolation("embedded matrix must be square with even dimension");
  const Eigen::Index n = x.rows() / 2;
  RMatrix re = 0.5 * (x.topLeftCorner(n, n) + x.bottomRightCorner(n, n));
  RMatrix im = 0.5 * (x.bottomLeftCorner(n, n) - x.topRightCorner(n, n));
  re = 0.5 * (re + re.transpose()).eval();
  im = 0.5 * (im - im.transpose()).eval();
  CMatrix out(n, n);
  out.real() = re;
  out.imag() = im;
  return out;
}

void validate(const SdpProblem& problem) {
  if (problem.dimension < 1) throw ContractViolation("SDP dimension must be >= 1");
  if (problem.objectives.empty()) throw ContractViolation("SDP needs at least one objective");
  auto check = [&](const CMatrix& m, const std::string& what) {
    if (m.rows() != problem.dimension || m.cols() != problem.dimension)
      throw ContractViolation(fmt::format("{} is {}x{}, expected {}x{}", what, m.rows(), m.cols(),
                                          problem.dimension, problem.dimension));
    require_hermitian(m, kHermitianTol, what.c_str());
    if (!m.allFinite()) throw ContractViolation(what + " has non-finite entries");
  };
  for (std::size_t j = 0; j < problem.objectives.size(); ++j) {
    check(problem.objectives[j].f, fmt::format("objective {}", j));
    if (!std::isfinite(problem.objectives[j].weight))
      throw ContractViolation(fmt::format("objective {} weight is not finite", j));
  }
  for (std::size_t k = 0; k < problem.constraints.size(); ++k) {
    check(problem.constraints[k].g, fmt::format("constraint {}", k));
    if (!std::isfinite(problem.constraints[k].bound))
      throw ContractViolation(fmt::format("constraint {} bound is not finite", k));
  }
}

SolveReport solve_max(const SdpProblem& problem, const SdpTolerances& tol) {
  validate(problem);
  if (problem.objectives.size() != 1)
    throw ContractViolation("solve_max takes exactly one objective");
  const ConstraintSpectra spectra = analyze_constraints(problem);
  if (all_objectives_zero(problem)) return zero_solution(problem);

  const int n = problem.dimension;
  const int d = 2 * n;
  const int rows = static_cast<int>(problem.constraints.size());
  const CMatrix f = problem.objectives.front().weight * problem.objectives.front().f;

  // min -<E(F), X>/2  s.t.  <E(G_k), X> + s_k = 2 b_k.
  detail::ConicProgram prog;
  prog.sdp_dim = d;
  prog.lp_dim = rows;
  prog.c_sdp = -0.5 * embed_real(hermitian_part(f));
  prog.c_lp = RVector::Zero(rows);
  prog.a_lp = RMatrix::Identity(rows, rows);
  prog.b.resize(rows);
  for (int k = 0; k < rows; ++k) {
    prog.a_sdp.push_back(embed_real(hermitian_part(problem.constraints[k].g)));
    prog.b(k) = 2.0 * problem.constraints[k].bound;
  }

  const PrimalStart ps = primal_start(problem, spectra);
  const double fmax = max_eigenvalue(hermitian_part(f));
  const double eta = std::max({std::abs(fmax), spectral_norm(f) * 1e-3, 1e-12});
  const std::vector<double> mult = dual_inequality_multipliers(problem, spectra, fmax / 2.0, eta);

  detail::ConicPoint start;
  start.x = ps.c0 * RMatrix::Identity(d, d);
  start.xl = Eigen::Map<const RVector>(ps.slacks.data(), rows);
  start.y.resize(rows);
  start.zl.resize(rows);
  start.z = prog.c_sdp;
  for (int k = 0; k < rows; ++k) {
    start.y(k) = -mult[k];
    start.zl(k) = mult[k];
    start.z += mult[k] * prog.a_sdp[k];
  }

  detail::InteriorPointSolver solver(tol);
  const detail::ConicResult res = solver.solve(prog, std::move(start));
  return finalize(problem, res, false, 0.0, tol);
}

SolveReport solve_maxmin(const SdpProblem& problem, const SdpTolerances& tol) {
  validate(problem);
  const ConstraintSpectra spectra = analyze_constraints(problem);
  if (all_objectives_zero(problem)) return zero_solution(problem);

  const int n = problem.dimension;
  const int d = 2 * n;
  const int objectives = static_cast<int>(problem.objectives.size());
  const int inequalities = static_cast<int>(problem.constraints.size());
  const int rows = objectives + inequalities;
  const int lp = 1 + objectives + inequalities;  // [Gamma', t_1..t_m, s_1..s_K]

  std::vector<CMatrix> f;
  double fnorm = 0.0;
  for (const auto& o : problem.objectives) {
    f.push_back(hermitian_part(o.weight * o.f));
    fnorm = std::max(fnorm, spectral_norm(f.back()));
  }
  // Gamma = Gamma' - shift with Gamma' >= 0; the shift exceeds |Tr(F_j C)| on the feasible
  // set, so the sign restriction never binds.
  const double shift = 1.0 + fnorm * spectra.trace.trace_limit;

  detail::ConicProgram prog;
  prog.sdp_dim = d;
  prog.lp_dim = lp;
  prog.objective_offset = shift;
  // Tight clutter bounds can push Gamma* many orders below the objective scale.
  prog.gap_scale = 1e-6 * shift;
  prog.c_sdp = RMatrix::Zero(d, d);
  prog.c_lp = RVector::Zero(lp);
  prog.c_lp(0) = -1.0;
  prog.a_lp = RMatrix::Zero(rows, lp);
  prog.b.resize(rows);
  for (int j = 0; j < objectives; ++j) {
    // Tr(F_j C) + shift - Gamma' - t_j = 0
    prog.a_sdp.push_back(0.5 * embed_real(f[j]));
    prog.a_lp(j, 0) = -1.0;
    prog.a_lp(j, 1 + j) = -1.0;
    prog.b(j) = -shift;
  }
  for (int k = 0; k < inequalities; ++k) {
    prog.a_sdp.push_back(embed_real(hermitian_part(problem.constraints[k].g)));
    prog.a_lp(objectives + k, 1 + objectives + k) = 1.0;
    prog.b(objectives + k) = 2.0 * problem.constraints[k].bound;
  }

  const PrimalStart ps = primal_start(problem, spectra);
  double min_obj = std::numeric_limits<double>::infinity();
  for (const auto& fj : f) min_obj = std::min(min_obj, ps.c0 * fj.trace().real());

  detail::ConicPoint start;
  start.x = ps.c0 * RMatrix::Identity(d, d);
  start.xl.resize(lp);
  start.xl(0) = 0.5 * (shift + min_obj);
  for (int j = 0; j < objectives; ++j)
    start.xl(1 + j) = ps.c0 * f[j].trace().real() + shift - start.xl(0);
  for (int k = 0; k < inequalities; ++k) start.xl(1 + objectives + k) = ps.slacks[k];

  // Dual: y_j = 2/m on objective rows gives z_Gamma = 1 and z_t = 2/m.
  CMatrix mean_f = CMatrix::Zero(n, n);
  for (const auto& fj : f) mean_f += fj / static_cast<double>(objectives);
  const double base = max_eigenvalue(mean_f);
  const double eta = std::max({std::abs(base), fnorm * 1e-3, 1e-12});
  const std::vector<double> mult = dual_inequality_multipliers(problem, spectra, base, eta);

  start.y.resize(rows);
  start.zl.resize(lp);
  start.z = prog.c_sdp;
  start.zl(0) = 1.0;
  for (int j = 0; j < objectives; ++j) {
    const double yj = 2.0 / objectives;
    start.y(j) = yj;
    start.zl(1 + j) = yj;
    start.z -= yj * prog.a_sdp[j];
  }
  for (int k = 0; k < inequalities; ++k) {
    start.y(objectives + k) = -mult[k];
    start.zl(1 + objectives + k) = mult[k];
    start.z += mult[k] * prog.a_sdp[objectives + k];
  }

  detail::InteriorPointSolver solver(tol);
  const detail::ConicResult res = solver.solve(prog, std::move(start));
  return finalize(problem, res, true, shift, tol);
}

}  // namespace mlwave
