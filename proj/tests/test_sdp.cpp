#include <doctest.h>

#include <cmath>

#include "convert.hpp"
#include "generators.hpp"
#include "mlwave/linalg.hpp"
#include "mlwave/sdp.hpp"
#include "mlwave/spacetime.hpp"

using namespace mlwave;

namespace {

SdpProblem trace_bounded(int n, double p) {
  SdpProblem prob;
  prob.dimension = n;
  prob.constraints.push_back({CMatrix::Identity(n, n), p, "trace"});
  return prob;
}

CMatrix diag(std::initializer_list<double> d) {
  RVector v(d.size());
  int i = 0;
  for (double x : d) v(i++) = x;
  return v.cast<cplx>().asDiagonal();
}

// Best value of min_j Tr(F_j diag(p, P - p)) over a fine grid of p, for diagonal 2x2 F_j.
double brute_force_diagonal(const std::vector<CMatrix>& fs, double p_max) {
  double best = -1e300;
  for (int k = 0; k <= 100000; ++k) {
    const double p = p_max * k / 100000.0;
    double worst = 1e300;
    for (const auto& f : fs) worst = std::min(worst, f(0, 0).real() * p + f(1, 1).real() * (p_max - p));
    best = std::max(best, worst);
  }
  return best;
}

void check_weak_duality(const SolveReport& r) {
  for (const auto& it : r.history) {
    const double scale = 1.0 + std::abs(it.primal_objective) + std::abs(it.dual_objective);
    CHECK(it.primal_objective <= it.dual_objective + 1e-12 * scale);
  }
}

void check_optimal_contract(const SolveReport& r, const SdpProblem& prob, const SdpTolerances& tol) {
  REQUIRE(r.status == SolveStatus::kOptimal);
  CHECK(r.duality_gap <= tol.gap);
  for (std::size_t k = 0; k < r.slacks.size(); ++k)
    CHECK(r.slacks[k] >= -tol.feasibility * std::max(1.0, std::abs(prob.constraints[k].bound)));
  CHECK(hermitian_defect(r.solution.c) == 0.0);
  CHECK(hermitian_eigenvalues(r.solution.c).minCoeff() >= -1e-9 * std::max(1.0, r.solution.power()));
}

}  // namespace

TEST_CASE("real embedding") {
  CHECK((embed_real(CMatrix::Identity(3, 3)) - RMatrix::Identity(6, 6)).norm() == 0.0);

  CMatrix h(2, 2);
  h << cplx(0, 0), cplx(0, -1), cplx(0, 1), cplx(0, 0);
  RMatrix expect(4, 4);
  expect << 0, 0, 0, 1, 0, 0, -1, 0, 0, -1, 0, 0, 1, 0, 0, 0;
  const RMatrix e = embed_real(h);
  CHECK((e - expect).norm() == 0.0);

  std::vector<std::vector<double>> rows(4, std::vector<double>(4));
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) rows[i][j] = e(i, j);
  const auto ev = oracle::jacobi_eigenvalues(rows);
  const std::vector<double> want{-1, -1, 1, 1};
  for (int i = 0; i < 4; ++i) CHECK(ev[i] == doctest::Approx(want[i]).epsilon(1e-12));
  const auto hev = hermitian_eigenvalues(h);
  CHECK(hev(0) == doctest::Approx(-1.0));
  CHECK(hev(1) == doctest::Approx(1.0));

  CMatrix bad = CMatrix::Zero(2, 2);
  bad(0, 1) = 1.0;
  CHECK_THROWS_AS(embed_real(bad), ContractViolation);
}

TEST_CASE("embedding doubles trace products and round-trips") {
  gen::Gen g(31);
  for (int t = 0; t < 50; ++t) {
    const int n = g.integer(1, 6);
    const CMatrix f = conv::to_eigen(g.psd(n, n)) - conv::to_eigen(g.psd(n, 2));
    const CMatrix c = conv::to_eigen(g.psd(n, g.integer(1, n)));
    const double complex_trace = oracle::trace_product(conv::from_eigen(f), conv::from_eigen(c));
    const double real_trace = (embed_real(f) * embed_real(c)).trace();
    CHECK(real_trace == doctest::Approx(2.0 * complex_trace).epsilon(1e-12));
    CHECK((extract_complex(embed_real(c)) - c).norm() < 1e-14);
    CHECK(hermitian_defect(extract_complex(embed_real(c) + 1e-3 * RMatrix::Random(2 * n, 2 * n))) == 0.0);
  }
}

TEST_CASE("identity objective attains the trace bound") {
  for (double p : {0.5, 1.0, 7.0}) {
    SdpProblem prob = trace_bounded(3, p);
    prob.objectives.push_back({CMatrix::Identity(3, 3), 1.0, "I"});
    const SolveReport r = solve_max(prob);
    check_optimal_contract(r, prob, {});
    CHECK(r.objective == doctest::Approx(p).epsilon(1e-6));
    CHECK(r.solution.power() == doctest::Approx(p).epsilon(1e-6));
    check_weak_duality(r);
  }
}

TEST_CASE("diagonal 2x2 instance against a brute-force grid") {
  SdpProblem prob = trace_bounded(2, 1.0);
  const CMatrix f = diag({2.0, 1.0});
  prob.objectives.push_back({f, 1.0, "f"});
  const SolveReport r = solve_max(prob);
  check_optimal_contract(r, prob, {});
  const double oracle_value = brute_force_diagonal({f}, 1.0);
  CHECK(oracle_value == 2.0);
  CHECK(std::abs(r.objective - oracle_value) <= 1e-6 * oracle_value);
  CHECK(std::abs(r.solution.c(0, 0) - cplx(1.0, 0.0)) < 1e-6);
  CHECK(std::abs(r.solution.c(1, 1)) < 1e-6);
  check_weak_duality(r);
}

TEST_CASE("symmetric max-min instance") {
  SdpProblem prob = trace_bounded(2, 1.0);
  const CMatrix f1 = diag({1.0, 0.0}), f2 = diag({0.0, 1.0});
  prob.objectives.push_back({f1, 1.0, "f1"});
  prob.objectives.push_back({f2, 1.0, "f2"});
  const SolveReport r = solve_maxmin(prob);
  check_optimal_contract(r, prob, {});
  const double oracle_value = brute_force_diagonal({f1, f2}, 1.0);
  CHECK(oracle_value == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(std::abs(r.objective - oracle_value) <= 1e-6 * oracle_value);
  CHECK((r.solution.c - 0.5 * CMatrix::Identity(2, 2)).norm() < 1e-6);
  for (double v : r.objective_values) CHECK(r.objective <= v + 1e-8);
  check_weak_duality(r);
}

TEST_CASE("max-min over identical objectives reduces to a plain maximization") {
  gen::Gen g(41);
  for (int t = 0; t < 10; ++t) {
    const int n = g.integer(2, 5);
    const CMatrix f = conv::to_eigen(g.psd(n, g.integer(1, n)));
    SdpProblem single = trace_bounded(n, 1.0);
    single.objectives.push_back({f, 1.0, "f"});
    SdpProblem multi = single;
    multi.objectives.push_back({f, 1.0, "f again"});
    multi.objectives.push_back({f, 1.0, "f thrice"});
    const double a = solve_max(single).objective;
    const SolveReport b = solve_maxmin(multi);
    REQUIRE(b.status == SolveStatus::kOptimal);
    CHECK(std::abs(a - b.objective) <= 1e-6 * a);
    check_weak_duality(b);
  }
}

TEST_CASE("single-target problems match the closed form") {
  gen::Gen g(51);
  for (int t = 0; t < 20; ++t) {
    const int m = g.integer(1, 4), l = g.integer(1, 3);
    const int n = g.integer(l, 4);
    const auto zeta = g.zeta(l);
    const double theta = g.uniform(-80, 80), p = g.uniform(0.5, 3.0);
    MultilayerResponse resp;
    resp.zeta = zeta;
    const QuadraticForm qf = target_form(ArrayGeometry{m, 0.5}, resp, n, theta);
    SdpProblem prob = trace_bounded(m * n, p);
    prob.objectives.push_back({qf.ztilde, 1.0, "target"});
    const SolveReport r = solve_max(prob);
    check_optimal_contract(r, prob, {});
    const oracle::Mat z = oracle::toeplitz(zeta, n);
    const double closed = p * m * oracle::max_eigenvalue(oracle::multiply(oracle::adjoint(z), z));
    CHECK(std::abs(r.objective - closed) <= 1e-6 * closed);
    CHECK(r.dual_objective >= r.objective - 1e-12 * closed);
    check_weak_duality(r);
  }
}

TEST_CASE("objective is monotone in the power budget") {
  gen::Gen g(61);
  for (int t = 0; t < 10; ++t) {
    const int n = g.integer(2, 6);
    const CMatrix f = conv::to_eigen(g.psd(n, 2));
    const CMatrix clutter = conv::to_eigen(g.psd(n, 1));
    auto solve_at = [&](double p) {
      SdpProblem prob = trace_bounded(n, p);
      prob.objectives.push_back({f, 1.0, "f"});
      prob.constraints.push_back({clutter, 0.1, "clutter"});
      return solve_max(prob);
    };
    const SolveReport a = solve_at(1.0), b = solve_at(2.0);
    REQUIRE(a.status == SolveStatus::kOptimal);
    REQUIRE(b.status == SolveStatus::kOptimal);
    CHECK(b.objective >= a.objective - 1e-8 * std::abs(a.objective));
    check_weak_duality(a);
    check_weak_duality(b);
  }
}

TEST_CASE("random max-min instances satisfy the optimality contract") {
  gen::Gen g(71);
  for (int t = 0; t < 15; ++t) {
    const int n = g.integer(2, 6);
    SdpProblem prob = trace_bounded(n, g.uniform(0.5, 2.0));
    for (int j = 0; j < g.integer(2, 5); ++j)
      prob.objectives.push_back({conv::to_eigen(g.psd(n, g.integer(1, n))), g.uniform(0.5, 1.0), ""});
    for (int k = 0; k < g.integer(0, 3); ++k)
      prob.constraints.push_back({conv::to_eigen(g.psd(n, 1)), g.uniform(1e-4, 1.0), ""});
    const SdpTolerances tol;
    const SolveReport r = solve_maxmin(prob, tol);
    check_optimal_contract(r, prob, tol);
    for (std::size_t j = 0; j < r.objective_values.size(); ++j)
      CHECK(r.objective <= prob.objectives[j].weight * r.objective_values[j] + 1e-8);
    check_weak_duality(r);
  }
}

TEST_CASE("infeasible constraints are certified") {
  SdpProblem prob = trace_bounded(3, 1.0);
  prob.objectives.push_back({CMatrix::Identity(3, 3), 1.0, "I"});
  prob.constraints.push_back({-CMatrix::Identity(3, 3), -2.0, "trace at least 2"});
  const SolveReport r = solve_max(prob);
  CHECK(r.status == SolveStatus::kInfeasible);
}

TEST_CASE("problem validation") {
  SdpProblem no_bound;
  no_bound.dimension = 2;
  no_bound.objectives.push_back({CMatrix::Identity(2, 2), 1.0, ""});
  no_bound.constraints.push_back({diag({1.0, 0.0}), 1.0, "semidefinite only"});
  CHECK_THROWS_AS(solve_max(no_bound), ContractViolation);

  SdpProblem wrong_shape = trace_bounded(2, 1.0);
  wrong_shape.objectives.push_back({CMatrix::Identity(3, 3), 1.0, ""});
  CHECK_THROWS_AS(solve_max(wrong_shape), ContractViolation);

  SdpProblem two = trace_bounded(2, 1.0);
  two.objectives.push_back({CMatrix::Identity(2, 2), 1.0, ""});
  two.objectives.push_back({CMatrix::Identity(2, 2), 1.0, ""});
  CHECK_THROWS_AS(solve_max(two), ContractViolation);

  SdpProblem zero = trace_bounded(2, 1.0);
  zero.objectives.push_back({CMatrix::Zero(2, 2), 1.0, ""});
  const SolveReport r = solve_max(zero);
  CHECK(r.status == SolveStatus::kOptimal);
  CHECK(r.objective == 0.0);
}
