#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "convert.hpp"
#include "generators.hpp"
#include "mlwave/designs.hpp"
#include "mlwave/linalg.hpp"

using namespace mlwave;

namespace {

MultilayerResponse response(std::vector<cplx> zeta) {
  MultilayerResponse r;
  r.zeta = std::move(zeta);
  return r;
}

double closed_form(const std::vector<cplx>& zeta, int m, int n, double p) {
  const oracle::Mat z = oracle::toeplitz(zeta, n);
  return p * m * oracle::max_eigenvalue(oracle::multiply(oracle::adjoint(z), z));
}

// A fixed lossy three-layer response used by several cases.
const std::vector<cplx> kZeta{cplx(1.0, 0.0), cplx(0.42, -0.31), cplx(-0.18, 0.22)};

}  // namespace

TEST_CASE("uncertainty grids") {
  const std::vector<AngleInterval> one{{-10.0, 20.0}};
  const UncertaintyGrid g = make_grid(one, 4);
  REQUIRE(g.points.size() == 4);
  CHECK(g.points.front() == -10.0);
  CHECK(g.points.back() == 20.0);
  for (std::size_t i = 1; i < g.points.size(); ++i)
    CHECK(g.points[i] - g.points[i - 1] == doctest::Approx(10.0).epsilon(1e-14));

  const std::vector<AngleInterval> two{{20.0, 50.0}, {-50.0, -20.0}};
  const UncertaintyGrid g2 = make_grid(two, 16);
  CHECK(g2.points.size() == 32);
  CHECK(std::is_sorted(g2.points.begin(), g2.points.end()));
  CHECK(g2.points.front() == -50.0);
  CHECK(g2.points[15] == -20.0);
  CHECK(g2.points[16] == 20.0);
  CHECK(g2.points.back() == 50.0);

  const std::vector<AngleInterval> point{{30.0, 30.0}};
  CHECK(make_grid(point, 16).points == std::vector<double>{30.0});

  const std::vector<AngleInterval> backwards{{5.0, -5.0}};
  CHECK_THROWS_AS(make_grid(backwards, 4), DomainError);
  CHECK_THROWS_AS(make_grid(one, 1), DomainError);
}

TEST_CASE("LP power allocation") {
  const std::vector<double> l3{1, 2, 3};
  CHECK(lp_power_allocation(l3, 2.0) == std::vector<double>{0, 0, 2});
  const std::vector<double> tie{5, 5};
  CHECK(lp_power_allocation(tie, 1.0) == std::vector<double>{0, 1});
  CHECK(lp_power_allocation(l3, 0.0) == std::vector<double>{0, 0, 0});
  CHECK_THROWS_AS(lp_power_allocation(l3, -1.0), DomainError);
}

TEST_CASE("analytic single-target design") {
  SUBCASE("memoryless response") {
    gen::Gen g(3);
    for (int t = 0; t < 20; ++t) {
      const cplx z1 = g.complex();
      const int m = g.integer(1, 6), n = g.integer(1, 5);
      const double p = g.uniform(0.1, 4.0);
      const auto d = solve_single_target_analytic(
          target_form(ArrayGeometry{m, 0.5}, response({z1}), n, g.uniform(-90, 90)), p);
      CHECK(d.power == doctest::Approx(p * m * std::norm(z1)).epsilon(1e-12));
    }
  }
  SUBCASE("zero budget") {
    const auto d = solve_single_target_analytic(target_form(ArrayGeometry{3, 0.5}, response(kZeta), 4, 30.0), 0.0);
    CHECK(d.power == 0.0);
    CHECK(d.covariance.c.norm() == 0.0);
  }
  SUBCASE("trace, rank and objective") {
    gen::Gen g(13);
    for (int t = 0; t < 40; ++t) {
      const int m = g.integer(1, 5), l = g.integer(1, 3);
      const int n = g.integer(l, 6);
      const auto zeta = g.zeta(l);
      const double p = g.uniform(0.2, 3.0);
      const QuadraticForm qf = target_form(ArrayGeometry{m, 0.5}, response(zeta), n, g.uniform(-90, 90));
      const auto d = solve_single_target_analytic(qf, p);
      CHECK(d.covariance.power() == doctest::Approx(p).epsilon(1e-13));
      CHECK(effective_rank(d.covariance) == 1);
      CHECK(trace_product(qf.ztilde, d.covariance.c) == doctest::Approx(d.power).epsilon(1e-12));
      const double ref = closed_form(zeta, m, n, p);
      CHECK(std::abs(d.power - ref) <= 1e-10 * ref);
    }
  }
  SUBCASE("eigenvalue ties are flagged") {
    // Memoryless response: Z^H Z = |z|^2 I so the top eigenvalue has multiplicity N.
    const auto d = solve_single_target_analytic(target_form(ArrayGeometry{2, 0.5}, response({0.5}), 3, 0.0), 1.0);
    CHECK(d.eigenvalue_tie);
    CHECK(d.power == doctest::Approx(2 * 0.25));
    const auto e = solve_single_target_analytic(target_form(ArrayGeometry{2, 0.5}, response(kZeta), 3, 0.0), 1.0);
    CHECK_FALSE(e.eigenvalue_tie);
  }
}

TEST_CASE("analytic design agrees with the interior-point solver") {
  gen::Gen g(23);
  for (int t = 0; t < 10; ++t) {
    const int m = g.integer(1, 4), l = g.integer(1, 3);
    const int n = g.integer(l, 4);
    const QuadraticForm qf = target_form(ArrayGeometry{m, 0.5}, response(g.zeta(l)), n, g.uniform(-90, 90));
    const double p = g.uniform(0.5, 2.0);
    SdpProblem prob;
    prob.dimension = m * n;
    prob.objectives.push_back({qf.ztilde, 1.0, ""});
    prob.constraints.push_back({CMatrix::Identity(m * n, m * n), p, "trace"});
    const SolveReport r = solve_max(prob);
    REQUIRE(r.status == SolveStatus::kOptimal);
    const double a = solve_single_target_analytic(qf, p).power;
    CHECK(std::abs(a - r.objective) <= 1e-6 * a);
  }
}

TEST_CASE("robust design") {
  const ArrayGeometry geom{4, 0.5};
  SUBCASE("one target, no clutter") {
    RobustProblem p;
    p.targets.push_back(target_form(geom, response(kZeta), 3, 30.0));
    p.clutter_bound = 1e-3;
    p.power_budget = 1.5;
    const RobustReport r = solve_robust(p);
    REQUIRE(r.sdp.status == SolveStatus::kOptimal);
    const double a = solve_single_target_analytic(p.targets[0], 1.5).power;
    CHECK(std::abs(r.worst_case_power - a) <= 1e-6 * a);
    CHECK(r.clutter_bounds_verified);
  }
  SUBCASE("targets inside the suppressed region") {
    const std::vector<AngleInterval> iv{{10.0, 30.0}};
    const UncertaintyGrid grid = make_grid(iv, 5);
    RobustProblem p;
    for (double a : grid.points) {
      p.targets.push_back(target_form(geom, response(kZeta), 3, a));
      p.clutters.push_back(incident_form(geom, 3, a));
    }
    p.clutter_bound = 1e-6;
    p.power_budget = 1.0;
    const RobustReport r = solve_robust(p);
    REQUIRE(r.sdp.status == SolveStatus::kOptimal);
    double top = 0.0;
    for (const auto& t : p.targets) top = std::max(top, max_eigenvalue(t.ztilde));
    CHECK(r.worst_case_power > 0.0);
    CHECK(r.worst_case_power <= p.clutter_bound * top / geom.num_antennas * (1.0 + 1e-6));
    CHECK(r.clutter_bounds_verified);
    for (double c : r.clutter_powers) CHECK(c <= p.clutter_bound * (1.0 + 1e-8));
  }
  SUBCASE("worst case is the minimum of the target powers") {
    const std::vector<AngleInterval> targets{{-50.0, -20.0}, {20.0, 50.0}};
    const std::vector<AngleInterval> clutter{{-15.0, 15.0}};
    RobustProblem p;
    for (double a : make_grid(targets, 4).points) p.targets.push_back(target_form(geom, response(kZeta), 3, a));
    for (double a : make_grid(clutter, 4).points) p.clutters.push_back(incident_form(geom, 3, a));
    p.clutter_bound = 0.01;
    p.power_budget = 1.0;
    const RobustReport r = solve_robust(p);
    REQUIRE(r.sdp.status == SolveStatus::kOptimal);
    const double lowest = *std::min_element(r.target_powers.begin(), r.target_powers.end());
    CHECK(std::abs(r.worst_case_power - lowest) <= 1e-6 * lowest);
    CHECK(r.clutter_bounds_verified);
    CHECK(r.sdp.solution.power() <= 1.0 + 1e-8);
  }
  SUBCASE("argument checks") {
    RobustProblem p;
    CHECK_THROWS_AS(solve_robust(p), DomainError);
    p.targets.push_back(target_form(geom, response(kZeta), 3, 0.0));
    p.power_budget = 1.0;
    CHECK_THROWS_AS(solve_robust(p), DomainError);
  }
}

TEST_CASE("Pareto points") {
  const ArrayGeometry geom{4, 0.5};
  SUBCASE("single target with an inactive clutter budget") {
    ParetoProblem p;
    p.targets.push_back(target_form(geom, response(kZeta), 3, 30.0));
    p.clutters.push_back(incident_form(geom, 3, 60.0));
    p.clutter_sum_bound = 1e6;
    p.power_budget = 1.0;
    const std::vector<double> w{1.0};
    const ParetoPoint pt = solve_pareto_point(p, w);
    REQUIRE(pt.status == SolveStatus::kOptimal);
    const double a = solve_single_target_analytic(p.targets[0], 1.0).power;
    CHECK(std::abs(pt.target_powers[0] - a) <= 1e-6 * a);
    CHECK(pt.rank == 1);
  }
  SUBCASE("a clutter on top of a target silences it") {
    ParetoProblem p;
    p.targets.push_back(target_form(geom, response(kZeta), 3, 30.0));
    p.targets.push_back(target_form(geom, response(kZeta), 3, 45.0));
    p.clutters.push_back(p.targets[0]);
    p.clutter_sum_bound = 1e-9;
    p.power_budget = 1.0;
    const std::vector<double> w{0.5, 0.5};
    const ParetoPoint pt = solve_pareto_point(p, w);
    REQUIRE(pt.status == SolveStatus::kOptimal);
    CHECK(pt.target_powers[0] <= 1e-9 * (1.0 + 1e-6));
    CHECK(pt.clutter_power <= 1e-9 * (1.0 + 1e-6));
    CHECK(pt.target_powers[1] > 0.1);
  }
  SUBCASE("weighted objective grows with the clutter budget") {
    ParetoProblem p;
    p.targets.push_back(target_form(geom, response(kZeta), 3, 30.0));
    p.targets.push_back(target_form(geom, response(kZeta), 3, 45.0));
    for (double a : {25.0, 36.0, 60.0}) p.clutters.push_back(incident_form(geom, 3, a));
    p.power_budget = 1.0;
    const std::vector<double> w{0.3, 0.7};
    double prev = -1.0;
    for (double psi : {0.05, 0.1, 0.5, 1.0, 4.0}) {
      p.clutter_sum_bound = psi;
      const ParetoPoint pt = solve_pareto_point(p, w);
      REQUIRE(pt.status == SolveStatus::kOptimal);
      CHECK(pt.weighted_objective >= prev - 1e-8);
      CHECK(pt.clutter_power <= psi * (1.0 + 1e-8));
      prev = pt.weighted_objective;
    }
  }
  SUBCASE("weights and budgets are validated") {
    ParetoProblem p;
    p.targets.push_back(target_form(geom, response(kZeta), 3, 30.0));
    p.targets.push_back(target_form(geom, response(kZeta), 3, 45.0));
    p.clutter_sum_bound = 1.0;
    p.power_budget = 1.0;
    const std::vector<double> bad_sum{0.5, 0.6}, bad_count{1.0}, negative{1.2, -0.2};
    CHECK_THROWS_AS(solve_pareto_point(p, bad_sum), DomainError);
    CHECK_THROWS_AS(solve_pareto_point(p, bad_count), DomainError);
    CHECK_THROWS_AS(solve_pareto_point(p, negative), DomainError);
    p.clutter_sum_bound = 0.0;
    const std::vector<double> ok{0.5, 0.5};
    CHECK_THROWS_AS(solve_pareto_point(p, ok), DomainError);
  }
}

TEST_CASE("simplex weights") {
  const auto w2 = simplex_weights(2, 25);
  REQUIRE(w2.size() == 25);
  CHECK(w2.front()[0] == doctest::Approx(1.0 / 26.0));
  CHECK(w2.back()[0] == doctest::Approx(25.0 / 26.0));
  for (const auto& w : w2) {
    CHECK(w[0] + w[1] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(w[0] > 0.0);
    CHECK(w[1] > 0.0);
  }
  CHECK(simplex_weights(2, 1) == std::vector<std::vector<double>>{{0.5, 0.5}});
  CHECK(simplex_weights(1, 9) == std::vector<std::vector<double>>{{1.0}});
  // Compositions of 4 + 3 - 1 = 6 into 3 positive parts: C(5, 2) = 10.
  const auto w3 = simplex_weights(3, 4);
  CHECK(w3.size() == 10);
  for (const auto& w : w3) CHECK(w[0] + w[1] + w[2] == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("Pareto sweeps") {
  const ArrayGeometry geom{4, 0.5};
  SUBCASE("mirror-image targets give a boundary symmetric about the diagonal") {
    ParetoProblem p;
    p.targets.push_back(target_form(geom, response(kZeta), 3, 30.0));
    p.targets.push_back(target_form(geom, response(kZeta), 3, -30.0));
    for (double a : {-60.0, 0.0, 60.0}) p.clutters.push_back(incident_form(geom, 3, a));
    p.clutter_sum_bound = 0.5;
    p.power_budget = 1.0;
    const auto pts = sweep_pareto(p, 9, {}, 2);
    REQUIRE(pts.size() == 9);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const ParetoPoint& a = pts[i];
      const ParetoPoint& b = pts[pts.size() - 1 - i];
      REQUIRE(a.status == SolveStatus::kOptimal);
      CHECK(a.weights[0] == doctest::Approx(b.weights[1]));
      CHECK(std::abs(a.target_powers[0] - b.target_powers[1]) <= 1e-6);
      CHECK(std::abs(a.target_powers[1] - b.target_powers[0]) <= 1e-6);
    }
  }
  SUBCASE("points are mutually nondominated and thread count does not matter") {
    ParetoProblem p;
    p.targets.push_back(target_form(geom, response(kZeta), 3, 30.0));
    p.targets.push_back(target_form(geom, response(kZeta), 3, 45.0));
    for (double a : {25.0, 36.0, 60.0}) p.clutters.push_back(incident_form(geom, 3, a));
    p.clutter_sum_bound = 0.5;
    p.power_budget = 1.0;
    const auto serial = sweep_pareto(p, 12, {}, 1);
    const auto parallel = sweep_pareto(p, 12, {}, 4);
    REQUIRE(serial.size() == parallel.size());
    for (std::size_t i = 0; i < serial.size(); ++i) {
      CHECK(serial[i].weights == parallel[i].weights);
      CHECK(serial[i].target_powers == parallel[i].target_powers);
    }
    int rank_one = 0;
    for (const auto& a : serial) {
      rank_one += a.rank == 1;
      for (const auto& b : serial)
        CHECK_FALSE((b.target_powers[0] > a.target_powers[0] + 1e-6 &&
                     b.target_powers[1] > a.target_powers[1] + 1e-6));
    }
    MESSAGE("rank-one Pareto solutions: " << rank_one << " of " << serial.size());
  }
  SUBCASE("a single weight gives a single point") {
    ParetoProblem p;
    p.targets.push_back(target_form(geom, response(kZeta), 3, 30.0));
    p.targets.push_back(target_form(geom, response(kZeta), 3, 45.0));
    p.clutter_sum_bound = 1.0;
    p.power_budget = 1.0;
    CHECK(sweep_pareto(p, 1).size() == 1);
  }
}

TEST_CASE("no-response baseline") {
  gen::Gen g(33);
  SUBCASE("memoryless layers make both designs equal") {
    for (int t = 0; t < 20; ++t) {
      const int m = g.integer(1, 6), n = g.integer(1, 6);
      const double theta = g.uniform(-90, 90);
      const ArrayGeometry geom{m, 0.5};
      const QuadraticForm qf = target_form(geom, response({g.complex()}), n, theta);
      const BaselineDesign b = baseline_no_response(qf, incident_form(geom, n, theta), 1.0);
      const double tr = solve_single_target_analytic(qf, 1.0).power;
      CHECK(b.backscattered_power == doctest::Approx(tr).epsilon(1e-10));
    }
  }
  SUBCASE("the baseline spends the budget and never beats the designed covariance") {
    int strict = 0, draws = 200;
    for (int t = 0; t < draws; ++t) {
      const int m = g.integer(1, 6), n = g.integer(3, 7);
      const double theta = g.uniform(-90, 90), p = g.uniform(0.5, 2.0);
      const ArrayGeometry geom{m, 0.5};
      const MultilayerResponse resp = normalize_to_surface(transfer_coefficients(g.passive_stack(3)));
      const QuadraticForm qf = target_form(geom, resp, n, theta);
      const QuadraticForm inc = incident_form(geom, n, theta);
      const BaselineDesign b = baseline_no_response(qf, inc, p);
      const double tr = solve_single_target_analytic(qf, p).power;
      CHECK(b.covariance.power() == doctest::Approx(p).epsilon(1e-12));
      CHECK(b.incident_power == doctest::Approx(p * m).epsilon(1e-10));
      CHECK(tr >= b.backscattered_power - 1e-12 * tr);
      strict += tr > b.backscattered_power * (1.0 + 1e-9);
    }
    CHECK(strict >= 0.95 * draws);
  }
}

TEST_CASE("precoder extraction") {
  SUBCASE("rank one") {
    CVector v = CVector::Random(5);
    v.normalize();
    HermitianCovariance c{2.0 * v * v.adjoint()};
    const Precoder u = extract_precoder(c);
    CHECK(u.rank == 1);
    CHECK(u.u.col(0).norm() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    CHECK(u.u.rightCols(4).norm() < 1e-7);
    CHECK(std::abs(std::abs(u.u.col(0).dot(v)) - std::sqrt(2.0)) < 1e-12);
  }
  SUBCASE("identity") {
    const Precoder u = extract_precoder(HermitianCovariance{CMatrix::Identity(4, 4)});
    CHECK(u.rank == 4);
    CHECK((u.u * u.u.adjoint() - CMatrix::Identity(4, 4)).norm() < 1e-12);
    CHECK((u.u.adjoint() * u.u - CMatrix::Identity(4, 4)).norm() < 1e-12);
  }
  SUBCASE("random PSD reconstruction") {
    gen::Gen g(44);
    for (int t = 0; t < 50; ++t) {
      const int n = g.integer(1, 10);
      const CMatrix c = conv::to_eigen(g.psd(n, g.integer(1, n)));
      const Precoder u = extract_precoder(HermitianCovariance{c});
      CHECK((u.u * u.u.adjoint() - c).norm() <= 1e-8 * c.norm());
      for (Eigen::Index k = 1; k < u.u.cols(); ++k) CHECK(u.u.col(k - 1).norm() >= u.u.col(k).norm() - 1e-12);
    }
  }
  SUBCASE("indefinite input is refused") {
    CMatrix c = CMatrix::Identity(2, 2);
    c(1, 1) = -1.0;
    CHECK_THROWS_AS(extract_precoder(HermitianCovariance{c}), ContractViolation);
  }
}
