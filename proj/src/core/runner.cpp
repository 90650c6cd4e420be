#include "mlwave/runner.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "mlwave/designs.hpp"
#include "mlwave/linalg.hpp"
#include "mlwave/simulator.hpp"
#include "mlwave/spacetime.hpp"

namespace mlwave {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

// Thrown by a workflow to stop with a specific exit code after emitting what it has.
struct Abort {
  ExitCode code;
  std::string message;
};

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

  void add(std::vector<std::string> row) { rows_.push_back(std::move(row)); }
  std::size_t size() const { return rows_.size(); }

  std::string render(const std::string& preamble) const {
    std::string out = preamble;
    auto emit = [&](const std::vector<std::string>& cells) {
      for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out += ',';
        out += cells[i];
      }
      out += '\n';
    };
    emit(header_);
    for (const auto& r : rows_) emit(r);
    return out;
  }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

json to_json(const SolveReport& r) {
  return {{"status", to_string(r.status)},
          {"objective", r.objective},
          {"dual_objective", r.dual_objective},
          {"duality_gap", r.duality_gap},
          {"primal_infeasibility", r.primal_infeasibility},
          {"dual_infeasibility", r.dual_infeasibility},
          {"iterations", r.iterations},
          {"trace", r.solution.c.size() ? r.solution.power() : 0.0},
          {"slacks", r.slacks},
          {"objective_values", r.objective_values},
          {"message", r.message}};
}

json to_json(const Observer& o) {
  json iv = json::array();
  for (const auto& i : o.intervals) iv.push_back({i.low, i.high});
  json out{{"intervals", iv}};
  out["stack"] = o.stack ? json(*o.stack) : json(nullptr);
  return out;
}

json scenario_echo(const Scenario& s) {
  json stacks = json::object();
  for (const auto& [name, st] : s.stacks) {
    json layers = json::array();
    for (const auto& l : st.layers)
      layers.push_back({{"mu", l.mu},
                        {"epsilon", l.epsilon},
                        {"sigma", l.sigma},
                        {"beta", l.beta},
                        {"depth", std::isinf(l.depth) ? json("inf") : json(l.depth)}});
    stacks[name] = {{"layers", layers},
                    {"angular_frequency", st.angular_frequency},
                    {"sample_period", st.sample_period},
                    {"ambient_impedance", {st.ambient_impedance.real(), st.ambient_impedance.imag()}}};
  }
  json targets = json::array(), clutters = json::array();
  for (const auto& o : s.targets) targets.push_back(to_json(o));
  for (const auto& o : s.clutters) clutters.push_back(to_json(o));
  return {{"source", s.source},
          {"antennas", s.antennas},
          {"spacing_over_wavelength", s.spacing_over_wavelength},
          {"horizons", s.horizons},
          {"stacks", stacks},
          {"normalize_to_surface", s.normalize_to_surface},
          {"targets", targets},
          {"clutters", clutters},
          {"power_budget", s.power_budget},
          {"clutter_bound", s.effective_clutter_bound()},
          {"clutter_sum_bounds", s.clutter_sum_bounds},
          {"weights", s.weights},
          {"weight_count", s.weight_count},
          {"grid_resolution", s.grid_resolution},
          {"clutter_grid_resolution", s.clutter_grid_resolution},
          {"db_reference", s.db_reference},
          {"solver", {{"gap_tolerance", s.tolerances.gap},
                      {"feasibility_tolerance", s.tolerances.feasibility},
                      {"max_iterations", s.tolerances.max_iterations},
                      {"threads", s.solver_threads}}},
          {"simulation", {{"trials", s.simulation.trials},
                          {"seed", s.simulation.seed},
                          {"symbols", s.simulation.symbols == SymbolDistribution::kQpsk
                                          ? "qpsk" : "complex_gaussian"},
                          {"threads", s.simulation.threads}}}};
}

ExitCode code_for(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal: return ExitCode::kOk;
    case SolveStatus::kInfeasible: return ExitCode::kInfeasible;
    case SolveStatus::kMaxIterations: return ExitCode::kSolver;
  }
  return ExitCode::kSolver;
}

void require_scalar_sweep(const Scenario& s, const char* what) {
  if (s.antennas.size() != 1 || s.horizons.size() != 1)
    throw Abort{ExitCode::kUsage,
                fmt::format("{} needs a single array size and horizon (got {} M values, {} N values)",
                            what, s.antennas.size(), s.horizons.size())};
}

const Observer& first_point_target(const Scenario& s, const char* what) {
  const Observer& t = s.targets.front();
  if (!t.is_point())
    throw Abort{ExitCode::kUsage, fmt::format("{} needs the first target at a fixed angle", what)};
  return t;
}

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

struct Workflow {
  explicit Workflow(CsvTable t, std::string pre = "") : table(std::move(t)), preamble(std::move(pre)) {}

  CsvTable table;
  std::string preamble;
  json reports = json::array();
  ExitCode code = ExitCode::kOk;
  std::string message;
};

// The design that maximizes backscatter from the first target, for simulation and `single`.
AnalyticDesign tr_design(const Scenario& s, const Observer& t, int m, int n) {
  const ArrayGeometry geom{m, s.spacing_over_wavelength};
  const QuadraticForm qf = target_form(geom, stack_response(s, *t.stack), n, t.intervals[0].low);
  return solve_single_target_analytic(qf, s.power_budget);
}

Workflow run_single(const Scenario& s) {
  const Observer& t = first_point_target(s, "single");
  const double theta = t.intervals[0].low;
  const MultilayerResponse resp = stack_response(s, *t.stack);
  Workflow w(CsvTable({"M", "N", "power_tr", "power_no_tr", "power_db"}),
             "# db_reference=" + csv_number(s.db_reference) + "\n");
  for (int m : s.antennas) {
    const ArrayGeometry geom{m, s.spacing_over_wavelength};
    for (int n : s.horizons) {
      const QuadraticForm qf = target_form(geom, resp, n, theta);
      const AnalyticDesign tr = solve_single_target_analytic(qf, s.power_budget);
      const BaselineDesign no_tr =
          baseline_no_response(qf, incident_form(geom, n, theta), s.power_budget);
      w.table.add({std::to_string(m), std::to_string(n), csv_number(tr.power),
                   csv_number(no_tr.backscattered_power),
                   csv_number(10.0 * std::log10(tr.power / s.db_reference))});
      w.reports.push_back({{"M", m},
                           {"N", n},
                           {"top_eigenvalue", tr.top_eigenvalue},
                           {"eigenvalue_tie", tr.eigenvalue_tie},
                           {"power_tr", tr.power},
                           {"power_no_tr", no_tr.backscattered_power},
                           {"incident_power_no_tr", no_tr.incident_power}});
    }
  }
  return w;
}

Workflow run_robust(const Scenario& s) {
  require_scalar_sweep(s, "robust");
  const int m = s.antennas[0], n = s.horizons[0];
  RobustProblem p;
  p.targets = target_forms(s, m, n);
  p.clutters = clutter_forms(s, m, n);
  p.clutter_bound = s.effective_clutter_bound();
  p.power_budget = s.power_budget;
  const RobustReport r = solve_robust(p, s.tolerances);

  Workflow w(CsvTable({"grid_angle", "kind", "achieved_power", "bound"}));
  json rep = to_json(r.sdp);
  rep["worst_case_power"] = r.worst_case_power;
  rep["clutter_bounds_verified"] = r.clutter_bounds_verified;
  rep["M"] = m;
  rep["N"] = n;
  rep["target_grid_size"] = p.targets.size();
  rep["clutter_grid_size"] = p.clutters.size();
  w.reports.push_back(rep);

  w.code = code_for(r.sdp.status);
  if (w.code != ExitCode::kOk) {
    w.message = fmt::format("robust design {}: {}", to_string(r.sdp.status), r.sdp.message);
    return w;
  }
  if (!r.clutter_bounds_verified) {
    w.code = ExitCode::kSolver;
    w.message = "robust design returned a covariance that violates a clutter bound";
    return w;
  }
  for (std::size_t i = 0; i < p.targets.size(); ++i)
    w.table.add({csv_number(p.targets[i].angle_deg), "target", csv_number(r.target_powers[i]),
                 csv_number(r.worst_case_power)});
  for (std::size_t k = 0; k < p.clutters.size(); ++k)
    w.table.add({csv_number(p.clutters[k].angle_deg), "clutter", csv_number(r.clutter_powers[k]),
                 csv_number(p.clutter_bound)});
  return w;
}

Workflow run_pareto(const Scenario& s) {
  require_scalar_sweep(s, "pareto");
  for (const auto& t : s.targets)
    if (!t.is_point()) throw Abort{ExitCode::kUsage, "pareto needs every target at a fixed angle"};
  if (s.clutter_sum_bounds.empty())
    throw Abort{ExitCode::kUsage, "pareto needs model.clutter_sum_bound (psi)"};
  const int m = s.antennas[0], n = s.horizons[0];
  const std::size_t j = s.targets.size();

  std::vector<std::string> header;
  for (std::size_t i = 1; i <= j; ++i) header.push_back(fmt::format("gamma_{}", i));
  for (std::size_t i = 1; i <= j; ++i) header.push_back(fmt::format("p_{}_over_N", i));
  header.push_back("psi");
  Workflow w{CsvTable(header)};

  ParetoProblem p;
  p.targets = target_forms(s, m, n);
  p.clutters = clutter_forms(s, m, n);
  p.power_budget = s.power_budget;
  int failures = 0;
  for (double psi : s.clutter_sum_bounds) {
    p.clutter_sum_bound = psi;
    std::vector<ParetoPoint> points;
    if (!s.weights.empty())
      points.push_back(solve_pareto_point(p, s.weights, s.tolerances));
    else
      points = sweep_pareto(p, s.weight_count, s.tolerances, s.solver_threads);
    for (const auto& pt : points) {
      w.reports.push_back({{"psi", psi},
                           {"weights", pt.weights},
                           {"target_powers", pt.target_powers},
                           {"weighted_objective", pt.weighted_objective},
                           {"clutter_power", pt.clutter_power},
                           {"rank", pt.rank},
                           {"status", to_string(pt.status)},
                           {"iterations", pt.iterations},
                           {"duality_gap", pt.duality_gap},
                           {"message", pt.message}});
      if (pt.status != SolveStatus::kOptimal) {
        ++failures;
        if (w.code == ExitCode::kOk) w.code = code_for(pt.status);
        continue;
      }
      std::vector<std::string> row;
      for (double g : pt.weights) row.push_back(csv_number(g));
      for (double pw : pt.target_powers) row.push_back(csv_number(pw / n));
      row.push_back(csv_number(psi));
      w.table.add(std::move(row));
    }
  }
  if (failures > 0) w.message = fmt::format("{} Pareto point(s) did not solve to optimality", failures);
  return w;
}

Workflow run_simulate(const Scenario& s) {
  const Observer& t = first_point_target(s, "simulate");
  const MultilayerResponse resp = stack_response(s, *t.stack);
  Workflow w(CsvTable({"predicted", "mean", "std_error", "z_score", "trials", "seed"}));
  for (int m : s.antennas) {
    const ArrayGeometry geom{m, s.spacing_over_wavelength};
    const SteeringVector sv = steering_vector(geom, t.intervals[0].low);
    for (int n : s.horizons) {
      const AnalyticDesign d = tr_design(s, t, m, n);
      const Precoder u = extract_precoder(d.covariance);
      const SimulationResult r = estimate_power(u, sv, resp, n, s.simulation);
      w.table.add({csv_number(r.predicted), csv_number(r.mean_power), csv_number(r.std_error),
                   csv_number(r.z_score), std::to_string(r.trials), std::to_string(r.seed)});
      w.reports.push_back({{"M", m},
                           {"N", n},
                           {"predicted", r.predicted},
                           {"mean", r.mean_power},
                           {"std_error", r.std_error},
                           {"z_score", r.z_score},
                           {"precoder_rank", u.rank}});
    }
  }
  return w;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write '" + path.string() + "'");
  out << content;
  out.close();
  if (!out) throw Error(ErrorCode::kIo, "failed writing '" + path.string() + "'");
}

}  // namespace

std::string csv_number(double x) { return fmt::format("{:.12g}", x); }

ExitCode exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kParse:
    case ErrorCode::kDomain:
      return ExitCode::kUsage;
    case ErrorCode::kIo: return ExitCode::kIo;
    case ErrorCode::kInfeasible: return ExitCode::kInfeasible;
    case ErrorCode::kSolver: return ExitCode::kSolver;
    case ErrorCode::kContract: return ExitCode::kInternal;
  }
  return ExitCode::kInternal;
}

RunOutcome run(const std::string& subcommand, const Scenario& scenario,
               const std::string& output_dir) {
  static const std::map<std::string, std::function<Workflow(const Scenario&)>> workflows{
      {"single", run_single},
      {"robust", run_robust},
      {"pareto", run_pareto},
      {"simulate", run_simulate}};

  RunOutcome out;
  const auto it = workflows.find(subcommand);
  if (it == workflows.end()) {
    out.code = ExitCode::kUsage;
    out.message = "unknown subcommand '" + subcommand + "' (expected single, robust, pareto or simulate)";
    return out;
  }

  try {
    validate(scenario);
    std::error_code ec;
    fs::create_directories(output_dir, ec);
    if (ec || !fs::is_directory(output_dir))
      throw Error(ErrorCode::kIo, "cannot create output directory '" + output_dir + "'");

    const auto t0 = std::chrono::steady_clock::now();
    Workflow w = it->second(scenario);
    const double elapsed = ms_since(t0);

    const fs::path dir(output_dir);
    if (w.code == ExitCode::kOk || w.table.size() > 0) {
      const fs::path csv = dir / (subcommand + ".csv");
      write_file(csv, w.table.render(w.preamble));
      out.files.push_back(csv.string());
    }
    const json log{{"tool", "mlwave"},
                   {"version", MLWAVE_VERSION_STRING},
                   {"subcommand", subcommand},
                   {"exit_code", static_cast<int>(w.code)},
                   {"message", w.message},
                   {"seed", scenario.simulation.seed},
                   {"rng", std::string(kRngAlgorithm)},
                   {"timings_ms", {{"total", elapsed}}},
                   {"scenario", scenario_echo(scenario)},
                   {"reports", w.reports}};
    const fs::path log_path = dir / "run_log.json";
    write_file(log_path, log.dump(2) + "\n");
    out.files.push_back(log_path.string());
    out.code = w.code;
    out.message = w.message;
  } catch (const Abort& a) {
    out.code = a.code;
    out.message = a.message;
  } catch (const Error& e) {
    out.code = exit_code_for(e.code());
    out.message = e.what();
  } catch (const std::exception& e) {
    out.code = ExitCode::kInternal;
    out.message = std::string("internal error: ") + e.what();
  }
  return out;
}

}  // namespace mlwave
