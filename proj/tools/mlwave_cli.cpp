// mlwave: run the design workflows on a scenario file.
//
//   mlwave <single|robust|pareto|simulate> --scenario file.toml [--out dir] [overrides]

#include <cstdint>
#include <cstdio>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mlwave/mlwave.h"

namespace {

constexpr int kExitUsage = 2;

int report(mlw_status status, const char* what) {
  std::fprintf(stderr, "mlwave: %s: %s\n", what, mlw_last_error());
  switch (status) {
    case MLW_ERR_IO: return 3;
    case MLW_ERR_INFEASIBLE: return 4;
    case MLW_ERR_SOLVER: return 5;
    case MLW_ERR_INTERNAL:
    case MLW_ERR_CONTRACT: return 1;
    default: return kExitUsage;
  }
}

struct ScenarioHandle {
  mlw_scenario* ptr = nullptr;
  ~ScenarioHandle() { mlw_scenario_free(ptr); }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Transmit covariance design for targets behind layered media"};
  app.set_version_flag("--version", std::string(mlw_version()));

  std::string subcommand;
  std::string scenario_path;
  std::string out_dir = "out";
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> trials;
  std::vector<double> psi;
  std::vector<double> weights;
  std::optional<int> grid_resolution;

  app.add_option("subcommand", subcommand, "single, robust, pareto or simulate")
      ->required()
      ->check(CLI::IsMember({"single", "robust", "pareto", "simulate"}));
  app.add_option("--scenario", scenario_path, "scenario file")->required();
  app.add_option("--out", out_dir, "output directory, created if absent")->capture_default_str();
  app.add_option("--seed", seed, "simulation seed");
  app.add_option("--trials", trials, "Monte Carlo trials")->check(CLI::PositiveNumber);
  app.add_option("--psi", psi, "clutter sum bounds, comma separated")->delimiter(',');
  app.add_option("--weights", weights, "target weights of a single Pareto point")->delimiter(',');
  app.add_option("--grid-resolution", grid_resolution, "points per uncertainty interval");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  ScenarioHandle scenario;
  if (mlw_status st = mlw_scenario_load(scenario_path.c_str(), &scenario.ptr); st != MLW_OK)
    return report(st, "cannot load scenario");

  struct Override {
    bool present;
    const char* name;
    std::function<mlw_status()> apply;
  };
  const Override overrides[] = {
      {seed.has_value(), "--seed", [&] { return mlw_scenario_set_seed(scenario.ptr, *seed); }},
      {trials.has_value(), "--trials", [&] { return mlw_scenario_set_trials(scenario.ptr, *trials); }},
      {!psi.empty(), "--psi",
       [&] { return mlw_scenario_set_psi(scenario.ptr, psi.data(), psi.size()); }},
      {!weights.empty(), "--weights",
       [&] { return mlw_scenario_set_weights(scenario.ptr, weights.data(), weights.size()); }},
      {grid_resolution.has_value(), "--grid-resolution",
       [&] { return mlw_scenario_set_grid_resolution(scenario.ptr, *grid_resolution); }},
  };
  for (const auto& o : overrides) {
    if (!o.present) continue;
    if (mlw_status st = o.apply(); st != MLW_OK) return report(st, o.name);
  }

  const int rc = mlw_run(scenario.ptr, subcommand.c_str(), out_dir.c_str());
  if (rc != 0) std::fprintf(stderr, "mlwave %s: %s\n", subcommand.c_str(), mlw_last_error());
  return rc;
}
