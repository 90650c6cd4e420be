#pragma once

// Scenario files: a TOML subset with the sections
//   [array] [model] [[layers]] [[targets]] [[clutters]] [solver] [simulation]
// See scenarios/*.toml for complete files.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mlwave/designs.hpp"
#include "mlwave/multilayer.hpp"
#include "mlwave/sdp.hpp"
#include "mlwave/simulator.hpp"

namespace mlwave {

inline constexpr const char* kDefaultStack = "default";

/// A target or clutter: a fixed angle is stored as a degenerate interval.
struct Observer {
  std::vector<AngleInterval> intervals;
  std::optional<std::string> stack;  // clutters without a stack use the incident-power form
  int line = 0;

  bool is_point() const { return intervals.size() == 1 && intervals[0].low == intervals[0].high; }

  friend bool operator==(const Observer& a, const Observer& b) {
    return a.intervals == b.intervals && a.stack == b.stack;
  }
};

struct Scenario {
  std::string source;

  std::vector<int> antennas{4};  // swept by `single`
  double spacing_over_wavelength = 0.5;
  std::vector<int> horizons{3};  // swept by `single`

  std::map<std::string, MaterialStack> stacks;
  bool normalize_to_surface = true;

  std::vector<Observer> targets;
  std::vector<Observer> clutters;

  double power_budget = 1.0;
  std::optional<double> clutter_bound;    // xi; 1e-6 * P_max when absent
  std::vector<double> clutter_sum_bounds;  // psi values, one Pareto sweep each
  std::vector<double> weights;             // single Pareto point when set
  int weight_count = 25;
  int grid_resolution = 16;
  int clutter_grid_resolution = 16;
  double db_reference = 1.0;

  SdpTolerances tolerances;
  unsigned solver_threads = 1;
  SimulationConfig simulation;

  double effective_clutter_bound() const { return clutter_bound.value_or(1e-6 * power_budget); }

  friend bool operator==(const Scenario& a, const Scenario& b);
};

/// Parses and validates. Errors are ParseError("source:line: field: constraint").
Scenario parse_scenario(const std::string& text, const std::string& source);
Scenario load_scenario(const std::string& path);

/// Re-checks every invariant, e.g. after command-line overrides. `line` is quoted in errors.
void validate(const Scenario& scenario);

/// Canonical text form; parse_scenario(to_toml(s)) == s.
std::string to_toml(const Scenario& scenario);

/// Builds the response the scenario assigns to a stack, normalized when requested.
MultilayerResponse stack_response(const Scenario& scenario, const std::string& name);

/// Quadratic forms on every grid angle of the observers, for one (M, N).
std::vector<QuadraticForm> target_forms(const Scenario& scenario, int antennas, int horizon);
std::vector<QuadraticForm> clutter_forms(const Scenario& scenario, int antennas, int horizon);

}  // namespace mlwave
