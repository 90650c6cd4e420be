#include "mlwave/scenario.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <tuple>
#include <type_traits>

#include <fmt/format.h>

#include "mlwave/config_text.hpp"
#include "mlwave/spacetime.hpp"

namespace mlwave {

namespace {

using config::Entry;
using config::Section;
using config::Value;

constexpr double kMaxExactInteger = 9007199254740992.0;  // 2^53

// Line numbers of the fields as read, so that validation can point back at the file.
struct LineMap {
  std::map<std::string, int> lines;

  int at(const std::string& field) const {
    auto it = lines.find(field);
    return it == lines.end() ? 0 : it->second;
  }
};

[[noreturn]] void reject(const std::string& source, int line, const std::string& field,
                         const std::string& what) {
  if (line > 0) throw ParseError(source, line, field + ": " + what);
  throw Error(ErrorCode::kInvalidArgument, field + ": " + what);
}

class SectionReader {
 public:
  SectionReader(const std::string& source, const Section& section, std::string prefix,
                std::set<std::string> allowed)
      : source_(source), section_(section), prefix_(std::move(prefix)) {
    for (const auto& e : section.entries)
      if (!allowed.count(e.key)) reject(source_, e.line, field(e.key), "unknown key");
  }

  const Entry* find(const std::string& key) const { return section_.find(key); }

  std::string field(const std::string& key) const { return prefix_ + key; }

  [[noreturn]] void fail(const Entry& e, const std::string& what) const {
    reject(source_, e.line, field(e.key), what);
  }

  [[noreturn]] void missing(const std::string& key) const {
    reject(source_, section_.line, field(key), "missing required field");
  }

  double number(const Entry& e, const Value& v) const {
    if (v.kind != Value::Kind::kNumber)
      fail(e, fmt::format("expected a number, found {}", config::kind_name(v.kind)));
    return v.number;
  }

  double number(const Entry& e) const { return number(e, e.value); }

  long long integer(const Entry& e, const Value& v) const {
    const double x = number(e, v);
    if (!v.is_integer || std::abs(x) > kMaxExactInteger) fail(e, "expected an integer");
    return static_cast<long long>(x);
  }

  bool boolean(const Entry& e) const {
    if (e.value.kind != Value::Kind::kBool) fail(e, "expected true or false");
    return e.value.boolean;
  }

  std::string text(const Entry& e) const {
    if (e.value.kind != Value::Kind::kString) fail(e, "expected a string");
    return e.value.text;
  }

  // A scalar or an array of scalars.
  std::vector<double> numbers(const Entry& e) const {
    if (e.value.kind != Value::Kind::kArray) return {number(e)};
    std::vector<double> out;
    for (const auto& item : e.value.items) out.push_back(number(e, item));
    if (out.empty()) fail(e, "expected at least one value");
    return out;
  }

  std::vector<int> integers(const Entry& e) const {
    std::vector<const Value*> items;
    if (e.value.kind == Value::Kind::kArray) {
      for (const auto& item : e.value.items) items.push_back(&item);
      if (items.empty()) fail(e, "expected at least one value");
    } else {
      items.push_back(&e.value);
    }
    std::vector<int> out;
    for (const Value* v : items) {
      const long long x = integer(e, *v);
      if (x > std::numeric_limits<int>::max() || x < std::numeric_limits<int>::min())
        fail(e, "integer out of range");
      out.push_back(static_cast<int>(x));
    }
    return out;
  }

 private:
  const std::string& source_;
  const Section& section_;
  std::string prefix_;
};

void read_array(const SectionReader& r, Scenario& s, LineMap& lines) {
  if (const Entry* e = r.find("antennas")) {
    s.antennas = r.integers(*e);
    lines.lines["array.antennas"] = e->line;
  }
  if (const Entry* e = r.find("spacing")) {
    s.spacing_over_wavelength = r.number(*e);
    lines.lines["array.spacing"] = e->line;
  }
}

struct ModelExtras {
  double angular_frequency = 0.0;
  double sample_period = 1.0;
  cplx ambient{kFreeSpaceImpedance, 0.0};
  std::optional<int> clutter_resolution;
};

void read_model(const SectionReader& r, Scenario& s, ModelExtras& extras, LineMap& lines) {
  auto note = [&](const Entry* e, const char* key) { lines.lines[std::string("model.") + key] = e->line; };
  if (const Entry* e = r.find("horizon")) {
    s.horizons = r.integers(*e);
    note(e, "horizon");
  }
  if (const Entry* e = r.find("power_budget")) {
    s.power_budget = r.number(*e);
    note(e, "power_budget");
  }
  if (const Entry* e = r.find("clutter_bound")) {
    s.clutter_bound = r.number(*e);
    note(e, "clutter_bound");
  }
  if (const Entry* e = r.find("clutter_sum_bound")) {
    s.clutter_sum_bounds = r.numbers(*e);
    note(e, "clutter_sum_bound");
  }
  if (const Entry* e = r.find("weights")) {
    s.weights = r.numbers(*e);
    note(e, "weights");
  }
  if (const Entry* e = r.find("weight_count")) {
    s.weight_count = static_cast<int>(r.integer(*e, e->value));
    note(e, "weight_count");
  }
  if (const Entry* e = r.find("grid_resolution")) {
    s.grid_resolution = static_cast<int>(r.integer(*e, e->value));
    note(e, "grid_resolution");
  }
  if (const Entry* e = r.find("clutter_grid_resolution")) {
    extras.clutter_resolution = static_cast<int>(r.integer(*e, e->value));
    note(e, "clutter_grid_resolution");
  }
  if (const Entry* e = r.find("db_reference")) {
    s.db_reference = r.number(*e);
    note(e, "db_reference");
  }
  if (const Entry* e = r.find("normalize_to_surface")) s.normalize_to_surface = r.boolean(*e);
  if (const Entry* e = r.find("angular_frequency")) {
    extras.angular_frequency = r.number(*e);
    note(e, "angular_frequency");
  }
  if (const Entry* e = r.find("sample_period")) {
    extras.sample_period = r.number(*e);
    note(e, "sample_period");
  }
  if (const Entry* e = r.find("ambient_impedance")) {
    const auto parts = r.numbers(*e);
    if (parts.size() > 2) r.fail(*e, "expected a number or [re, im]");
    extras.ambient = cplx(parts[0], parts.size() == 2 ? parts[1] : 0.0);
    note(e, "ambient_impedance");
  }
}

double read_depth(const SectionReader& r, const Entry& e) {
  if (e.value.kind == Value::Kind::kString) {
    if (e.value.text == "inf") return std::numeric_limits<double>::infinity();
    r.fail(e, "expected a number or \"inf\"");
  }
  return r.number(e);
}

Observer read_observer(const SectionReader& r, const Section& sec, bool default_stack) {
  Observer obs;
  obs.line = sec.line;
  const Entry* angle = r.find("angle");
  const Entry* intervals = r.find("intervals");
  if (angle != nullptr) {
    const double a = r.number(*angle);
    obs.intervals.push_back({a, a});
  } else {
    if (intervals->value.kind != Value::Kind::kArray || intervals->value.items.empty())
      r.fail(*intervals, "expected [[low, high], ...]");
    for (const auto& item : intervals->value.items) {
      if (item.kind != Value::Kind::kArray || item.items.size() != 2)
        r.fail(*intervals, "each interval must be [low, high]");
      obs.intervals.push_back({r.number(*intervals, item.items[0]), r.number(*intervals, item.items[1])});
    }
  }
  if (const Entry* e = r.find("stack"))
    obs.stack = r.text(*e);
  else if (default_stack)
    obs.stack = kDefaultStack;
  return obs;
}

void check_angle(const std::string& source, int line, const std::string& field, double a) {
  if (!std::isfinite(a) || a < -90.0 || a > 90.0)
    reject(source, line, field, fmt::format("angle {} outside [-90, 90] degrees", a));
}

void validate_with(const Scenario& s, const LineMap& lines) {
  const std::string& src = s.source;
  auto field_fail = [&](const std::string& field, const std::string& what) {
    reject(src, lines.at(field), field, what);
  };

  if (s.antennas.empty()) field_fail("array.antennas", "expected at least one value");
  for (int m : s.antennas)
    if (m < 1) field_fail("array.antennas", fmt::format("must be >= 1, got {}", m));
  if (!(s.spacing_over_wavelength > 0.0) || !std::isfinite(s.spacing_over_wavelength))
    field_fail("array.spacing", "must be positive");
  if (s.horizons.empty()) field_fail("model.horizon", "expected at least one value");
  for (int n : s.horizons)
    if (n < 1) field_fail("model.horizon", fmt::format("must be >= 1, got {}", n));

  if (!(s.power_budget > 0.0) || !std::isfinite(s.power_budget))
    field_fail("model.power_budget", "P_max must be positive");
  if (s.clutter_bound && !(*s.clutter_bound > 0.0))
    field_fail("model.clutter_bound", "xi must be positive");
  for (double psi : s.clutter_sum_bounds)
    if (!(psi > 0.0) || !std::isfinite(psi))
      field_fail("model.clutter_sum_bound", fmt::format("psi must be positive, got {}", psi));
  if (s.weight_count < 1) field_fail("model.weight_count", "must be >= 1");
  if (s.grid_resolution < 2) field_fail("model.grid_resolution", "R must be >= 2");
  if (s.clutter_grid_resolution < 2) field_fail("model.clutter_grid_resolution", "R' must be >= 2");
  if (!(s.db_reference > 0.0) || !std::isfinite(s.db_reference))
    field_fail("model.db_reference", "must be positive");

  if (s.tolerances.gap <= 0.0) field_fail("solver.gap_tolerance", "must be positive");
  if (s.tolerances.feasibility <= 0.0) field_fail("solver.feasibility_tolerance", "must be positive");
  if (s.tolerances.max_iterations < 1) field_fail("solver.max_iterations", "must be >= 1");
  if (s.simulation.trials < 1) field_fail("simulation.trials", "must be >= 1");

  for (const auto& [name, stack] : s.stacks) {
    const std::string f = "layers[" + name + "]";
    if (stack.layers.empty()) field_fail(f, "stack has no layers");
    try {
      validate(stack);
    } catch (const Error& e) {
      field_fail(f, e.what());
    }
  }

  if (s.targets.empty()) reject(src, 0, "targets", "at least one [[targets]] entry is required");
  std::size_t max_layers = 0;
  auto check_observers = [&](const std::vector<Observer>& list, const char* kind) {
    for (std::size_t i = 0; i < list.size(); ++i) {
      const Observer& o = list[i];
      const std::string f = fmt::format("{}[{}]", kind, i);
      if (o.intervals.empty()) reject(src, o.line, f, "no angle given");
      for (const auto& iv : o.intervals) {
        check_angle(src, o.line, f, iv.low);
        check_angle(src, o.line, f, iv.high);
        if (iv.low > iv.high) reject(src, o.line, f, "interval low exceeds high");
      }
      if (o.stack) {
        auto it = s.stacks.find(*o.stack);
        if (it == s.stacks.end())
          reject(src, o.line, f, fmt::format("unknown material stack \"{}\"", *o.stack));
        max_layers = std::max(max_layers, it->second.layers.size());
      }
    }
  };
  check_observers(s.targets, "targets");
  check_observers(s.clutters, "clutters");

  for (int n : s.horizons)
    if (static_cast<std::size_t>(n) < max_layers)
      field_fail("model.horizon",
                 fmt::format("N = {} is smaller than the number of layers L = {}", n, max_layers));

  if (!s.weights.empty()) {
    if (s.weights.size() != s.targets.size())
      field_fail("model.weights", fmt::format("expected {} weights (one per target), got {}",
                                             s.targets.size(), s.weights.size()));
    double sum = 0.0;
    for (double g : s.weights) {
      if (!(g > 0.0) || g > 1.0)
        field_fail("model.weights", fmt::format("gamma = {} is outside (0, 1]", g));
      sum += g;
    }
    if (std::abs(sum - 1.0) > 1e-9)
      field_fail("model.weights", fmt::format("weights sum to {}, expected 1", sum));
  }
}

std::string num(double x) {
  if (std::isinf(x)) return x > 0 ? "\"inf\"" : "\"-inf\"";
  return fmt::format("{}", x);
}

template <typename T>
std::string list(const std::vector<T>& xs) {
  std::string out = "[";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ", ";
    if constexpr (std::is_floating_point_v<T>)
      out += num(xs[i]);
    else
      out += fmt::format("{}", xs[i]);
  }
  return out + "]";
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out + "\"";
}

const char* symbols_name(SymbolDistribution d) {
  return d == SymbolDistribution::kQpsk ? "qpsk" : "complex_gaussian";
}

QuadraticForm observer_form(const Scenario& s, const ArrayGeometry& geom, int horizon,
                            const std::optional<std::string>& stack, double angle,
                            std::map<std::string, MultilayerResponse>& cache) {
  if (!stack) return incident_form(geom, horizon, angle);
  auto it = cache.find(*stack);
  if (it == cache.end()) it = cache.emplace(*stack, stack_response(s, *stack)).first;
  return target_form(geom, it->second, horizon, angle);
}

std::vector<QuadraticForm> forms(const Scenario& s, const std::vector<Observer>& list,
                                 int resolution, int antennas, int horizon) {
  const ArrayGeometry geom{antennas, s.spacing_over_wavelength};
  std::map<std::string, MultilayerResponse> cache;
  std::vector<QuadraticForm> out;
  for (const auto& o : list) {
    const UncertaintyGrid grid = make_grid(o.intervals, resolution);
    for (double a : grid.points) out.push_back(observer_form(s, geom, horizon, o.stack, a, cache));
  }
  return out;
}

}  // namespace

bool operator==(const Scenario& a, const Scenario& b) {
  const auto tol = [](const SdpTolerances& t) {
    return std::tie(t.gap, t.feasibility, t.max_iterations);
  };
  const auto sim = [](const SimulationConfig& c) {
    return std::tie(c.trials, c.seed, c.symbols, c.threads);
  };
  return a.antennas == b.antennas && a.spacing_over_wavelength == b.spacing_over_wavelength &&
         a.horizons == b.horizons && a.stacks == b.stacks &&
         a.normalize_to_surface == b.normalize_to_surface && a.targets == b.targets &&
         a.clutters == b.clutters && a.power_budget == b.power_budget &&
         a.clutter_bound == b.clutter_bound && a.clutter_sum_bounds == b.clutter_sum_bounds &&
         a.weights == b.weights && a.weight_count == b.weight_count &&
         a.grid_resolution == b.grid_resolution &&
         a.clutter_grid_resolution == b.clutter_grid_resolution &&
         a.db_reference == b.db_reference && tol(a.tolerances) == tol(b.tolerances) &&
         a.solver_threads == b.solver_threads && sim(a.simulation) == sim(b.simulation);
}

Scenario parse_scenario(const std::string& text, const std::string& source) {
  const config::Document doc = config::parse(text, source);
  Scenario s;
  s.source = source;
  LineMap lines;
  ModelExtras extras;
  std::set<std::string> seen;

  struct PendingLayer {
    std::string stack;
    Layer layer;
  };
  std::vector<PendingLayer> layers;

  for (const Section& sec : doc.sections) {
    const bool once = sec.name == "array" || sec.name == "model" || sec.name == "solver" ||
                      sec.name == "simulation";
    const bool many = sec.name == "layers" || sec.name == "targets" || sec.name == "clutters";
    if (sec.name.empty()) {
      if (!sec.entries.empty())
        reject(source, sec.entries.front().line, sec.entries.front().key,
               "keys must appear inside a section");
      continue;
    }
    if (!once && !many) reject(source, sec.line, sec.name, "unknown section");
    if (once && sec.is_array) reject(source, sec.line, sec.name, "use [" + sec.name + "], not [[...]]");
    if (many && !sec.is_array)
      reject(source, sec.line, sec.name, "use [[" + sec.name + "]] for each entry");
    if (once && !seen.insert(sec.name).second) reject(source, sec.line, sec.name, "section repeated");

    if (sec.name == "array") {
      read_array(SectionReader(source, sec, "array.", {"antennas", "spacing"}), s, lines);
    } else if (sec.name == "model") {
      read_model(SectionReader(source, sec, "model.",
                               {"horizon", "power_budget", "clutter_bound", "clutter_sum_bound",
                                "weights", "weight_count", "grid_resolution",
                                "clutter_grid_resolution", "db_reference", "normalize_to_surface",
                                "angular_frequency", "sample_period", "ambient_impedance"}),
                 s, extras, lines);
    } else if (sec.name == "layers") {
      const SectionReader r(source, sec, "layers.",
                            {"stack", "mu", "epsilon", "sigma", "beta", "depth"});
      PendingLayer p;
      p.stack = kDefaultStack;
      if (const Entry* e = r.find("stack")) p.stack = r.text(*e);
      double* slots[] = {&p.layer.mu, &p.layer.epsilon, &p.layer.sigma, &p.layer.beta};
      const char* names[] = {"mu", "epsilon", "sigma", "beta"};
      for (int i = 0; i < 4; ++i) {
        const Entry* e = r.find(names[i]);
        if (!e) r.missing(names[i]);
        *slots[i] = r.number(*e);
      }
      const Entry* d = r.find("depth");
      if (!d) r.missing("depth");
      p.layer.depth = read_depth(r, *d);
      try {
        validate(p.layer);
      } catch (const Error& e) {
        reject(source, sec.line, "layers", e.what());
      }
      if (!lines.lines.count("layers[" + p.stack + "]")) lines.lines["layers[" + p.stack + "]"] = sec.line;
      layers.push_back(std::move(p));
    } else if (sec.name == "targets" || sec.name == "clutters") {
      const bool target = sec.name == "targets";
      const SectionReader r(source, sec, sec.name + ".", {"angle", "intervals", "stack"});
      if ((r.find("angle") != nullptr) == (r.find("intervals") != nullptr))
        reject(source, sec.line, sec.name, "give exactly one of angle or intervals");
      (target ? s.targets : s.clutters).push_back(read_observer(r, sec, target));
    } else if (sec.name == "solver") {
      const SectionReader r(source, sec, "solver.",
                            {"gap_tolerance", "feasibility_tolerance", "max_iterations", "threads"});
      if (const Entry* e = r.find("gap_tolerance")) {
        s.tolerances.gap = r.number(*e);
        lines.lines["solver.gap_tolerance"] = e->line;
      }
      if (const Entry* e = r.find("feasibility_tolerance")) {
        s.tolerances.feasibility = r.number(*e);
        lines.lines["solver.feasibility_tolerance"] = e->line;
      }
      if (const Entry* e = r.find("max_iterations")) {
        s.tolerances.max_iterations = static_cast<int>(r.integer(*e, e->value));
        lines.lines["solver.max_iterations"] = e->line;
      }
      if (const Entry* e = r.find("threads")) {
        const long long t = r.integer(*e, e->value);
        if (t < 1 || t > 1024) r.fail(*e, "must be between 1 and 1024");
        s.solver_threads = static_cast<unsigned>(t);
      }
    } else if (sec.name == "simulation") {
      const SectionReader r(source, sec, "simulation.", {"trials", "seed", "symbols", "threads"});
      if (const Entry* e = r.find("trials")) {
        const long long t = r.integer(*e, e->value);
        if (t < 1) r.fail(*e, "must be >= 1");
        s.simulation.trials = static_cast<std::uint64_t>(t);
        lines.lines["simulation.trials"] = e->line;
      }
      if (const Entry* e = r.find("seed")) {
        const long long v = r.integer(*e, e->value);
        if (v < 0) r.fail(*e, "must be non-negative");
        s.simulation.seed = static_cast<std::uint64_t>(v);
      }
      if (const Entry* e = r.find("symbols")) {
        const std::string name = r.text(*e);
        if (name == "complex_gaussian")
          s.simulation.symbols = SymbolDistribution::kComplexGaussian;
        else if (name == "qpsk")
          s.simulation.symbols = SymbolDistribution::kQpsk;
        else
          r.fail(*e, "expected \"complex_gaussian\" or \"qpsk\"");
      }
      if (const Entry* e = r.find("threads")) {
        const long long t = r.integer(*e, e->value);
        if (t < 1 || t > 1024) r.fail(*e, "must be between 1 and 1024");
        s.simulation.threads = static_cast<unsigned>(t);
      }
    }
  }

  for (auto& p : layers) {
    MaterialStack& stack = s.stacks[p.stack];
    stack.layers.push_back(p.layer);
  }
  for (auto& [name, stack] : s.stacks) {
    stack.angular_frequency = extras.angular_frequency;
    stack.sample_period = extras.sample_period;
    stack.ambient_impedance = extras.ambient;
  }
  s.clutter_grid_resolution = extras.clutter_resolution.value_or(s.grid_resolution);

  validate_with(s, lines);
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open scenario file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::kIo, "failed reading scenario file '" + path + "'");
  return parse_scenario(buf.str(), path);
}

void validate(const Scenario& scenario) { validate_with(scenario, LineMap{}); }

std::string to_toml(const Scenario& s) {
  std::string out;
  auto line = [&](const std::string& text) {
    out += text;
    out += '\n';
  };
  line("[array]");
  line("antennas = " + list(s.antennas));
  line("spacing = " + num(s.spacing_over_wavelength));
  line("");
  line("[model]");
  line("horizon = " + list(s.horizons));
  line("power_budget = " + num(s.power_budget));
  if (s.clutter_bound) line("clutter_bound = " + num(*s.clutter_bound));
  if (!s.clutter_sum_bounds.empty()) line("clutter_sum_bound = " + list(s.clutter_sum_bounds));
  if (!s.weights.empty()) line("weights = " + list(s.weights));
  line(fmt::format("weight_count = {}", s.weight_count));
  line(fmt::format("grid_resolution = {}", s.grid_resolution));
  line(fmt::format("clutter_grid_resolution = {}", s.clutter_grid_resolution));
  line("db_reference = " + num(s.db_reference));
  line(std::string("normalize_to_surface = ") + (s.normalize_to_surface ? "true" : "false"));
  if (!s.stacks.empty()) {
    // Medium parameters are shared by every stack in a file.
    const MaterialStack& first = s.stacks.begin()->second;
    line("angular_frequency = " + num(first.angular_frequency));
    line("sample_period = " + num(first.sample_period));
    line("ambient_impedance = [" + num(first.ambient_impedance.real()) + ", " +
         num(first.ambient_impedance.imag()) + "]");
  }
  for (const auto& [name, stack] : s.stacks) {
    for (const Layer& l : stack.layers) {
      line("");
      line("[[layers]]");
      line("stack = " + quote(name));
      line("mu = " + num(l.mu));
      line("epsilon = " + num(l.epsilon));
      line("sigma = " + num(l.sigma));
      line("beta = " + num(l.beta));
      line("depth = " + num(l.depth));
    }
  }
  auto observers = [&](const std::vector<Observer>& list_, const char* header) {
    for (const Observer& o : list_) {
      line("");
      line(header);
      if (o.is_point()) {
        line("angle = " + num(o.intervals[0].low));
      } else {
        std::string iv = "intervals = [";
        for (std::size_t i = 0; i < o.intervals.size(); ++i) {
          if (i) iv += ", ";
          iv += "[" + num(o.intervals[i].low) + ", " + num(o.intervals[i].high) + "]";
        }
        line(iv + "]");
      }
      if (o.stack) line("stack = " + quote(*o.stack));
    }
  };
  observers(s.targets, "[[targets]]");
  observers(s.clutters, "[[clutters]]");
  line("");
  line("[solver]");
  line("gap_tolerance = " + num(s.tolerances.gap));
  line("feasibility_tolerance = " + num(s.tolerances.feasibility));
  line(fmt::format("max_iterations = {}", s.tolerances.max_iterations));
  line(fmt::format("threads = {}", s.solver_threads));
  line("");
  line("[simulation]");
  line(fmt::format("trials = {}", s.simulation.trials));
  line(fmt::format("seed = {}", s.simulation.seed));
  line(fmt::format("symbols = \"{}\"", symbols_name(s.simulation.symbols)));
  line(fmt::format("threads = {}", s.simulation.threads));
  return out;
}

MultilayerResponse stack_response(const Scenario& scenario, const std::string& name) {
  auto it = scenario.stacks.find(name);
  if (it == scenario.stacks.end())
    throw Error(ErrorCode::kInvalidArgument, "unknown material stack \"" + name + "\"");
  MultilayerResponse r = transfer_coefficients(it->second);
  return scenario.normalize_to_surface ? normalize_to_surface(r) : r;
}

std::vector<QuadraticForm> target_forms(const Scenario& scenario, int antennas, int horizon) {
  return forms(scenario, scenario.targets, scenario.grid_resolution, antennas, horizon);
}

std::vector<QuadraticForm> clutter_forms(const Scenario& scenario, int antennas, int horizon) {
  return forms(scenario, scenario.clutters, scenario.clutter_grid_resolution, antennas, horizon);
}

}  // namespace mlwave
