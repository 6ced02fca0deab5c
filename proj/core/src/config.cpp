#include "ratchet/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include "ratchet/analysis.hpp"
#include "ratchet/errors.hpp"

namespace ratchet {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

// Splits on `sep` at parenthesis depth 0.
std::vector<std::string> split_top(const std::string& s, char sep) {
  std::vector<std::string> parts;
  int depth = 0;
  std::string cur;
  for (char c : s) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == sep && depth == 0) {
      parts.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(trim(cur));
  return parts;
}

[[noreturn]] void invalid(const std::string& key, const std::string& msg) {
  fail(ErrorKind::ConfigInvalid, key + ": " + msg);
}

double to_double(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
    invalid(key, "expected a number, got '" + text + "'");
  return v;
}

std::int64_t to_int(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
    invalid(key, "expected an integer, got '" + text + "'");
  return v;
}

std::size_t to_size(const std::string& key, const std::string& text) {
  const auto v = to_int(key, text);
  if (v < 0) invalid(key, "must be >= 0");
  return static_cast<std::size_t>(v);
}

bool to_bool(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
  if (t == "false" || t == "0" || t == "no" || t == "off") return false;
  invalid(key, "expected true or false, got '" + text + "'");
}

std::vector<double> to_doubles(const std::string& key, const std::string& text) {
  std::vector<double> out;
  if (trim(text).empty()) return out;
  for (const auto& p : split_top(text, ',')) out.push_back(to_double(key, p));
  return out;
}

// name(arg, arg, ...) -> name, args
std::pair<std::string, std::vector<double>> call(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  const auto open = t.find('(');
  if (open == std::string::npos) return {t, {}};
  if (t.back() != ')') invalid(key, "unbalanced parentheses in '" + text + "'");
  return {trim(t.substr(0, open)), to_doubles(key, t.substr(open + 1, t.size() - open - 2))};
}

std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + format_double(v[i]);
  return s;
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Shape parse_shape(const std::string& text) {
  const auto [name, args] = call("shape", text);
  auto need = [&](std::size_t n) {
    if (args.size() != n)
      invalid("shape", name + " takes " + std::to_string(n) + " arguments");
  };
  try {
    if (name == "constant") {
      need(1);
      return Shape::constant(args[0]);
    }
    if (name == "indicator") {
      need(3);
      return Shape::indicator(args[0], args[1], args[2]);
    }
    if (name == "gaussian") {
      need(3);
      return Shape::gaussian(args[0], args[1], args[2]);
    }
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::ConfigInvalid) throw;
    invalid("shape", e.what());
  }
  invalid("shape", "unknown shape '" + name + "'");
}

ClassProfile parse_class_profile(const std::string& text) {
  ClassProfile p;
  const std::string t = trim(text);
  if (t.empty() || t == "zero") return p;
  for (const auto& term : split_top(t, '+')) p.terms.push_back(parse_shape(term));
  return p;
}

std::string emit_class_profile(const ClassProfile& p) {
  if (p.terms.empty()) return "zero";
  std::string s;
  for (std::size_t i = 0; i < p.terms.size(); ++i) {
    const Shape& t = p.terms[i];
    if (i) s += " + ";
    switch (t.kind) {
      case Shape::Kind::Constant: s += "constant(" + format_double(t.c) + ")"; break;
      case Shape::Kind::Indicator: s += "indicator(" + join({t.a, t.b, t.c}) + ")"; break;
      case Shape::Kind::Gaussian: s += "gaussian(" + join({t.a, t.b, t.c}) + ")"; break;
    }
  }
  return s;
}

FitnessSequence parse_fitness(const std::string& text) {
  const auto [name, args] = call("model.fitness", text);
  try {
    if (name == "geometric" && args.size() == 1) return FitnessSequence::geometric(args[0]);
    if (name == "harmonic" && args.empty()) return FitnessSequence::harmonic();
    if (name == "table" && !args.empty()) return FitnessSequence::table(args);
  } catch (const Error& e) {
    invalid("model.fitness", e.what());
  }
  invalid("model.fitness", "expected geometric(s), harmonic or table(v0, v1, ...), got '" + text + "'");
}

std::string emit_fitness(const FitnessSequence& f) {
  switch (f.kind()) {
    case FitnessSequence::Kind::Geometric: return "geometric(" + format_double(f.selection()) + ")";
    case FitnessSequence::Kind::Harmonic: return "harmonic";
    case FitnessSequence::Kind::Table: return "table(" + join(f.values()) + ")";
  }
  return {};
}

std::vector<double> RunSpec::snapshot_times() const {
  std::vector<double> t{0.0};
  if (T <= 0.0) return t;
  if (snapshot_every <= 0.0) {
    t.push_back(T);
    return t;
  }
  for (std::size_t j = 1;; ++j) {
    const double v = snapshot_every * static_cast<double>(j);
    if (v >= T - 1e-9 * std::max(1.0, T)) break;
    t.push_back(v);
  }
  t.push_back(T);
  return t;
}

SolverConfig RunSpec::solver() const {
  SolverConfig c;
  c.scheme = scheme;
  c.dt = dt;
  c.safety = safety;
  c.clamp_negatives = clamp_negatives;
  c.snapshot_times = snapshot_times();
  return c;
}

InitialProfile RunConfig::initial_profile() const {
  if (profile.kind == ProfileSpec::Kind::Explicit) return InitialProfile(profile.classes);
  return InitialProfile::scaled_by_alpha(profile.shape, profile.total_mass,
                                         alpha_sequence(model, model.class_cap));
}

std::optional<InitialProfile> RunConfig::tracer_profile() const {
  switch (tracer.mode) {
    case TracerSpec::Mode::None: return std::nullopt;
    case TracerSpec::Mode::Full: return initial_profile();
    case TracerSpec::Mode::ClassesFrom: return initial_profile().classes_from(tracer.from_class);
  }
  return std::nullopt;
}

bool RunConfig::stochastic() const {
  return experiment == "simulate-ips" || experiment == "converge" || experiment == "oracle-check";
}

void RunConfig::validate() const {
  if (std::find(kExperiments.begin(), kExperiments.end(), experiment) == kExperiments.end())
    invalid("experiment", "unknown experiment '" + experiment + "'");
  try {
    model.validate();
  } catch (const Error& e) {
    invalid("model", e.what());
  }
  if (!(grid.dx > 0.0) || !(grid.x_max > grid.x_min)) invalid("grid", "need dx > 0 and x_max > x_min");
  if ((grid.x_max - grid.x_min) / grid.dx < 2.0) invalid("grid", "need at least 3 nodes");
  if (!(run.T >= 0.0)) invalid("solver.T", "must be >= 0");
  if (run.dt < 0.0) invalid("solver.dt", "must be >= 0 (0 selects automatically)");
  if (!(run.safety > 0.0 && run.safety <= 1.0)) invalid("solver.safety", "must lie in (0, 1]");
  if (ips.half_width < 1) invalid("ips.half_width", "must be >= 1");
  if (ips.boundary_guard < 0) invalid("ips.boundary_guard", "must be >= 0");
  if (ips.n_reps < 1) invalid("ips.n_reps", "must be >= 1");
  for (auto N : ips.N_values)
    if (N < 1) invalid("ips.N_values", "entries must be >= 1");
  if (stochastic() && !ips.seed) invalid("ips.seed", "required for experiment " + experiment);
  if (profile.kind == ProfileSpec::Kind::AlphaScaled && !(profile.total_mass >= 0.0))
    invalid("profile.total_mass", "must be >= 0");
  if (!(analysis.front_level > 0.0)) invalid("analysis.front_level", "must be positive");
  if (analysis.bounds_points < 2) invalid("analysis.bounds_points", "must be >= 2");
  if (!(analysis.ratio_floor > 0.0)) invalid("analysis.ratio_floor", "must be positive");
  if (experiment == "tracer" && tracer.mode == TracerSpec::Mode::None)
    invalid("tracer.mode", "tracer experiment needs mode full or classes_from");
  try {
    (void)initial_profile();
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::ConfigInvalid) throw;
    invalid("profile", e.what());
  }
}

ConfigMap parse_document(const std::string& text) {
  ConfigMap map;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    if (t.front() == '[') {
      if (t.back() != ']') invalid("line " + std::to_string(lineno), "malformed section header");
      section = trim(t.substr(1, t.size() - 2));
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos) invalid("line " + std::to_string(lineno), "expected key = value");
    const std::string key = trim(t.substr(0, eq));
    const std::string full = section.empty() ? key : section + "." + key;
    if (map.count(full)) invalid(full, "duplicate key");
    map[full] = trim(t.substr(eq + 1));
  }
  return map;
}

void apply_overrides(ConfigMap& map, const std::vector<std::string>& overrides) {
  for (const auto& o : overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos) invalid(o, "override must be key=value");
    map[trim(o.substr(0, eq))] = trim(o.substr(eq + 1));
  }
}

RunConfig from_map(const ConfigMap& map) {
  RunConfig c;
  std::set<std::string> used;
  auto get = [&](const std::string& key) -> const std::string* {
    const auto it = map.find(key);
    if (it == map.end()) return nullptr;
    used.insert(key);
    return &it->second;
  };
  auto num = [&](const std::string& key, double& out) {
    if (auto v = get(key)) out = to_double(key, *v);
  };
  auto size = [&](const std::string& key, std::size_t& out) {
    if (auto v = get(key)) out = to_size(key, *v);
  };
  auto integer = [&](const std::string& key, std::int64_t& out) {
    if (auto v = get(key)) out = to_int(key, *v);
  };

  if (auto v = get("experiment")) c.experiment = *v;

  num("model.m", c.model.m);
  num("model.mu", c.model.mu);
  if (auto v = get("model.fitness")) c.model.fitness = parse_fitness(*v);
  if (auto v = get("model.q_plus")) c.model.rates.q_plus = Polynomial(to_doubles("model.q_plus", *v));
  if (auto v = get("model.q_minus")) c.model.rates.q_minus = Polynomial(to_doubles("model.q_minus", *v));
  integer("model.N", c.model.scaling.N);
  num("model.L_ratio", c.model.scaling.L_ratio);
  size("model.class_cap", c.model.class_cap);

  if (auto v = get("profile.kind")) {
    if (*v == "alpha_scaled") c.profile.kind = ProfileSpec::Kind::AlphaScaled;
    else if (*v == "explicit") c.profile.kind = ProfileSpec::Kind::Explicit;
    else invalid("profile.kind", "expected alpha_scaled or explicit");
  }
  if (auto v = get("profile.shape")) c.profile.shape = parse_class_profile(*v);
  num("profile.total_mass", c.profile.total_mass);
  for (const auto& [key, value] : map) {
    if (key.rfind("profile.class.", 0) != 0) continue;
    const std::size_t k = to_size(key, key.substr(14));
    used.insert(key);
    if (c.profile.classes.size() <= k) c.profile.classes.resize(k + 1);
    c.profile.classes[k] = parse_class_profile(value);
  }

  if (auto v = get("tracer.mode")) {
    if (*v == "none") c.tracer.mode = TracerSpec::Mode::None;
    else if (*v == "full") c.tracer.mode = TracerSpec::Mode::Full;
    else if (*v == "classes_from") c.tracer.mode = TracerSpec::Mode::ClassesFrom;
    else invalid("tracer.mode", "expected none, full or classes_from");
  }
  size("tracer.from_class", c.tracer.from_class);

  num("grid.x_min", c.grid.x_min);
  num("grid.x_max", c.grid.x_max);
  num("grid.dx", c.grid.dx);

  if (auto v = get("solver.scheme")) {
    if (*v == "rk4") c.run.scheme = Scheme::RK4;
    else if (*v == "euler") c.run.scheme = Scheme::Euler;
    else invalid("solver.scheme", "expected rk4 or euler");
  }
  num("solver.dt", c.run.dt);
  num("solver.safety", c.run.safety);
  if (auto v = get("solver.clamp_negatives")) c.run.clamp_negatives = to_bool("solver.clamp_negatives", *v);
  num("solver.T", c.run.T);
  num("solver.snapshot_every", c.run.snapshot_every);

  integer("ips.half_width", c.ips.half_width);
  size("ips.class_cap", c.ips.class_cap);
  integer("ips.boundary_guard", c.ips.boundary_guard);
  size("ips.n_reps", c.ips.n_reps);
  if (auto v = get("ips.seed")) c.ips.seed = static_cast<std::uint64_t>(to_size("ips.seed", *v));
  if (auto v = get("ips.N_values")) {
    c.ips.N_values.clear();
    if (!trim(*v).empty())
      for (const auto& p : split_top(*v, ',')) c.ips.N_values.push_back(to_int("ips.N_values", p));
  }

  num("analysis.front_level", c.analysis.front_level);
  if (auto v = get("analysis.fit_t_min")) c.analysis.fit_t_min = to_double("analysis.fit_t_min", *v);
  if (auto v = get("analysis.fit_t_max")) c.analysis.fit_t_max = to_double("analysis.fit_t_max", *v);
  size("analysis.bounds_points", c.analysis.bounds_points);
  num("analysis.ratio_floor", c.analysis.ratio_floor);
  num("analysis.poisson_mu", c.analysis.poisson_mu);
  num("analysis.poisson_s", c.analysis.poisson_s);
  if (auto v = get("analysis.poisson_n")) c.analysis.poisson_n = to_doubles("analysis.poisson_n", *v);
  size("analysis.poisson_K", c.analysis.poisson_K);

  num("sweep.r", c.sweep.r);
  if (auto v = get("sweep.B_values")) c.sweep.B_values = to_doubles("sweep.B_values", *v);

  if (auto v = get("output.format")) {
    if (*v == "csv") c.output.format = OutputSpec::Format::Csv;
    else if (*v == "json") c.output.format = OutputSpec::Format::Json;
    else invalid("output.format", "expected csv or json");
  }
  size("output.max_class", c.output.max_class);

  for (const auto& [key, value] : map)
    if (!used.count(key)) invalid(key, "unknown key");
  c.validate();
  return c;
}

RunConfig parse_config(const std::string& text, const std::vector<std::string>& overrides) {
  ConfigMap map = parse_document(text);
  apply_overrides(map, overrides);
  return from_map(map);
}

std::string emit_config(const RunConfig& c) {
  std::ostringstream o;
  auto kv = [&o](const std::string& k, const std::string& v) { o << k << " = " << v << "\n"; };
  auto d = [](double v) { return format_double(v); };
  auto u = [](auto v) { return std::to_string(v); };

  kv("experiment", c.experiment);
  o << "\n[model]\n";
  kv("m", d(c.model.m));
  kv("mu", d(c.model.mu));
  kv("fitness", emit_fitness(c.model.fitness));
  kv("q_plus", join(c.model.rates.q_plus.coefficients()));
  kv("q_minus", join(c.model.rates.q_minus.coefficients()));
  kv("N", u(c.model.scaling.N));
  kv("L_ratio", d(c.model.scaling.L_ratio));
  kv("class_cap", u(c.model.class_cap));

  o << "\n[profile]\n";
  kv("kind", c.profile.kind == ProfileSpec::Kind::AlphaScaled ? "alpha_scaled" : "explicit");
  kv("shape", emit_class_profile(c.profile.shape));
  kv("total_mass", d(c.profile.total_mass));
  for (std::size_t k = 0; k < c.profile.classes.size(); ++k)
    kv("class." + u(k), emit_class_profile(c.profile.classes[k]));

  o << "\n[tracer]\n";
  kv("mode", c.tracer.mode == TracerSpec::Mode::None   ? "none"
             : c.tracer.mode == TracerSpec::Mode::Full ? "full"
                                                       : "classes_from");
  kv("from_class", u(c.tracer.from_class));

  o << "\n[grid]\n";
  kv("x_min", d(c.grid.x_min));
  kv("x_max", d(c.grid.x_max));
  kv("dx", d(c.grid.dx));

  o << "\n[solver]\n";
  kv("scheme", c.run.scheme == Scheme::RK4 ? "rk4" : "euler");
  kv("dt", d(c.run.dt));
  kv("safety", d(c.run.safety));
  kv("clamp_negatives", c.run.clamp_negatives ? "true" : "false");
  kv("T", d(c.run.T));
  kv("snapshot_every", d(c.run.snapshot_every));

  o << "\n[ips]\n";
  kv("half_width", u(c.ips.half_width));
  kv("class_cap", u(c.ips.class_cap));
  kv("boundary_guard", u(c.ips.boundary_guard));
  kv("n_reps", u(c.ips.n_reps));
  if (c.ips.seed) kv("seed", u(*c.ips.seed));
  std::string Ns;
  for (std::size_t i = 0; i < c.ips.N_values.size(); ++i) Ns += (i ? ", " : "") + u(c.ips.N_values[i]);
  kv("N_values", Ns);

  o << "\n[analysis]\n";
  kv("front_level", d(c.analysis.front_level));
  if (c.analysis.fit_t_min) kv("fit_t_min", d(*c.analysis.fit_t_min));
  if (c.analysis.fit_t_max) kv("fit_t_max", d(*c.analysis.fit_t_max));
  kv("bounds_points", u(c.analysis.bounds_points));
  kv("ratio_floor", d(c.analysis.ratio_floor));
  kv("poisson_mu", d(c.analysis.poisson_mu));
  kv("poisson_s", d(c.analysis.poisson_s));
  kv("poisson_n", join(c.analysis.poisson_n));
  kv("poisson_K", u(c.analysis.poisson_K));

  o << "\n[sweep]\n";
  kv("r", d(c.sweep.r));
  kv("B_values", join(c.sweep.B_values));

  o << "\n[output]\n";
  kv("format", c.output.format == OutputSpec::Format::Csv ? "csv" : "json");
  kv("max_class", u(c.output.max_class));
  return o.str();
}

}  // namespace ratchet
