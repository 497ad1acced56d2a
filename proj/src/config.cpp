#include "qdecay/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "qdecay/error.hpp"
#include "qdecay/format.hpp"

namespace qdecay {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Every key the loader understands; anything else is a config error.
const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "command", "method", "name",
      "potential.kind", "potential.a", "potential.b", "potential.v0", "potential.width",
      "potential.alpha", "potential.beta", "potential.n_bars",
      "energy.e_min", "energy.e_max", "energy.points",
      "space.dx", "space.x_max",
      "time.t_end", "time.dt_obs",
      "observables.x_in", "observables.window_start", "observables.window_end",
      "observables.window_efolds",
      "leapfrog.dx", "leapfrog.x_max", "leapfrog.dt", "leapfrog.dt_safety", "leapfrog.x0",
      "leapfrog.sigma", "leapfrog.k0", "leapfrog.snapshot_times", "leapfrog.potential",
      "sweep.parameter", "sweep.values",
      "output.dir",
      "stationary.energies", "stationary.x_max", "stationary.dx",
      "spectral.e_min", "spectral.e_max", "spectral.de"};
  return keys;
}

}  // namespace

RawConfig RawConfig::parse(std::istream& is) {
  RawConfig cfg;
  std::string line;
  std::string section;
  int no = 0;
  while (std::getline(is, line)) {
    ++no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("unterminated section header", no);
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty()) throw ConfigError("empty section name", no);
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("expected key = value", no);
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError("missing key before '='", no);
    const std::string full = section.empty() ? key : section + "." + key;
    if (!known_keys().count(full)) throw ConfigError("unknown key '" + full + "'", no);
    if (cfg.entries_.count(full)) throw ConfigError("duplicate key '" + full + "'", no);
    cfg.entries_[full] = {trim(line.substr(eq + 1)), no};
  }
  return cfg;
}

RawConfig RawConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  return parse(in);
}

void RawConfig::set(const std::string& key, const std::string& value) {
  if (!known_keys().count(key)) throw ConfigError("unknown key '" + key + "'");
  entries_[key] = {value, 0};
}

void RawConfig::set_assignment(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ConfigError("override '" + assignment + "' needs key=value");
  set(trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

namespace {

class Reader {
 public:
  explicit Reader(const RawConfig& raw) : raw_(raw) {}

  const RawConfig::Entry* find(const std::string& key) const {
    auto it = raw_.entries().find(key);
    return it == raw_.entries().end() ? nullptr : &it->second;
  }

  [[noreturn]] void fail(const std::string& key, const std::string& what) const {
    const auto* e = find(key);
    throw ConfigError(key + ": " + what, e ? e->line : 0);
  }

  double number(const std::string& key, double fallback) const {
    const auto* e = find(key);
    if (!e) return fallback;
    return parse_number(key, e->value);
  }

  std::optional<double> optional_number(const std::string& key) const {
    const auto* e = find(key);
    if (!e) return std::nullopt;
    return parse_number(key, e->value);
  }

  std::size_t count(const std::string& key, std::size_t fallback) const {
    const auto* e = find(key);
    if (!e) return fallback;
    const double v = parse_number(key, e->value);
    if (v < 0.0 || v != std::floor(v)) fail(key, "expected a non-negative integer");
    return static_cast<std::size_t>(v);
  }

  std::string text(const std::string& key, const std::string& fallback) const {
    const auto* e = find(key);
    return e ? e->value : fallback;
  }

  std::vector<double> list(const std::string& key, std::vector<double> fallback) const {
    const auto* e = find(key);
    if (!e) return fallback;
    std::vector<double> out;
    std::stringstream ss(e->value);
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      if (item.empty()) continue;
      out.push_back(parse_number(key, item));
    }
    return out;
  }

 private:
  double parse_number(const std::string& key, const std::string& text) const {
    try {
      std::size_t used = 0;
      const double v = std::stod(text, &used);
      if (trim(text.substr(used)).empty() && std::isfinite(v)) return v;
    } catch (const std::exception&) {
    }
    fail(key, "'" + text + "' is not a number");
  }

  const RawConfig& raw_;
};

}  // namespace

PotentialSpec PotentialBlock::bars() const {
  if (kind == "single_barrier") {
    if (v0 == 0.0) {
      // Zero-height barrier: the free limit, kept as a flat segment.
      if (!(a > 0.0) || !(b > a)) throw ValidationError("single barrier needs 0 < a < b");
      return PotentialSpec({{0.0, a, 0.0}, {a, b, 0.0}});
    }
    return single_barrier(a, b, v0);
  }
  return discretize_cut_harmonic({alpha, beta}, n_bars);
}

AnyPotential PotentialBlock::sampled(bool use_bars) const {
  if (kind == "cut_harmonic" && !use_bars) {
    CutHarmonicSpec s{alpha, beta};
    s.validate();
    return s;
  }
  return bars();
}

double PotentialBlock::reference_height() const {
  if (kind == "cut_harmonic") return CutHarmonicSpec{alpha, beta}.max_height();
  return v0;
}

double PotentialBlock::default_x_in() const {
  return kind == "cut_harmonic" ? 0.5 * beta : a;
}

const std::vector<std::string>& sweep_parameters() {
  static const std::vector<std::string> names = {
      "width", "a", "b", "v0", "alpha", "beta", "n_bars", "x_in", "energy_points",
      "leapfrog_dx", "x0", "sigma", "k0"};
  return names;
}

std::string to_string(Method m) {
  switch (m) {
    case Method::analytic: return "analytic";
    case Method::leapfrog: return "leapfrog";
    case Method::both: return "both";
  }
  return "?";
}

std::string to_string(Command c) {
  switch (c) {
    case Command::evolve: return "evolve";
    case Command::stationary: return "stationary";
    case Command::spectral: return "spectral";
  }
  return "?";
}

RunConfig apply_sweep_value(const RunConfig& cfg, const std::string& parameter, double value) {
  RunConfig out = cfg;
  out.sweep.reset();
  auto as_count = [&](double v) {
    if (v < 1.0 || v != std::floor(v)) throw ValidationError(parameter + " must be a positive integer");
    return static_cast<std::size_t>(v);
  };
  if (parameter == "width") out.potential.b = out.potential.a + value;
  else if (parameter == "a") out.potential.a = value;
  else if (parameter == "b") out.potential.b = value;
  else if (parameter == "v0") out.potential.v0 = value;
  else if (parameter == "alpha") out.potential.alpha = value;
  else if (parameter == "beta") out.potential.beta = value;
  else if (parameter == "n_bars") out.potential.n_bars = as_count(value);
  else if (parameter == "x_in") out.x_in = value;
  else if (parameter == "energy_points") out.analytic.energy_points = as_count(value);
  else if (parameter == "leapfrog_dx") out.leapfrog.dx = value;
  else if (parameter == "x0") out.leapfrog.packet.x0 = value;
  else if (parameter == "sigma") out.leapfrog.packet.sigma = value;
  else if (parameter == "k0") out.leapfrog.packet.k0 = value;
  else throw ValidationError("unknown sweep parameter '" + parameter + "'");
  out.analytic.x_in = out.effective_x_in();
  out.leapfrog.x_in = out.effective_x_in();
  return out;
}

void validate(const RunConfig& cfg) {
  const PotentialBlock& p = cfg.potential;
  if (p.kind != "single_barrier" && p.kind != "cut_harmonic")
    throw ValidationError("potential.kind must be single_barrier or cut_harmonic");
  if (p.kind == "cut_harmonic" && p.n_bars == 0) throw ValidationError("potential.n_bars must be >= 1");
  const PotentialSpec bars = p.bars();

  switch (cfg.command) {
    case Command::stationary: {
      const auto& s = cfg.stationary;
      if (s.energies.empty()) throw ValidationError("stationary.energies is empty");
      for (double e : s.energies)
        if (!(e >= 0.0)) throw ValidationError("stationary.energies must be >= 0");
      if (!(s.dx > 0.0) || !(s.x_max > s.dx)) throw ValidationError("stationary needs 0 < dx < x_max");
      return;
    }
    case Command::spectral: {
      const auto& s = cfg.spectral;
      const double e_max = s.e_max > 0.0 ? s.e_max : default_energy_cutoff(p.reference_height());
      if (!(s.e_min >= 0.0) || !(e_max > s.e_min)) throw ValidationError("spectral needs 0 <= e_min < e_max");
      if (!(s.de > 0.0)) throw ValidationError("spectral.de must be > 0");
      return;
    }
    case Command::evolve:
      break;
  }

  const double x_in = cfg.effective_x_in();
  if (cfg.method != Method::leapfrog) {
    AnalyticParams a = cfg.analytic;
    a.x_in = x_in;
    validate(a);
    const double e_max = a.e_max > 0.0 ? a.e_max : default_energy_cutoff(p.reference_height());
    const double de = (e_max - a.e_min) / static_cast<double>(a.energy_points - 1);
    const double horizon = std::numbers::pi / de;
    if (a.t_end > horizon)
      throw ValidationError("time.t_end = " + format_double(a.t_end) +
                            " exceeds the validity horizon pi/dE = " + format_double(horizon) +
                            "; raise energy.points");
  }
  if (cfg.method != Method::analytic) {
    LeapFrogConfig lf = cfg.leapfrog;
    lf.x_in = x_in;
    validate(lf, p.sampled(cfg.leapfrog_bars));
  }
  if (cfg.window.start < 0.0 || (cfg.window.end != 0.0 && cfg.window.end <= cfg.window.start))
    throw ValidationError("observables window must satisfy 0 <= window_start < window_end");
  if (cfg.window.efolds < 0.0) throw ValidationError("observables.window_efolds must be >= 0");
}

RunConfig parse_run_config(const RawConfig& raw) {
  Reader r(raw);
  RunConfig cfg;
  cfg.name = r.text("name", cfg.name);
  if (cfg.name.empty() || cfg.name.find_first_of("/\\ ") != std::string::npos)
    r.fail("name", "must be a non-empty word without slashes or spaces");

  const std::string command = r.text("command", "evolve");
  if (command == "evolve") cfg.command = Command::evolve;
  else if (command == "stationary") cfg.command = Command::stationary;
  else if (command == "spectral") cfg.command = Command::spectral;
  else r.fail("command", "expected evolve, stationary or spectral");

  const std::string method = r.text("method", "analytic");
  if (method == "analytic") cfg.method = Method::analytic;
  else if (method == "leapfrog") cfg.method = Method::leapfrog;
  else if (method == "both") cfg.method = Method::both;
  else r.fail("method", "expected analytic, leapfrog or both");

  PotentialBlock& p = cfg.potential;
  p.kind = r.text("potential.kind", p.kind);
  if (p.kind != "single_barrier" && p.kind != "cut_harmonic")
    r.fail("potential.kind", "expected single_barrier or cut_harmonic");
  p.a = r.number("potential.a", p.a);
  p.v0 = r.number("potential.v0", p.v0);
  if (raw.has("potential.width") && raw.has("potential.b"))
    r.fail("potential.width", "give either b or width, not both");
  p.b = raw.has("potential.width") ? p.a + r.number("potential.width", 0.0)
                                   : r.number("potential.b", p.b);
  p.alpha = r.number("potential.alpha", p.alpha);
  p.beta = r.number("potential.beta", p.beta);
  p.n_bars = r.count("potential.n_bars", p.n_bars);

  AnalyticParams& a = cfg.analytic;
  a.e_min = r.number("energy.e_min", a.e_min);
  a.e_max = r.number("energy.e_max", a.e_max);
  a.energy_points = r.count("energy.points", a.energy_points);
  a.dx = r.number("space.dx", a.dx);
  a.x_max = r.number("space.x_max", a.x_max);
  a.t_end = r.number("time.t_end", a.t_end);
  a.dt_obs = r.number("time.dt_obs", a.dt_obs);

  LeapFrogConfig& lf = cfg.leapfrog;
  lf.t_end = a.t_end;
  lf.dt_obs = a.dt_obs;
  lf.dx = r.number("leapfrog.dx", lf.dx);
  lf.x_max = r.number("leapfrog.x_max", lf.x_max);
  lf.dt = r.number("leapfrog.dt", lf.dt);
  lf.dt_safety = r.number("leapfrog.dt_safety", lf.dt_safety);
  lf.packet.x0 = r.number("leapfrog.x0", lf.packet.x0);
  lf.packet.sigma = r.number("leapfrog.sigma", lf.packet.sigma);
  lf.packet.k0 = r.number("leapfrog.k0", lf.packet.k0);
  lf.snapshot_times = r.list("leapfrog.snapshot_times", {});
  const std::string sampled = r.text("leapfrog.potential", "smooth");
  if (sampled != "smooth" && sampled != "bars") r.fail("leapfrog.potential", "expected smooth or bars");
  cfg.leapfrog_bars = sampled == "bars";

  cfg.x_in = r.optional_number("observables.x_in");
  // The single-barrier lambda needs longer to settle after its initial rise.
  cfg.window.start = r.number("observables.window_start", p.kind == "single_barrier" ? 10.0 : 5.0);
  cfg.window.end = r.number("observables.window_end", cfg.window.end);
  cfg.window.efolds = r.number("observables.window_efolds", cfg.window.efolds);

  cfg.stationary.energies = r.list("stationary.energies", cfg.stationary.energies);
  cfg.stationary.x_max = r.number("stationary.x_max", cfg.stationary.x_max);
  cfg.stationary.dx = r.number("stationary.dx", cfg.stationary.dx);
  cfg.spectral.e_min = r.number("spectral.e_min", cfg.spectral.e_min);
  cfg.spectral.e_max = r.number("spectral.e_max", cfg.spectral.e_max);
  cfg.spectral.de = r.number("spectral.de", cfg.spectral.de);

  cfg.output_dir = r.text("output.dir", "");

  if (raw.has("sweep.parameter") || raw.has("sweep.values")) {
    SweepBlock s;
    s.parameter = r.text("sweep.parameter", "");
    const auto& names = sweep_parameters();
    if (std::find(names.begin(), names.end(), s.parameter) == names.end())
      r.fail("sweep.parameter", "unknown sweep parameter '" + s.parameter + "'");
    if (!raw.has("sweep.values")) r.fail("sweep.parameter", "sweep.values is missing");
    s.values = r.list("sweep.values", {});
    if (s.values.empty()) r.fail("sweep.values", "sweep list is empty");
    cfg.sweep = s;
  }

  cfg.analytic.x_in = cfg.effective_x_in();
  cfg.leapfrog.x_in = cfg.effective_x_in();

  // Module rules, re-checked for every sweep point.
  try {
    if (cfg.sweep) {
      for (double v : cfg.sweep->values) validate(apply_sweep_value(cfg, cfg.sweep->parameter, v));
    } else {
      validate(cfg);
    }
  } catch (const ValidationError& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

}  // namespace qdecay
