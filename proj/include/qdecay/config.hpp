#ifndef QDECAY_CONFIG_HPP
#define QDECAY_CONFIG_HPP

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qdecay/analysis.hpp"
#include "qdecay/evolution.hpp"
#include "qdecay/leapfrog.hpp"
#include "qdecay/potential.hpp"

namespace qdecay {

/// Flat `key = value` text with `[section]` headers and `#` comments.
/// Keys are stored as "section.key" (top-level keys have no prefix).
class RawConfig {
 public:
  struct Entry {
    std::string value;
    int line;  // 0 for overrides
  };

  static RawConfig parse(std::istream& is);
  static RawConfig load(const std::string& path);

  /// Adds or replaces "section.key"; used by command-line overrides.
  void set(const std::string& key, const std::string& value);
  /// Parses "section.key=value".
  void set_assignment(const std::string& assignment);

  const std::map<std::string, Entry>& entries() const { return entries_; }
  bool has(const std::string& key) const { return entries_.count(key) != 0; }

 private:
  std::map<std::string, Entry> entries_;
};

enum class Command { evolve, stationary, spectral };
enum class Method { analytic, leapfrog, both };

struct PotentialBlock {
  std::string kind = "single_barrier";  // or cut_harmonic
  double a = 1.5, b = 2.25, v0 = 3.0;
  double alpha = 0.28, beta = 6.0;
  std::size_t n_bars = 6;

  /// Stack used by the analytic method (bars for the cut oscillator).
  PotentialSpec bars() const;
  /// Potential sampled by leap-frog: smooth oscillator unless `use_bars`.
  AnyPotential sampled(bool use_bars) const;
  /// Height that sets the default energy cutoff.
  double reference_height() const;
  /// a for a single barrier, beta/2 for the cut oscillator.
  double default_x_in() const;
};

struct SweepBlock {
  std::string parameter;
  std::vector<double> values;
};

struct StationaryBlock {
  std::vector<double> energies{1.5, 2.5, 3.0};
  double x_max = 8.0;
  double dx = 0.01;
};

struct SpectralBlock {
  double e_min = 0.0;
  double e_max = 0.0;  // 0: default cutoff
  double de = 1e-3;
};

struct RunConfig {
  std::string name = "run";
  Command command = Command::evolve;
  Method method = Method::analytic;
  PotentialBlock potential;
  AnalyticParams analytic;  // x_in filled from `x_in` or the default
  LeapFrogConfig leapfrog;
  bool leapfrog_bars = false;
  std::optional<double> x_in;
  analysis::WindowSpec window;  // start defaults to 10 (single barrier) or 5 (cut oscillator)
  std::optional<SweepBlock> sweep;
  StationaryBlock stationary;
  SpectralBlock spectral;
  std::string output_dir;  // empty: "out/<name>"

  double effective_x_in() const { return x_in ? *x_in : potential.default_x_in(); }
};

/// Builds and validates a run config. Errors name the line (or key).
RunConfig parse_run_config(const RawConfig& raw);

/// Parameters a sweep may vary.
const std::vector<std::string>& sweep_parameters();

/// Copy of `cfg` with the sweep parameter set to `value` (sweep removed).
RunConfig apply_sweep_value(const RunConfig& cfg, const std::string& parameter, double value);

/// Re-checks every module-level rule (potential, grids, packet, horizon,
/// stability); throws ValidationError.
void validate(const RunConfig& cfg);

std::string to_string(Method m);
std::string to_string(Command c);

}  // namespace qdecay

#endif  // QDECAY_CONFIG_HPP
