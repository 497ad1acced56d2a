// qdecay: tunneling decay runs from configs or flags.
//
// Exit codes: 0 ok, 2 config error, 3 numerical failure, 4 compare tolerance.

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qdecay/config.hpp"
#include "qdecay/error.hpp"
#include "qdecay/format.hpp"
#include "qdecay/runner.hpp"
#include "qdecay/series_io.hpp"
#include "qdecay/zeno.hpp"

#ifndef QDECAY_DEFAULT_RECIPE_DIR
#define QDECAY_DEFAULT_RECIPE_DIR "recipes"
#endif

namespace fs = std::filesystem;
using namespace qdecay;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitTolerance = 4;

// Flags that mirror config keys; empty strings are "not given".
struct RunFlags {
  std::string config;
  std::vector<std::string> overrides;
  std::string name, method, kind, out;
  std::optional<double> a, b, width, v0, alpha, beta, x_in, t_end, dt_obs;
  std::optional<std::size_t> n_bars, energy_points;
  unsigned jobs = 1;

  void attach(CLI::App* app) {
    app->add_option("-c,--config", config, "config file");
    app->add_option("--set", overrides, "override, e.g. --set potential.beta=5.5");
    app->add_option("--name", name, "run name (output subdirectory)");
    app->add_option("--method", method, "analytic | leapfrog | both");
    app->add_option("--kind", kind, "single_barrier | cut_harmonic");
    app->add_option("--a", a, "barrier start");
    app->add_option("--b", b, "barrier end");
    app->add_option("--width", width, "barrier width b - a");
    app->add_option("--v0", v0, "barrier height");
    app->add_option("--alpha", alpha, "oscillator stiffness");
    app->add_option("--beta", beta, "oscillator width parameter");
    app->add_option("--n-bars", n_bars, "bars approximating the oscillator");
    app->add_option("--x-in", x_in, "inner region bound");
    app->add_option("--t-end", t_end, "final time");
    app->add_option("--dt-obs", dt_obs, "observation interval");
    app->add_option("--energy-points", energy_points, "energy grid size");
    app->add_option("-o,--out", out, "output directory");
    app->add_option("-j,--jobs", jobs, "concurrent sweep points")->check(CLI::PositiveNumber);
  }

  RawConfig raw(const std::optional<std::string>& command) const {
    RawConfig r = config.empty() ? RawConfig{} : RawConfig::load(config);
    auto put = [&](const char* key, const auto& v) {
      if constexpr (std::is_same_v<std::decay_t<decltype(v)>, std::string>) {
        if (!v.empty()) r.set(key, v);
      } else if (v) {
        r.set(key, format_double(static_cast<double>(*v)));
      }
    };
    if (command) r.set("command", *command);
    put("name", name);
    put("method", method);
    put("potential.kind", kind);
    put("potential.a", a);
    put("potential.b", b);
    put("potential.width", width);
    put("potential.v0", v0);
    put("potential.alpha", alpha);
    put("potential.beta", beta);
    put("potential.n_bars", n_bars);
    put("observables.x_in", x_in);
    put("time.t_end", t_end);
    put("time.dt_obs", dt_obs);
    put("energy.points", energy_points);
    put("output.dir", out);
    for (const auto& o : overrides) r.set_assignment(o);
    return r;
  }
};

fs::path output_root(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("QDECAY_OUTPUT_ROOT")) return env;
  return {};
}

fs::path recipe_dir(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("QDECAY_RECIPE_DIR")) return env;
  return QDECAY_DEFAULT_RECIPE_DIR;
}

int execute(const RawConfig& raw, const fs::path& root, unsigned jobs) {
  const RunConfig cfg = parse_run_config(raw);
  const RunReport rep = run(cfg, {root, jobs});
  for (const auto& w : rep.warnings) std::cerr << "note: " << w << '\n';
  for (const auto& f : rep.files) std::cout << f.string() << '\n';
  for (const auto& r : rep.rows) {
    std::cerr << (r.point.empty() ? cfg.name : r.point) << ' ' << r.method
              << ": lambda_mean=" << format_short(r.summary.lambda_mean)
              << " amplitude=" << format_short(r.summary.lambda_amplitude)
              << " r2=" << format_short(r.summary.lnp_r2);
    if (r.cross_method_rel_diff) std::cerr << " cross=" << format_short(*r.cross_method_rel_diff);
    std::cerr << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum tunneling decay: survival probability and decay parameter"};
  app.require_subcommand(1);
  std::string root_flag;
  app.add_option("--output-root", root_flag, "root for relative output dirs (env QDECAY_OUTPUT_ROOT)");

  RunFlags st_flags, sp_flags, ev_flags, rc_flags;
  auto* stationary = app.add_subcommand("stationary", "stationary states as CSV");
  st_flags.attach(stationary);
  auto* spectral = app.add_subcommand("spectral", "spectral function scan");
  sp_flags.attach(spectral);
  auto* evolve = app.add_subcommand("evolve", "P_in(t) and lambda(t) by either method");
  ev_flags.attach(evolve);

  auto* cmp = app.add_subcommand("compare", "compare two series CSV files");
  std::string file_a, file_b;
  CompareOptions cmp_opt;
  cmp->add_option("a", file_a, "series file")->required();
  cmp->add_option("b", file_b, "reference series file")->required();
  cmp->add_option("--tol", cmp_opt.tolerance, "tolerance on the chosen metric");
  cmp->add_option("--metric", cmp_opt.metric, "plateau | p_in | lambda")
      ->check(CLI::IsMember({"plateau", "p_in", "lambda"}));
  cmp->add_option("--window-start", cmp_opt.window_start, "window start time");
  cmp->add_option("--window-end", cmp_opt.window_end, "window end time (0: overlap end)");

  auto* zeno = app.add_subcommand("zeno", "Zeno time t_z = hbar / V");
  double height = 0.0;
  std::string unit = "MeV";
  std::optional<double> interval;
  zeno->add_option("--height", height, "barrier height")->required();
  zeno->add_option("--unit", unit, "natural | eV | MeV");
  zeno->add_option("--interval", interval, "measurement interval to compare with");

  auto* recipe = app.add_subcommand("recipe", "run a shipped figure recipe");
  std::string recipe_name, recipes_flag;
  bool list = false;
  recipe->add_option("recipe", recipe_name, "recipe name, e.g. fig3");
  recipe->add_option("--recipes-dir", recipes_flag, "recipe directory (env QDECAY_RECIPE_DIR)");
  recipe->add_flag("--list", list, "list available recipes");
  rc_flags.attach(recipe);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    const fs::path root = output_root(root_flag);
    if (*stationary) return execute(st_flags.raw("stationary"), root, st_flags.jobs);
    if (*spectral) return execute(sp_flags.raw("spectral"), root, sp_flags.jobs);
    if (*evolve) return execute(ev_flags.raw("evolve"), root, ev_flags.jobs);
    if (*cmp) {
      const DecaySeries a = read_series_file(file_a);
      const DecaySeries b = read_series_file(file_b);
      const CompareReport rep = compare(a, b, cmp_opt);
      std::cout << format_report(rep, cmp_opt);
      return rep.pass ? 0 : kExitTolerance;
    }
    if (*zeno) {
      const EnergyUnit u = parse_energy_unit(unit);
      const double tz = zeno_time({height, u});
      const std::string t_unit = u == EnergyUnit::natural ? "" : " s";
      std::cout << "t_z = " << format_short(tz) << t_unit << " (V = " << format_short(height)
                << ' ' << to_string(u) << ")\n";
      if (interval) std::cout << zeno_verdict(tz, *interval) << '\n';
      return 0;
    }
    if (*recipe) {
      const fs::path dir = recipe_dir(recipes_flag);
      if (list) {
        std::vector<std::string> names;
        for (const auto& e : fs::directory_iterator(dir))
          if (e.path().extension() == ".cfg") names.push_back(e.path().stem().string());
        std::sort(names.begin(), names.end());
        for (const auto& n : names) std::cout << n << '\n';
        return 0;
      }
      if (recipe_name.empty()) throw ConfigError("recipe name required (or --list)");
      const fs::path file = dir / (recipe_name + ".cfg");
      if (!fs::exists(file)) throw ConfigError("no recipe '" + recipe_name + "' in " + dir.string());
      rc_flags.config = file.string();
      return execute(rc_flags.raw(std::nullopt), root, rc_flags.jobs);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ValidationError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
  return 0;
}
