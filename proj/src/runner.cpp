#include "qdecay/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <sstream>
#include <thread>

#include "qdecay/error.hpp"
#include "qdecay/format.hpp"
#include "qdecay/leapfrog.hpp"
#include "qdecay/series_io.hpp"
#include "qdecay/stationary.hpp"

namespace qdecay {

std::vector<RunPoint> expand_sweep(const RunConfig& cfg) {
  if (!cfg.sweep) return {{"", std::nullopt, cfg}};
  std::vector<RunPoint> points;
  for (double v : cfg.sweep->values)
    points.push_back({cfg.sweep->parameter + "_" + format_short(v), v,
                      apply_sweep_value(cfg, cfg.sweep->parameter, v)});
  return points;
}

std::filesystem::path output_directory(const RunConfig& cfg, const std::filesystem::path& root) {
  std::filesystem::path dir = cfg.output_dir.empty() ? std::filesystem::path("out") / cfg.name
                                                     : std::filesystem::path(cfg.output_dir);
  if (dir.is_relative() && !root.empty()) dir = root / dir;
  return dir;
}

namespace {

struct PointOutput {
  std::vector<std::filesystem::path> files;
  std::vector<SummaryRow> rows;
  std::vector<std::string> warnings;
};

std::string suffixed(const std::string& stem, const std::string& label, const char* ext) {
  return stem + (label.empty() ? "" : "_" + label) + ext;
}

void emit(PointOutput& out, const std::filesystem::path& path, const std::string& content) {
  write_file_atomic(path, content);
  out.files.push_back(path);
}

// A run too short for the window still writes its series; the row is NaN.
analysis::DecaySummary safe_summary(const DecaySeries& s, const analysis::WindowSpec& w,
                                    const std::string& label, PointOutput& out) {
  try {
    return analysis::summarize(s, w);
  } catch (const DomainError& e) {
    out.warnings.push_back((label.empty() ? "" : label + ": ") + s.method + " summary skipped: " + e.what());
    const double nan = std::numeric_limits<double>::quiet_NaN();
    return {w.start, w.end, nan, nan, nan, nan, nan};
  }
}

std::string series_text(const DecaySeries& s) {
  std::ostringstream os;
  write_series_csv(os, s);
  return os.str();
}

void run_stationary(const RunPoint& pt, const std::filesystem::path& dir, PointOutput& out) {
  const RunConfig& cfg = pt.config;
  const PotentialSpec pot = cfg.potential.bars();
  const SpatialGrid grid = make_spatial_grid(cfg.stationary.dx, cfg.stationary.x_max);
  {
    std::ostringstream os;
    os << "# potential=" << describe(pot) << "\n";
    const bool smooth = cfg.potential.kind == "cut_harmonic";
    os << (smooth ? "x,v,v_smooth\n" : "x,v\n");
    const CutHarmonicSpec ho{cfg.potential.alpha, cfg.potential.beta};
    for (double x : grid.nodes) {
      os << format_double(x) << ',' << format_double(eval_potential(pot, x));
      if (smooth) os << ',' << format_double(eval_potential(ho, x));
      os << '\n';
    }
    emit(out, dir / suffixed("potential", pt.label, ".csv"), os.str());
  }
  for (double e : cfg.stationary.energies) {
    const StationaryState st = solve_stationary(pot, e);
    std::ostringstream os;
    os << "# potential=" << describe(pot) << "\n# energy=" << format_double(e)
       << "\n# spectral_weight=" << format_double(spectral_weight(st)) << "\n";
    write_state_csv(os, st, grid.nodes);
    emit(out, dir / suffixed("state_E" + format_short(e), pt.label, ".csv"), os.str());
  }
}

void run_spectral(const RunPoint& pt, const std::filesystem::path& dir, Exec exec,
                  PointOutput& out) {
  const RunConfig& cfg = pt.config;
  const PotentialSpec pot = cfg.potential.bars();
  const SpectralBlock& s = cfg.spectral;
  const double e_max = s.e_max > 0.0 ? s.e_max : default_energy_cutoff(cfg.potential.reference_height());
  const auto n = static_cast<std::size_t>(std::llround((e_max - s.e_min) / s.de)) + 1;
  const EnergyGrid grid = make_energy_grid(s.e_min, s.e_min + s.de * static_cast<double>(n - 1), n);
  const SpectralTable table = build_spectral_table(pot, grid, exec);
  std::ostringstream os;
  os << "# potential=" << describe(pot) << "\n# de=" << format_double(s.de) << "\nE,phi\n";
  std::size_t peak = 0;
  for (std::size_t i = 0; i < n; ++i) {
    os << format_double(grid.nodes[i]) << ',' << format_double(table.weight[i]) << '\n';
    if (table.weight[i] > table.weight[peak]) peak = i;
  }
  emit(out, dir / suffixed("spectral", pt.label, ".csv"), os.str());
  out.warnings.push_back("spectral peak" + (pt.label.empty() ? "" : " (" + pt.label + ")") +
                         ": E = " + format_double(grid.nodes[peak]) +
                         ", phi = " + format_double(table.weight[peak]));
}

void run_evolve(const RunPoint& pt, const std::filesystem::path& dir, Exec exec,
                PointOutput& out) {
  const RunConfig& cfg = pt.config;
  std::optional<std::size_t> analytic_row, leapfrog_row;
  std::optional<DecaySeries> analytic_series, leapfrog_series;
  if (cfg.method != Method::leapfrog) {
    AnalyticResult r =
        run_analytic(cfg.potential.bars(), cfg.analytic, cfg.potential.reference_height(), exec);
    emit(out, dir / suffixed("analytic", pt.label, ".csv"), series_text(r.series));
    SummaryRow row;
    row.point = pt.label;
    row.method = "analytic";
    row.value = pt.value;
    row.summary = safe_summary(r.series, cfg.window, pt.label, out);
    row.p_in_end = r.series.p_in.back();
    row.validity_horizon = r.validity_horizon;
    row.norm_drift = r.norm_drift;
    row.tail_mass = r.tail_mass;
    analytic_row = out.rows.size();
    out.rows.push_back(row);
    analytic_series = std::move(r.series);
  }
  if (cfg.method != Method::analytic) {
    LeapFrogResult r = evolve(cfg.leapfrog, cfg.potential.sampled(cfg.leapfrog_bars), exec);
    for (const auto& w : r.warnings)
      out.warnings.push_back((pt.label.empty() ? "" : pt.label + ": ") + w);
    emit(out, dir / suffixed("leapfrog", pt.label, ".csv"), series_text(r.series));
    for (const Snapshot& snap : r.snapshots) {
      std::ostringstream os;
      write_snapshot_csv(os, snap);
      emit(out, dir / suffixed("snapshots", pt.label, "") / snapshot_file_name(snap.time), os.str());
    }
    SummaryRow row;
    row.point = pt.label;
    row.method = "leapfrog";
    row.value = pt.value;
    row.summary = safe_summary(r.series, cfg.window, pt.label, out);
    row.p_in_end = r.series.p_in.back();
    row.norm_drift = r.norm_drift;
    leapfrog_row = out.rows.size();
    out.rows.push_back(row);
    leapfrog_series = std::move(r.series);
  }
  // Plateau means of both methods on the analytic run's window.
  if (analytic_row && leapfrog_row && std::isfinite(out.rows[*analytic_row].summary.lambda_mean)) {
    const auto& w = out.rows[*analytic_row].summary;
    CompareOptions opt;
    opt.window_start = w.window_start;
    opt.window_end = w.window_end;
    const double rel = compare(*leapfrog_series, *analytic_series, opt).plateau_rel;
    out.rows[*analytic_row].cross_method_rel_diff = rel;
    out.rows[*leapfrog_row].cross_method_rel_diff = rel;
  }
}

std::string optional_text(const std::optional<double>& v) { return v ? format_double(*v) : ""; }

std::string summary_text(const RunConfig& cfg, const std::vector<SummaryRow>& rows) {
  std::ostringstream os;
  os << "# name=" << cfg.name << "\n";
  if (cfg.sweep) os << "# sweep=" << cfg.sweep->parameter << "\n";
  os << "point,method,value,window_start,window_end,lambda_mean,lambda_amplitude,lnp_slope,"
        "lnp_r2,lnp_curvature_z,p_in_end,validity_horizon,norm_drift,tail_mass,"
        "cross_method_rel_diff\n";
  for (const SummaryRow& r : rows) {
    const auto& s = r.summary;
    os << r.point << ',' << r.method << ',' << optional_text(r.value) << ','
       << format_double(s.window_start) << ',' << format_double(s.window_end) << ','
       << format_double(s.lambda_mean) << ',' << format_double(s.lambda_amplitude) << ','
       << format_double(s.lnp_slope) << ',' << format_double(s.lnp_r2) << ','
       << format_double(s.lnp_curvature_z) << ',' << format_double(r.p_in_end) << ','
       << optional_text(r.validity_horizon) << ',' << format_double(r.norm_drift) << ','
       << optional_text(r.tail_mass) << ',' << optional_text(r.cross_method_rel_diff) << '\n';
  }
  return os.str();
}

}  // namespace

RunReport run(const RunConfig& cfg, const RunOptions& options) {
  RunReport report;
  report.directory = output_directory(cfg, options.output_root);
  const std::vector<RunPoint> points = expand_sweep(cfg);
  std::vector<PointOutput> outputs(points.size());
  std::vector<std::exception_ptr> errors(points.size());

  const unsigned jobs = std::max(1u, std::min<unsigned>(options.jobs, static_cast<unsigned>(points.size())));
  // Concurrent points run their kernels serially; both paths give the same bits.
  const Exec exec = jobs > 1 ? Exec::serial : Exec::parallel;
  auto work = [&](std::size_t i) {
    try {
      switch (cfg.command) {
        case Command::evolve: run_evolve(points[i], report.directory, exec, outputs[i]); break;
        case Command::stationary: run_stationary(points[i], report.directory, outputs[i]); break;
        case Command::spectral: run_spectral(points[i], report.directory, exec, outputs[i]); break;
      }
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };
  if (jobs == 1) {
    for (std::size_t i = 0; i < points.size(); ++i) work(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned j = 0; j < jobs; ++j)
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < points.size(); i = next++) work(i);
      });
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  for (auto& o : outputs) {
    report.files.insert(report.files.end(), o.files.begin(), o.files.end());
    report.rows.insert(report.rows.end(), o.rows.begin(), o.rows.end());
    report.warnings.insert(report.warnings.end(), o.warnings.begin(), o.warnings.end());
  }
  if (cfg.command == Command::evolve) {
    const auto path = report.directory / "summary.csv";
    write_file_atomic(path, summary_text(cfg, report.rows));
    report.files.push_back(path);
  }
  return report;
}

namespace {

double interpolate(const DecaySeries& s, std::span<const double> y, double t) {
  const auto& ts = s.times;
  if (t <= ts.front()) return y.front();
  if (t >= ts.back()) return y.back();
  const auto it = std::upper_bound(ts.begin(), ts.end(), t);
  const std::size_t i = static_cast<std::size_t>(it - ts.begin());
  const double w = (t - ts[i - 1]) / (ts[i] - ts[i - 1]);
  return (1.0 - w) * y[i - 1] + w * y[i];
}

}  // namespace

CompareReport compare(const DecaySeries& a, const DecaySeries& b, const CompareOptions& opt) {
  if (opt.metric != "plateau" && opt.metric != "p_in" && opt.metric != "lambda")
    throw ValidationError("compare metric must be plateau, p_in or lambda");
  if (a.times.size() < 2 || b.times.size() < 2) throw ValidationError("series too short to compare");
  CompareReport rep;
  if (std::abs(a.x_in - b.x_in) > 1e-12 * std::max(1.0, std::abs(a.x_in)))
    rep.warnings.push_back("x_in differs (" + format_double(a.x_in) + " vs " +
                           format_double(b.x_in) + "); observables are not comparable");
  double lo = std::max({a.times.front(), b.times.front(), opt.window_start});
  double hi = std::min(a.times.back(), b.times.back());
  if (opt.window_end > 0.0) hi = std::min(hi, opt.window_end);
  if (!(hi > lo)) throw ValidationError("time windows of the two series do not overlap");

  std::vector<double> t, pa, pb, la, lb;
  for (std::size_t i = 0; i < a.times.size(); ++i) {
    const double ti = a.times[i];
    if (ti < lo - 1e-12 || ti > hi + 1e-12) continue;
    t.push_back(ti);
    pa.push_back(a.p_in[i]);
    la.push_back(a.lambda[i]);
    pb.push_back(interpolate(b, b.p_in, ti));
    lb.push_back(interpolate(b, b.lambda, ti));
  }
  if (t.size() < 2) throw ValidationError("fewer than two common samples in the compare window");
  rep.t_first = t.front();
  rep.t_last = t.back();
  rep.samples = t.size();

  double lam_scale = 0.0;
  for (double v : lb) lam_scale += std::abs(v);
  lam_scale /= static_cast<double>(lb.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double dp = std::abs(pa[i] - pb[i]) / std::abs(pb[i]);
    const double dl = lam_scale > 0.0 ? std::abs(la[i] - lb[i]) / lam_scale : std::abs(la[i] - lb[i]);
    rep.p_in_max = std::max(rep.p_in_max, dp);
    rep.p_in_mean += dp;
    rep.lambda_max = std::max(rep.lambda_max, dl);
    rep.lambda_mean += dl;
  }
  rep.p_in_mean /= static_cast<double>(t.size());
  rep.lambda_mean /= static_cast<double>(t.size());

  const double span = t.back() - t.front();
  rep.plateau_a = (std::log(pa.front()) - std::log(pa.back())) / span;
  rep.plateau_b = (std::log(pb.front()) - std::log(pb.back())) / span;
  rep.plateau_rel = std::abs(rep.plateau_a - rep.plateau_b) / std::abs(rep.plateau_b);

  if (opt.metric == "plateau") rep.metric_value = rep.plateau_rel;
  else if (opt.metric == "p_in") rep.metric_value = rep.p_in_max;
  else rep.metric_value = rep.lambda_max;
  rep.pass = rep.metric_value <= opt.tolerance;
  return rep;
}

std::string format_report(const CompareReport& r, const CompareOptions& opt) {
  std::ostringstream os;
  for (const auto& w : r.warnings) os << "warning: " << w << '\n';
  os << "window " << format_short(r.t_first) << " .. " << format_short(r.t_last) << " ("
     << r.samples << " samples)\n";
  os << "p_in   max rel " << format_double(r.p_in_max) << "  mean rel " << format_double(r.p_in_mean) << '\n';
  os << "lambda max rel " << format_double(r.lambda_max) << "  mean rel " << format_double(r.lambda_mean) << '\n';
  os << "plateau " << format_double(r.plateau_a) << " vs " << format_double(r.plateau_b)
     << "  rel " << format_double(r.plateau_rel) << '\n';
  os << opt.metric << " = " << format_double(r.metric_value) << (r.pass ? " <= " : " > ")
     << "tolerance " << format_double(opt.tolerance) << (r.pass ? "  ok" : "  FAIL") << '\n';
  return os.str();
}

}  // namespace qdecay
