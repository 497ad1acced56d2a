#ifndef QDECAY_RUNNER_HPP
#define QDECAY_RUNNER_HPP

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "qdecay/analysis.hpp"
#include "qdecay/config.hpp"
#include "qdecay/evolution.hpp"

namespace qdecay {

struct RunOptions {
  std::filesystem::path output_root;  // relative output dirs resolve here
  unsigned jobs = 1;                  // concurrent sweep points
};

/// One sweep point (or the whole run when there is no sweep).
struct RunPoint {
  std::string label;  // "" or "<parameter>_<value>"
  std::optional<double> value;
  RunConfig config;
};

std::vector<RunPoint> expand_sweep(const RunConfig& cfg);

/// One line of summary.csv.
struct SummaryRow {
  std::string point;
  std::string method;
  std::optional<double> value;
  analysis::DecaySummary summary{};
  double p_in_end = 0.0;
  std::optional<double> validity_horizon;
  double norm_drift = 0.0;
  std::optional<double> tail_mass;
  std::optional<double> cross_method_rel_diff;
};

struct RunReport {
  std::filesystem::path directory;
  std::vector<std::filesystem::path> files;  // in write order
  std::vector<SummaryRow> rows;
  std::vector<std::string> warnings;
};

std::filesystem::path output_directory(const RunConfig& cfg, const std::filesystem::path& root);

/// Executes a validated config and writes every artifact atomically.
RunReport run(const RunConfig& cfg, const RunOptions& options);

struct CompareOptions {
  std::string metric = "plateau";  // plateau | p_in | lambda
  double tolerance = 0.02;
  double window_start = 0.0;
  double window_end = 0.0;  // 0: end of the overlap
};

struct CompareReport {
  double t_first = 0.0, t_last = 0.0;
  std::size_t samples = 0;
  double p_in_max = 0.0, p_in_mean = 0.0;      // pointwise |a - b| / |b|
  double lambda_max = 0.0, lambda_mean = 0.0;  // |a - b| / mean |b| on the window
  double plateau_a = 0.0, plateau_b = 0.0, plateau_rel = 0.0;
  double metric_value = 0.0;
  bool pass = true;
  std::vector<std::string> warnings;
};

/// Interpolates `b` onto the samples of `a` inside the common window.
/// Throws ValidationError when the time ranges do not overlap.
CompareReport compare(const DecaySeries& a, const DecaySeries& b, const CompareOptions& options);

std::string format_report(const CompareReport& report, const CompareOptions& options);

}  // namespace qdecay

#endif  // QDECAY_RUNNER_HPP
