#ifndef QDECAY_ANALYSIS_HPP
#define QDECAY_ANALYSIS_HPP

#include <cstddef>
#include <span>

#include "qdecay/evolution.hpp"

namespace qdecay::analysis {

/// Intermediate window: starts at `start`, ends at `end` (0 = series end)
/// or earlier, once ln P_in has dropped by `efolds` below its value at the
/// start (efolds = 0 disables that rule).
struct WindowSpec {
  double start = 5.0;
  double end = 0.0;
  double efolds = 4.0;
};

/// Inclusive sample index range [first, last].
struct Window {
  std::size_t first = 0;
  std::size_t last = 0;

  std::size_t size() const { return last - first + 1; }
};

/// Throws DomainError if fewer than 3 samples fall inside.
Window select_window(const DecaySeries& series, const WindowSpec& spec);

struct LinearFit {
  double intercept;
  double slope;
  double r2;
};
LinearFit fit_line(std::span<const double> x, std::span<const double> y);

/// y = c0 + c1 x + c2 x^2 with the standard error of c2.
struct QuadraticFit {
  double c0, c1, c2;
  double c2_sigma;

  double c2_significance() const { return c2 / c2_sigma; }
};
QuadraticFit fit_quadratic(std::span<const double> x, std::span<const double> y);

/// Per-run scalars reported in summary files.
struct DecaySummary {
  double window_start;
  double window_end;
  double lambda_mean;       // (ln P(t0) - ln P(t1)) / (t1 - t0)
  double lambda_amplitude;  // max - min of lambda on the window
  double lnp_slope;         // least-squares slope of ln P_in
  double lnp_r2;
  double lnp_curvature_z;   // quadratic coefficient / its standard error
};
DecaySummary summarize(const DecaySeries& series, const WindowSpec& spec);

/// ||a - b||_2 / ||b||_2 over the index window.
double relative_l2(std::span<const double> a, std::span<const double> b, Window w);

/// Slope of log(y) against log(t) by least squares.
double loglog_slope(std::span<const double> t, std::span<const double> y);

}  // namespace qdecay::analysis

#endif  // QDECAY_ANALYSIS_HPP
