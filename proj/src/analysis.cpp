#include "qdecay/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "qdecay/error.hpp"
#include "qdecay/format.hpp"

namespace qdecay::analysis {

Window select_window(const DecaySeries& series, const WindowSpec& spec) {
  const auto& t = series.times;
  if (t.empty()) throw DomainError("empty series");
  const double end = spec.end > 0.0 ? spec.end : t.back();
  const auto first_it = std::lower_bound(t.begin(), t.end(), spec.start - 1e-9);
  if (first_it == t.end()) throw DomainError("window start beyond the series");
  Window w;
  w.first = static_cast<std::size_t>(first_it - t.begin());
  w.last = w.first;
  while (w.last + 1 < t.size() && t[w.last + 1] <= end + 1e-9) ++w.last;
  if (spec.efolds > 0.0) {
    const double floor = std::log(series.p_in[w.first]) - spec.efolds;
    for (std::size_t i = w.first; i <= w.last; ++i) {
      if (std::log(series.p_in[i]) < floor) {
        w.last = i;
        break;
      }
    }
  }
  if (w.size() < 3)
    throw DomainError("window [" + format_double(spec.start) + ", " + format_double(end) +
                      "] holds fewer than 3 samples");
  return w;
}

LinearFit fit_line(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) throw DomainError("line fit needs matching samples");
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw DomainError("line fit with constant abscissa");
  const double slope = sxy / sxx;
  double ss_res = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - (my + slope * (x[i] - mx));
    ss_res += r * r;
  }
  const double r2 = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  return {my - slope * mx, slope, r2};
}

QuadraticFit fit_quadratic(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  if (n < 4 || y.size() != n) throw DomainError("quadratic fit needs at least 4 samples");
  // Centre and scale the abscissa for conditioning, then map back.
  double lo = *std::min_element(x.begin(), x.end());
  double hi = *std::max_element(x.begin(), x.end());
  const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
  if (!(half > 0.0)) throw DomainError("quadratic fit with constant abscissa");
  double m[3][3] = {}, r[3] = {};
  for (std::size_t i = 0; i < n; ++i) {
    const double u = (x[i] - mid) / half;
    const double b[3] = {1.0, u, u * u};
    for (int a = 0; a < 3; ++a) {
      r[a] += b[a] * y[i];
      for (int c = 0; c < 3; ++c) m[a][c] += b[a] * b[c];
    }
  }
  // Inverse of the 3x3 normal matrix by cofactors.
  const double det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                     m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                     m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
  if (!(std::abs(det) > 0.0)) throw DomainError("quadratic fit is singular");
  double inv[3][3];
  for (int a = 0; a < 3; ++a)
    for (int c = 0; c < 3; ++c) {
      const int a1 = (c + 1) % 3, a2 = (c + 2) % 3, c1 = (a + 1) % 3, c2 = (a + 2) % 3;
      inv[a][c] = (m[a1][c1] * m[a2][c2] - m[a1][c2] * m[a2][c1]) / det;
    }
  double q[3] = {};
  for (int a = 0; a < 3; ++a)
    for (int c = 0; c < 3; ++c) q[a] += inv[a][c] * r[c];
  double ss = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double u = (x[i] - mid) / half;
    const double e = y[i] - (q[0] + q[1] * u + q[2] * u * u);
    ss += e * e;
  }
  const double s2 = ss / static_cast<double>(n - 3);
  const double sigma_u2 = std::sqrt(s2 * inv[2][2]);
  // y = q0 + q1 (x - mid)/h + q2 (x - mid)^2/h^2.
  const double c2 = q[2] / (half * half);
  const double c1 = q[1] / half - 2.0 * q[2] * mid / (half * half);
  const double c0 = q[0] - q[1] * mid / half + q[2] * mid * mid / (half * half);
  return {c0, c1, c2, sigma_u2 / (half * half)};
}

DecaySummary summarize(const DecaySeries& series, const WindowSpec& spec) {
  const Window w = select_window(series, spec);
  const auto t = std::span(series.times).subspan(w.first, w.size());
  std::vector<double> lnp(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) lnp[i] = std::log(series.p_in[w.first + i]);
  const auto lam = std::span(series.lambda).subspan(w.first, w.size());
  DecaySummary s{};
  s.window_start = t.front();
  s.window_end = t.back();
  s.lambda_mean = (lnp.front() - lnp.back()) / (t.back() - t.front());
  s.lambda_amplitude = *std::max_element(lam.begin(), lam.end()) -
                       *std::min_element(lam.begin(), lam.end());
  const LinearFit lf = fit_line(t, lnp);
  s.lnp_slope = lf.slope;
  s.lnp_r2 = lf.r2;
  s.lnp_curvature_z = w.size() >= 4 ? fit_quadratic(t, lnp).c2_significance() : 0.0;
  return s;
}

double relative_l2(std::span<const double> a, std::span<const double> b, Window w) {
  double num = 0, den = 0;
  for (std::size_t i = w.first; i <= w.last; ++i) {
    num += (a[i] - b[i]) * (a[i] - b[i]);
    den += b[i] * b[i];
  }
  if (!(den > 0.0)) throw DomainError("relative L2 against a zero reference");
  return std::sqrt(num / den);
}

double loglog_slope(std::span<const double> t, std::span<const double> y) {
  std::vector<double> lx(t.size()), ly(y.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!(t[i] > 0.0) || !(y[i] > 0.0)) throw DomainError("log-log slope needs positive samples");
    lx[i] = std::log(t[i]);
    ly[i] = std::log(y[i]);
  }
  return fit_line(lx, ly).slope;
}

}  // namespace qdecay::analysis
