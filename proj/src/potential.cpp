#include "qdecay/potential.hpp"

#include <algorithm>
#include <cmath>

#include "qdecay/error.hpp"
#include "qdecay/format.hpp"

namespace qdecay {

PotentialSpec::PotentialSpec(std::vector<Segment> segments) : segments_(std::move(segments)) {
  if (segments_.empty()) throw ValidationError("potential needs at least one segment");
  if (segments_.front().x_start != 0.0)
    throw ValidationError("first segment must start at x = 0");
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    const Segment& s = segments_[i];
    if (!std::isfinite(s.x_start) || !std::isfinite(s.x_end) || !std::isfinite(s.v))
      throw ValidationError("segment " + std::to_string(i) + " has non-finite fields");
    if (!(s.x_end > s.x_start))
      throw ValidationError("segment " + std::to_string(i) + " has non-positive width");
    if (s.v < 0.0) throw ValidationError("segment " + std::to_string(i) + " has negative height");
    if (i > 0 && s.x_start != segments_[i - 1].x_end)
      throw ValidationError("segments " + std::to_string(i - 1) + " and " + std::to_string(i) +
                            " are not contiguous");
  }
}

double PotentialSpec::max_height() const {
  double m = 0.0;
  for (const auto& s : segments_) m = std::max(m, s.v);
  return m;
}

void CutHarmonicSpec::validate() const {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw ValidationError("cut oscillator alpha must be > 0");
  if (!(beta > 0.0) || !std::isfinite(beta)) throw ValidationError("cut oscillator beta must be > 0");
}

PotentialSpec single_barrier(double a, double b, double v0) {
  if (!(a > 0.0)) throw ValidationError("single barrier needs a > 0");
  if (!(b > a)) throw ValidationError("single barrier needs b > a");
  if (!(v0 > 0.0)) throw ValidationError("single barrier needs v0 > 0");
  return PotentialSpec({{0.0, a, 0.0}, {a, b, v0}});
}

PotentialSpec discretize_cut_harmonic(const CutHarmonicSpec& spec, std::size_t n_bars) {
  spec.validate();
  if (n_bars == 0) throw ValidationError("n_bars must be at least 1");
  const double edge = spec.outer_edge();
  const double width = edge / static_cast<double>(n_bars);
  std::vector<Segment> segs;
  segs.reserve(n_bars);
  for (std::size_t j = 0; j < n_bars; ++j) {
    const double x0 = j == 0 ? 0.0 : segs.back().x_end;
    const double x1 = j + 1 == n_bars ? edge : width * static_cast<double>(j + 1);
    const double mid = width * (static_cast<double>(j) + 0.5);
    segs.push_back({x0, x1, 0.5 * spec.alpha * mid * mid});
  }
  return PotentialSpec(std::move(segs));
}

double eval_potential(const PotentialSpec& spec, double x) {
  if (!(x >= 0.0)) throw DomainError("potential evaluated at x < 0");
  const auto& segs = spec.segments();
  // The outer edge itself belongs to the last bar, as in the closed-interval
  // barrier a <= x <= b.
  if (x > spec.outer_edge()) return 0.0;
  if (x == spec.outer_edge()) return segs.back().v;
  auto it = std::upper_bound(segs.begin(), segs.end(), x,
                             [](double value, const Segment& s) { return value < s.x_end; });
  return it->v;
}

double eval_potential(const CutHarmonicSpec& spec, double x) {
  if (!(x >= 0.0)) throw DomainError("potential evaluated at x < 0");
  return x <= spec.outer_edge() ? 0.5 * spec.alpha * x * x : 0.0;
}

double eval_potential(const AnyPotential& spec, double x) {
  return std::visit([x](const auto& s) { return eval_potential(s, x); }, spec);
}

double cell_average(const PotentialSpec& spec, double center, double width) {
  if (!(width > 0.0)) throw DomainError("cell width must be > 0");
  const double lo = std::max(0.0, center - 0.5 * width);
  const double hi = center + 0.5 * width;
  if (!(hi > lo)) throw DomainError("cell lies behind the wall");
  double sum = 0.0;
  for (const Segment& seg : spec.segments()) {
    const double l = std::max(lo, seg.x_start), h = std::min(hi, seg.x_end);
    if (h > l) sum += seg.v * (h - l);
  }
  return sum / (hi - lo);
}

double cell_average(const CutHarmonicSpec& spec, double center, double width) {
  if (!(width > 0.0)) throw DomainError("cell width must be > 0");
  const double lo = std::max(0.0, center - 0.5 * width);
  const double hi = center + 0.5 * width;
  if (!(hi > lo)) throw DomainError("cell lies behind the wall");
  const double h = std::min(hi, spec.outer_edge());
  if (h <= lo) return 0.0;
  return spec.alpha * (h * h * h - lo * lo * lo) / (6.0 * (hi - lo));
}

double cell_average(const AnyPotential& spec, double center, double width) {
  return std::visit([=](const auto& s) { return cell_average(s, center, width); }, spec);
}

double max_height(const AnyPotential& spec) {
  return std::visit([](const auto& s) { return s.max_height(); }, spec);
}

double outer_edge(const AnyPotential& spec) {
  return std::visit([](const auto& s) { return s.outer_edge(); }, spec);
}

std::string describe(const PotentialSpec& spec) {
  std::string out = "segments";
  for (const auto& s : spec.segments())
    out += " [" + format_double(s.x_start) + "," + format_double(s.x_end) + "," + format_double(s.v) + "]";
  return out;
}

std::string describe(const CutHarmonicSpec& spec) {
  return "cut_harmonic alpha=" + format_double(spec.alpha) + " beta=" + format_double(spec.beta);
}

std::string describe(const AnyPotential& spec) {
  return std::visit([](const auto& s) { return describe(s); }, spec);
}

}  // namespace qdecay
