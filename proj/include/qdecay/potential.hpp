#ifndef QDECAY_POTENTIAL_HPP
#define QDECAY_POTENTIAL_HPP

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

namespace qdecay {

// All quantities are in natural units, hbar = m = 1.

/// One constant-height piece of the potential on [x_start, x_end).
struct Segment {
  double x_start;
  double x_end;
  double v;

  double width() const { return x_end - x_start; }
  bool operator==(const Segment&) const = default;
};

/// Infinite wall at x <= 0, contiguous constant segments starting at 0,
/// and V = 0 beyond the last segment.
class PotentialSpec {
 public:
  /// Throws ValidationError unless the segments are contiguous, start at 0,
  /// have positive widths and non-negative heights.
  explicit PotentialSpec(std::vector<Segment> segments);

  const std::vector<Segment>& segments() const { return segments_; }
  std::size_t size() const { return segments_.size(); }
  double outer_edge() const { return segments_.back().x_end; }
  double max_height() const;

  bool operator==(const PotentialSpec&) const = default;

 private:
  std::vector<Segment> segments_;
};

/// V(x) = alpha x^2 / 2 on [0, beta/2], zero elsewhere.
struct CutHarmonicSpec {
  double alpha;
  double beta;

  /// Throws ValidationError unless alpha > 0 and beta > 0.
  void validate() const;
  double outer_edge() const { return 0.5 * beta; }
  double max_height() const { return 0.5 * alpha * outer_edge() * outer_edge(); }
};

PotentialSpec single_barrier(double a, double b, double v0);

/// n_bars equal-width bars on [0, beta/2]; bar heights sampled at bar midpoints.
PotentialSpec discretize_cut_harmonic(const CutHarmonicSpec& spec, std::size_t n_bars);

/// Throws DomainError for x < 0.
double eval_potential(const PotentialSpec& spec, double x);
double eval_potential(const CutHarmonicSpec& spec, double x);

/// Either a stack of bars or the smooth cut oscillator (the leap-frog solver
/// accepts both).
using AnyPotential = std::variant<PotentialSpec, CutHarmonicSpec>;

double eval_potential(const AnyPotential& spec, double x);
double max_height(const AnyPotential& spec);

/// Mean of V over [center - width/2, center + width/2] clipped to x >= 0.
/// Grid samplers use it so that jumps do not depend on which side of a node
/// they fall.
double cell_average(const PotentialSpec& spec, double center, double width);
double cell_average(const CutHarmonicSpec& spec, double center, double width);
double cell_average(const AnyPotential& spec, double center, double width);
double outer_edge(const AnyPotential& spec);

/// One-line human readable form, used in CSV metadata.
std::string describe(const PotentialSpec& spec);
std::string describe(const CutHarmonicSpec& spec);
std::string describe(const AnyPotential& spec);

}  // namespace qdecay

#endif  // QDECAY_POTENTIAL_HPP
