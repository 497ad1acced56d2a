#ifndef QDECAY_STATIONARY_HPP
#define QDECAY_STATIONARY_HPP

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "qdecay/potential.hpp"

namespace qdecay {

using cplx = std::complex<double>;

/// |2(E - v)| below this switches a region to the exact zero-curvature basis.
inline constexpr double kDegenerateCurvature = 1e-12;

enum class BasisKind {
  oscillatory,  // E > v: cos / sin
  evanescent,   // E < v: cosh / sinh (paper basis e^{+kx}, e^{-kx})
  linear,       // E == v: 1, x
};

/// One region of a solved state. Inside the region
///   psi(x) = value * C(x - x_start) + slope * S(x - x_start)
/// with C, S the unit cosine/sine-like solutions of the local basis, so
/// `value` and `slope` are psi and psi' at the region's left edge.
struct Region {
  double x_start;
  double x_end;  // +infinity for the free tail
  double v;
  cplx k;  // sqrt(2(E - v)): real >= 0, or positive imaginary
  BasisKind kind;
  double value;
  double slope;
};

/// Stationary scattering state vanishing at the wall.
///
/// The first region carries A sin(k1 x) when its potential is zero (the
/// slope at the wall is A k1 in general); the free tail is
/// C1 cos(k1 x) + C2 sin(k1 x). For real E the solution is real.
struct StationaryState {
  double energy = 0.0;
  double amplitude = 1.0;  // A; differs from 1 only after overflow rescaling
  double k1 = 0.0;         // sqrt(2E)
  std::vector<Region> regions;  // potential regions followed by the free tail
  double c1 = 0.0;
  double c2 = 0.0;

  const Region& tail() const { return regions.back(); }
};

/// Throws DomainError for E < 0. Never fails on E == v_j.
StationaryState solve_stationary(const PotentialSpec& pot, double energy);

/// Same propagation from arbitrary data (psi, psi') at x = 0; the amplitude
/// and wall convention do not apply. Used for Wronskian checks.
StationaryState solve_initial_value(const PotentialSpec& pot, double energy, double psi0,
                                    double dpsi0);

/// phi(E) = A^2 / (|C1|^2 + |C2|^2).
double spectral_weight(const StationaryState& state);

cplx eval_state(const StationaryState& state, double x);
double eval_state_real(const StationaryState& state, double x);
double eval_state_derivative(const StationaryState& state, double x);

/// Evaluates the formula of region `index` at any x (also outside the
/// region); used for interface residuals.
double region_value(const Region& region, double x);
double region_derivative(const Region& region, double x);

/// Largest value/derivative mismatch over all interfaces, each scaled by
/// max(1, |psi|) (resp. max(1, |psi'|)).
struct MatchingResidual {
  double value = 0.0;
  double derivative = 0.0;
};
MatchingResidual matching_residual(const StationaryState& state);

/// Region coefficients in the exponential basis B1 e^{q x} + B2 e^{-q x},
/// q = sqrt(-2(E - v)) taken as complex. Throws DegeneracyError for a
/// linear-basis region.
std::pair<cplx, cplx> exponential_coefficients(const StationaryState& state, std::size_t index);

struct BarrierCoefficients {
  cplx b1, b2, c1, c2;
};

/// Closed-form coefficients of the wall + single barrier problem with A = 1.
/// For E > v0 the barrier wavenumber is imaginary and the same formulas are
/// evaluated in complex arithmetic. Throws DegeneracyError at E == v0 and
/// E == 0.
BarrierCoefficients closed_form_single_barrier(double a, double b, double v0, double energy);

/// CSV with header x,re_psi,im_psi,abs2.
void write_state_csv(std::ostream& os, const StationaryState& state, std::span<const double> xs);

}  // namespace qdecay

#endif  // QDECAY_STATIONARY_HPP
