#include "qdecay/stationary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "qdecay/error.hpp"
#include "qdecay/format.hpp"

namespace qdecay {

namespace {

constexpr double kRescaleThreshold = 1e100;

BasisKind classify(double energy, double v) {
  const double curvature = 2.0 * (energy - v);
  if (std::abs(curvature) < kDegenerateCurvature) return BasisKind::linear;
  return curvature > 0.0 ? BasisKind::oscillatory : BasisKind::evanescent;
}

cplx local_wavenumber(double energy, double v) {
  // Principal branch: sqrt(-x + 0i) = +i sqrt(x).
  return std::sqrt(cplx(2.0 * (energy - v), 0.0));
}

// Unit solutions of the local basis at offset d: C(0) = 1, C'(0) = 0,
// S(0) = 0, S'(0) = 1. Returns {C, S, C', S'}.
struct LocalBasis {
  double c, s, dc, ds;
};

LocalBasis local_basis(const Region& r, double d) {
  switch (r.kind) {
    case BasisKind::oscillatory: {
      const double k = r.k.real();
      const double ck = std::cos(k * d), sk = std::sin(k * d);
      return {ck, sk / k, -k * sk, ck};
    }
    case BasisKind::evanescent: {
      const double q = r.k.imag();
      const double ch = std::cosh(q * d), sh = std::sinh(q * d);
      return {ch, sh / q, q * sh, ch};
    }
    case BasisKind::linear:
      break;
  }
  return {1.0, d, 0.0, 1.0};
}

struct Propagated {
  std::vector<Region> regions;  // without tail
  double tail_value;
  double tail_slope;
  double log_scale;  // stored values = true values * exp(-log_scale)
};

Propagated propagate(const PotentialSpec& pot, double energy, double value, double slope) {
  Propagated out{{}, 0.0, 0.0, 0.0};
  out.regions.reserve(pot.size() + 1);
  for (const Segment& seg : pot.segments()) {
    Region r{seg.x_start, seg.x_end, seg.v, local_wavenumber(energy, seg.v),
             classify(energy, seg.v), value, slope};
    const LocalBasis lb = local_basis(r, seg.width());
    const double next_value = value * lb.c + slope * lb.s;
    const double next_slope = value * lb.dc + slope * lb.ds;
    out.regions.push_back(r);
    value = next_value;
    slope = next_slope;
    const double size = std::max(std::abs(value), std::abs(slope));
    if (size > kRescaleThreshold) {
      for (Region& prev : out.regions) {
        prev.value /= size;
        prev.slope /= size;
      }
      value /= size;
      slope /= size;
      out.log_scale += std::log(size);
    }
  }
  out.tail_value = value;
  out.tail_slope = slope;
  return out;
}

Region make_tail(double energy, double x_start, double value, double slope) {
  return {x_start, std::numeric_limits<double>::infinity(), 0.0, local_wavenumber(energy, 0.0),
          classify(energy, 0.0), value, slope};
}

}  // namespace

StationaryState solve_stationary(const PotentialSpec& pot, double energy) {
  if (!(energy >= 0.0) || !std::isfinite(energy))
    throw DomainError("stationary state requested at negative energy");
  const double k1 = std::sqrt(2.0 * energy);
  // Propagate the unit-slope wall solution u, then psi = A k1 u. Keeping u
  // separate makes C1, C2 and phi well defined in the E -> 0 limit.
  Propagated p = propagate(pot, energy, 0.0, 1.0);

  StationaryState st;
  st.energy = energy;
  st.k1 = k1;
  st.amplitude = std::exp(-p.log_scale);
  st.regions = std::move(p.regions);
  for (Region& r : st.regions) {
    r.value *= k1;
    r.slope *= k1;
  }
  const double b = pot.outer_edge();
  const double cb = std::cos(k1 * b), sb = std::sin(k1 * b);
  st.c1 = k1 * p.tail_value * cb - p.tail_slope * sb;
  st.c2 = k1 * p.tail_value * sb + p.tail_slope * cb;
  st.regions.push_back(make_tail(energy, b, k1 * p.tail_value, k1 * p.tail_slope));
  return st;
}

StationaryState solve_initial_value(const PotentialSpec& pot, double energy, double psi0,
                                    double dpsi0) {
  if (!(energy >= 0.0) || !std::isfinite(energy))
    throw DomainError("stationary state requested at negative energy");
  const double k1 = std::sqrt(2.0 * energy);
  Propagated p = propagate(pot, energy, psi0, dpsi0);
  StationaryState st;
  st.energy = energy;
  st.k1 = k1;
  st.amplitude = std::exp(-p.log_scale);
  st.regions = std::move(p.regions);
  const double b = pot.outer_edge();
  st.regions.push_back(make_tail(energy, b, p.tail_value, p.tail_slope));
  if (k1 > 0.0) {
    const double cb = std::cos(k1 * b), sb = std::sin(k1 * b);
    st.c1 = p.tail_value * cb - p.tail_slope * sb / k1;
    st.c2 = p.tail_value * sb + p.tail_slope * cb / k1;
  }
  return st;
}

double spectral_weight(const StationaryState& state) {
  const double denom = state.c1 * state.c1 + state.c2 * state.c2;
  if (!(denom > 0.0) || !std::isfinite(denom))
    throw NumericalError("spectral weight undefined: |C1|^2 + |C2|^2 = " + format_double(denom) +
                         " at E = " + format_double(state.energy));
  return state.amplitude * state.amplitude / denom;
}

double region_value(const Region& region, double x) {
  const LocalBasis lb = local_basis(region, x - region.x_start);
  return region.value * lb.c + region.slope * lb.s;
}

double region_derivative(const Region& region, double x) {
  const LocalBasis lb = local_basis(region, x - region.x_start);
  return region.value * lb.dc + region.slope * lb.ds;
}

namespace {

const Region& find_region(const StationaryState& state, double x) {
  if (!(x >= 0.0)) throw DomainError("stationary state evaluated at x < 0");
  auto it = std::upper_bound(state.regions.begin(), state.regions.end(), x,
                             [](double value, const Region& r) { return value < r.x_start; });
  return *std::prev(it);
}

}  // namespace

double eval_state_real(const StationaryState& state, double x) {
  return region_value(find_region(state, x), x);
}

cplx eval_state(const StationaryState& state, double x) { return {eval_state_real(state, x), 0.0}; }

double eval_state_derivative(const StationaryState& state, double x) {
  return region_derivative(find_region(state, x), x);
}

MatchingResidual matching_residual(const StationaryState& state) {
  MatchingResidual res;
  for (std::size_t i = 0; i + 1 < state.regions.size(); ++i) {
    const Region& left = state.regions[i];
    const Region& right = state.regions[i + 1];
    const double x = right.x_start;
    const double vl = region_value(left, x), vr = region_value(right, x);
    const double dl = region_derivative(left, x), dr = region_derivative(right, x);
    res.value = std::max(res.value, std::abs(vl - vr) / std::max(1.0, std::abs(vr)));
    res.derivative = std::max(res.derivative, std::abs(dl - dr) / std::max(1.0, std::abs(dr)));
  }
  // Tail, C1 cos + C2 sin, against the last region.
  const Region& last = state.regions.size() >= 2 ? state.regions[state.regions.size() - 2]
                                                 : state.regions.back();
  const double b = state.tail().x_start;
  const double ct = std::cos(state.k1 * b), st = std::sin(state.k1 * b);
  const double tail_v = state.c1 * ct + state.c2 * st;
  const double tail_d = state.k1 * (-state.c1 * st + state.c2 * ct);
  const double vl = region_value(last, b), dl = region_derivative(last, b);
  res.value = std::max(res.value, std::abs(vl - tail_v) / std::max(1.0, std::abs(tail_v)));
  res.derivative = std::max(res.derivative, std::abs(dl - tail_d) / std::max(1.0, std::abs(tail_d)));
  return res;
}

std::pair<cplx, cplx> exponential_coefficients(const StationaryState& state, std::size_t index) {
  if (index >= state.regions.size()) throw DomainError("region index out of range");
  const Region& r = state.regions[index];
  if (r.kind == BasisKind::linear)
    throw DegeneracyError("exponential basis undefined in a zero-curvature region");
  const cplx q = std::sqrt(cplx(-2.0 * (state.energy - r.v), 0.0));
  const cplx half_sum = 0.5 * (r.value + r.slope / q);
  const cplx half_diff = 0.5 * (r.value - r.slope / q);
  return {half_sum * std::exp(-q * r.x_start), half_diff * std::exp(q * r.x_start)};
}

BarrierCoefficients closed_form_single_barrier(double a, double b, double v0, double energy) {
  if (!(a > 0.0) || !(b > a) || !(v0 > 0.0))
    throw ValidationError("closed form needs 0 < a < b and v0 > 0");
  if (!(energy > 0.0)) throw DegeneracyError("closed form singular at E = 0 (k1 = 0)");
  if (energy == v0) throw DegeneracyError("closed form singular at E = v0 (k2 = 0)");
  const cplx k1 = std::sqrt(2.0 * energy);
  const cplx k2 = std::sqrt(cplx(-2.0 * (energy - v0), 0.0));
  const cplx A = 1.0;
  const cplx ca = std::cos(a * k1), sa = std::sin(a * k1);
  const cplx cb = std::cos(b * k1), sb = std::sin(b * k1), tb = std::tan(b * k1);
  const cplx plus_a = k1 * ca + k2 * sa;    // k1 cos(a k1) + k2 sin(a k1)
  const cplx minus_a = -k1 * ca + k2 * sa;  // -k1 cos(a k1) + k2 sin(a k1)

  BarrierCoefficients out;
  out.b1 = std::exp(-a * k2) * plus_a * A / (2.0 * k2);
  out.b2 = std::exp(a * k2) * minus_a * A / (2.0 * k2);
  const cplx pre = A / (2.0 * k1 * k2) * std::exp(-(a + b) * k2);
  out.c1 = pre * (std::exp(2.0 * b * k2) * plus_a * (k1 * cb - k2 * sb) +
                  std::exp(2.0 * a * k2) * minus_a * (k1 * cb + k2 * sb));
  out.c2 = pre * cb *
           (-std::exp(2.0 * a * k2) * minus_a * (k2 - k1 * tb) +
            std::exp(2.0 * b * k2) * plus_a * (k2 + k1 * tb));
  return out;
}

void write_state_csv(std::ostream& os, const StationaryState& state, std::span<const double> xs) {
  os << "x,re_psi,im_psi,abs2\n";
  for (double x : xs) {
    const cplx psi = eval_state(state, x);
    os << format_double(x) << ',' << format_double(psi.real()) << ',' << format_double(psi.imag())
       << ',' << format_double(std::norm(psi)) << '\n';
  }
}

}  // namespace qdecay
