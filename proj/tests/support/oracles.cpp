#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace oracle {

namespace {

double potential_at(const qdecay::PotentialSpec& pot, double x_mid) {
  for (const auto& s : pot.segments())
    if (x_mid >= s.x_start && x_mid < s.x_end) return s.v;
  return 0.0;
}

// Constant V within one step, so RK4 never straddles a jump.
void rk4_span(double v, double e, double x0, double x1, double h, double& y, double& dy) {
  const int n = std::max(1, static_cast<int>(std::ceil((x1 - x0) / h)));
  const double s = (x1 - x0) / n;
  const double c = 2.0 * (v - e);
  for (int i = 0; i < n; ++i) {
    const double k1y = dy, k1d = c * y;
    const double k2y = dy + 0.5 * s * k1d, k2d = c * (y + 0.5 * s * k1y);
    const double k3y = dy + 0.5 * s * k2d, k3d = c * (y + 0.5 * s * k2y);
    const double k4y = dy + s * k3d, k4d = c * (y + s * k3y);
    y += s / 6.0 * (k1y + 2 * k2y + 2 * k3y + k4y);
    dy += s / 6.0 * (k1d + 2 * k2d + 2 * k3d + k4d);
  }
}

}  // namespace

std::vector<OdePoint> rk4_stationary(const qdecay::PotentialSpec& pot, double energy, double slope,
                                     const std::vector<double>& xs, double h) {
  std::vector<double> edges;
  for (const auto& s : pot.segments()) edges.push_back(s.x_end);
  std::vector<OdePoint> out;
  double x = 0.0, y = 0.0, dy = slope;
  std::size_t next_edge = 0;
  for (double target : xs) {
    if (target < x) throw std::invalid_argument("abscissae must ascend");
    while (x < target) {
      double stop = target;
      if (next_edge < edges.size() && edges[next_edge] < stop) stop = edges[next_edge];
      rk4_span(potential_at(pot, 0.5 * (x + stop)), energy, x, stop, h, y, dy);
      x = stop;
      if (next_edge < edges.size() && x >= edges[next_edge]) ++next_edge;
    }
    out.push_back({target, y, dy});
  }
  return out;
}

double rk4_spectral_weight(const qdecay::PotentialSpec& pot, double energy) {
  const double k = std::sqrt(2.0 * energy);
  const double b = pot.outer_edge();
  const auto p = rk4_stationary(pot, energy, k, {b}, 2e-4)[0];
  // psi = C1 cos(kx) + C2 sin(kx) beyond b.
  const double c1 = p.psi * std::cos(k * b) - p.dpsi / k * std::sin(k * b);
  const double c2 = p.psi * std::sin(k * b) + p.dpsi / k * std::cos(k * b);
  return 1.0 / (c1 * c1 + c2 * c2);
}

double barrier_b1(double a, double v0, double energy) {
  const double k1 = std::sqrt(2.0 * energy);
  const double k2 = std::sqrt(-2.0 * (energy - v0));
  return std::exp(-a * k2) * (k1 * std::cos(a * k1) + k2 * std::sin(a * k1)) / (2.0 * k2);
}

CrankNicolson::CrankNicolson(std::vector<double> v, double dx, double dt)
    : v_(std::move(v)), dx_(dx), dt_(dt) {}

void CrankNicolson::step(std::vector<std::complex<double>>& psi) const {
  using C = std::complex<double>;
  const std::size_t n = psi.size();
  const double off = -0.5 / (dx_ * dx_);
  const C half(0.0, 0.5 * dt_);
  // rhs = (1 - i dt H / 2) psi on interior nodes.
  std::vector<C> rhs(n, 0.0), diag(n), low(n), up(n);
  for (std::size_t j = 1; j + 1 < n; ++j) {
    const C hpsi = off * (psi[j + 1] + psi[j - 1]) + (1.0 / (dx_ * dx_) + v_[j]) * psi[j];
    rhs[j] = psi[j] - half * hpsi;
    diag[j] = 1.0 + half * (1.0 / (dx_ * dx_) + v_[j]);
    low[j] = half * off;
    up[j] = half * off;
  }
  // Thomas algorithm on j = 1 .. n-2.
  std::vector<C> c(n), d(n);
  for (std::size_t j = 1; j + 1 < n; ++j) {
    const C m = diag[j] - (j > 1 ? low[j] * c[j - 1] : C(0.0));
    c[j] = up[j] / m;
    d[j] = (rhs[j] - (j > 1 ? low[j] * d[j - 1] : C(0.0))) / m;
  }
  psi[n - 1] = 0.0;
  psi[0] = 0.0;
  for (std::size_t j = n - 2; j >= 1; --j) {
    psi[j] = d[j] - (j + 2 < n ? c[j] * psi[j + 1] : C(0.0));
    if (j == 1) break;
  }
}

double staggered_phase(double q, double dx, double dt) {
  const double omega = (1.0 - std::cos(q * dx)) / (dx * dx);
  return 2.0 * std::asin(0.5 * dt * omega);
}

}  // namespace oracle
