#ifndef QDECAY_LEAPFROG_HPP
#define QDECAY_LEAPFROG_HPP

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "qdecay/evolution.hpp"
#include "qdecay/kernels.hpp"
#include "qdecay/potential.hpp"

namespace qdecay {

/// psi(x, 0) ~ exp(-(x - x0)^2 / (4 sigma^2)) exp(i k0 x).
struct GaussianPacket {
  double x0 = 1.2;
  double sigma = 0.3;
  double k0 = 0.0;

  /// Requires sigma > 0 and x0 >= 4 sigma so the packet nearly vanishes at the wall.
  void validate() const;
};

struct LeapFrogConfig {
  double dx = 0.005;
  double x_max = 120.0;
  double dt = 0.0;  // 0: largest step <= dt_safety * stability bound dividing dt_obs
  double dt_safety = 0.8;
  double t_end = 30.0;
  double dt_obs = 0.05;
  double x_in = 0.0;
  GaussianPacket packet;
  std::vector<double> snapshot_times;
  /// When false an over-sized dt is accepted and blow-up is detected while
  /// stepping instead of rejected up front.
  bool enforce_stability = true;
};

/// Largest stable step of the staggered scheme: 1 / (1/dx^2 + v_max/2).
double stability_bound(double dx, double v_max);

/// Time step actually used and the number of steps between observations.
struct StepPlan {
  double dt;
  std::size_t stride;
};
StepPlan plan_steps(const LeapFrogConfig& cfg, double v_max);

/// Throws ValidationError (naming the stability bound when dt is too large);
/// returns non-fatal warnings (far wall too close).
std::vector<std::string> validate(const LeapFrogConfig& cfg, const AnyPotential& pot);

/// Real part at integer steps, imaginary part at half steps.
struct LeapFrogState {
  double dx = 0.0;
  double dt = 0.0;
  std::size_t steps = 0;
  std::vector<double> x;
  std::vector<double> v;   // cell averages of V around each node
  std::vector<double> re;  // R^n
  std::vector<double> im;  // I^{n+1/2}
  double v_max = 0.0;
};

/// Gaussian packet normalized to unit discrete norm; I^{1/2} from a half
/// Euler step. Endpoints pinned to zero.
LeapFrogState init_packet(const LeapFrogConfig& cfg, const AnyPotential& pot);

/// One full step: R^{n+1} = R^n + dt H I^{n+1/2}, I^{n+3/2} = I^{n+1/2} - dt H R^{n+1}.
/// When `density` is non-empty it receives R^{n+1}^2 + I^{n+1/2} I^{n+3/2}.
void step(LeapFrogState& state, Exec exec = Exec::parallel, std::span<double> density = {});

/// Throws NumericalError naming the violated bound if the state has blown up.
void check_finite(const LeapFrogState& state, double reference_peak);

/// Density at t = 0 in the conserved staggered form R^2 + I^{-1/2} I^{1/2}.
std::vector<double> initial_density(const LeapFrogState& state, Exec exec = Exec::parallel);

struct Snapshot {
  double time;
  std::vector<double> x;
  std::vector<double> density;
};

struct LeapFrogResult {
  DecaySeries series;
  std::vector<Snapshot> snapshots;
  std::vector<double> norms;  // discrete norm at every observation
  double norm_drift = 0.0;    // max relative deviation from the t = 0 norm
  double dt = 0.0;
  std::size_t steps = 0;
  std::vector<std::string> warnings;
};

LeapFrogResult evolve(const LeapFrogConfig& cfg, const AnyPotential& pot,
                      Exec exec = Exec::parallel);

}  // namespace qdecay

#endif  // QDECAY_LEAPFROG_HPP
