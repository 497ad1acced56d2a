#include "qdecay/leapfrog.hpp"

#include <algorithm>
#include <cmath>
#include <type_traits>
#include <variant>

#include "qdecay/error.hpp"
#include "qdecay/format.hpp"

namespace qdecay {

namespace {

constexpr std::size_t kBlowupCheckInterval = 10;
constexpr double kBlowupFactor = 1e3;

std::string bound_text(double dx, double v_max, double safety) {
  return "dt <= " + format_double(safety) + " / (1/dx^2 + v_max/2) = " +
         format_double(safety * stability_bound(dx, v_max)) + " (dx = " + format_double(dx) +
         ", v_max = " + format_double(v_max) + ")";
}

}  // namespace

void GaussianPacket::validate() const {
  if (!(sigma > 0.0)) throw ValidationError("packet sigma must be > 0");
  if (!(x0 >= 4.0 * sigma))
    throw ValidationError("packet must satisfy x0 >= 4 sigma (x0 = " + format_double(x0) +
                          ", sigma = " + format_double(sigma) + ")");
  if (!std::isfinite(k0)) throw ValidationError("packet k0 must be finite");
}

double stability_bound(double dx, double v_max) { return 1.0 / (1.0 / (dx * dx) + 0.5 * v_max); }

StepPlan plan_steps(const LeapFrogConfig& cfg, double v_max) {
  if (cfg.dt > 0.0) {
    const auto stride = std::max<long long>(1, std::llround(cfg.dt_obs / cfg.dt));
    return {cfg.dt, static_cast<std::size_t>(stride)};
  }
  const double limit = cfg.dt_safety * stability_bound(cfg.dx, v_max);
  const auto stride = static_cast<std::size_t>(std::ceil(cfg.dt_obs / limit - 1e-9));
  return {cfg.dt_obs / static_cast<double>(stride), stride};
}

std::vector<std::string> validate(const LeapFrogConfig& cfg, const AnyPotential& pot) {
  std::visit(
      [](const auto& p) {
        if constexpr (std::is_same_v<std::decay_t<decltype(p)>, CutHarmonicSpec>) p.validate();
      },
      pot);
  if (!(cfg.dx > 0.0)) throw ValidationError("leap-frog dx must be > 0");
  if (!(cfg.x_max > 10.0 * cfg.dx)) throw ValidationError("leap-frog x_max too small for dx");
  if (!(cfg.dt_safety > 0.0) || cfg.dt_safety > 1.0)
    throw ValidationError("leap-frog dt_safety must lie in (0, 1]");
  if (!(cfg.dt_obs > 0.0) || !(cfg.t_end >= 2.0 * cfg.dt_obs))
    throw ValidationError("leap-frog needs dt_obs > 0 and t_end >= 2 dt_obs");
  if (!(cfg.x_in > 0.0) || cfg.x_in > cfg.x_max)
    throw ValidationError("leap-frog x_in must lie in (0, x_max]");
  cfg.packet.validate();
  if (cfg.packet.x0 + 6.0 * cfg.packet.sigma > cfg.x_max)
    throw ValidationError("packet does not fit inside [0, x_max]");
  for (double t : cfg.snapshot_times)
    if (!(t >= 0.0) || t > cfg.t_end + 1e-12)
      throw ValidationError("snapshot time " + format_double(t) + " outside [0, t_end]");

  const double v_max = max_height(pot);
  const StepPlan plan = plan_steps(cfg, v_max);
  if (cfg.enforce_stability && plan.dt > cfg.dt_safety * stability_bound(cfg.dx, v_max) * (1.0 + 1e-12))
    throw ValidationError("time step " + format_double(plan.dt) + " violates the stability bound " +
                          bound_text(cfg.dx, v_max, cfg.dt_safety));

  std::vector<std::string> warnings;
  const double k = cfg.packet.k0;
  const double v_group = std::sqrt(k * k + 1.0 / (4.0 * cfg.packet.sigma * cfg.packet.sigma));
  const double needed = outer_edge(pot) + v_group * cfg.t_end;
  if (cfg.x_max < needed)
    warnings.push_back("x_max = " + format_double(cfg.x_max) + " < barrier edge + v_group t_end = " +
                       format_double(needed) + "; far-wall reflections may return");
  return warnings;
}

LeapFrogState init_packet(const LeapFrogConfig& cfg, const AnyPotential& pot) {
  cfg.packet.validate();
  const double v_max = max_height(pot);
  const StepPlan plan = plan_steps(cfg, v_max);
  const auto cells = static_cast<std::size_t>(std::llround(cfg.x_max / cfg.dx));
  LeapFrogState s;
  s.dx = cfg.dx;
  s.dt = plan.dt;
  s.v_max = v_max;
  s.x.resize(cells + 1);
  s.v.resize(cells + 1);
  s.re.assign(cells + 1, 0.0);
  s.im.assign(cells + 1, 0.0);
  const GaussianPacket& g = cfg.packet;
  for (std::size_t j = 0; j <= cells; ++j) {
    const double x = cfg.dx * static_cast<double>(j);
    s.x[j] = x;
    s.v[j] = cell_average(pot, x, cfg.dx);
    if (j == 0 || j == cells) continue;
    const double env = std::exp(-(x - g.x0) * (x - g.x0) / (4.0 * g.sigma * g.sigma));
    s.re[j] = env * std::cos(g.k0 * x);
    s.im[j] = env * std::sin(g.k0 * x);
  }
  double n2 = 0.0;
  for (std::size_t j = 0; j <= cells; ++j) n2 += s.re[j] * s.re[j] + s.im[j] * s.im[j];
  const double scale = 1.0 / std::sqrt(n2 * cfg.dx);
  for (std::size_t j = 0; j <= cells; ++j) {
    s.re[j] *= scale;
    s.im[j] *= scale;
  }
  // I^{1/2} = Im psi - (dt/2) H Re psi.
  std::vector<double> h(cells + 1);
  kernels::apply_hamiltonian(Exec::serial, s.re, s.v, s.dx, h);
  for (std::size_t j = 1; j < cells; ++j) s.im[j] -= 0.5 * s.dt * h[j];
  return s;
}

void step(LeapFrogState& state, Exec exec, std::span<double> density) {
  kernels::leapfrog_real_update(exec, state.re, state.im, state.v, state.dt, state.dx);
  kernels::leapfrog_imag_update(exec, state.im, state.re, state.v, state.dt, state.dx, density);
  ++state.steps;
}

void check_finite(const LeapFrogState& state, double reference_peak) {
  double peak = 0.0;
  bool finite = true;
  for (std::size_t j = 0; j < state.re.size(); ++j) {
    const double a = std::abs(state.re[j]) + std::abs(state.im[j]);
    if (!std::isfinite(a)) {
      finite = false;
      break;
    }
    peak = std::max(peak, a);
  }
  if (!finite || peak > kBlowupFactor * reference_peak)
    throw NumericalError("leap-frog blow-up after " + std::to_string(state.steps) +
                         " steps: dt = " + format_double(state.dt) +
                         " violates the stability bound " + bound_text(state.dx, state.v_max, 1.0));
}

std::vector<double> initial_density(const LeapFrogState& state, Exec exec) {
  // I^{-1/2} = I^{1/2} + dt H R^0, so R^2 + I^{-1/2} I^{1/2} is the conserved form.
  std::vector<double> h(state.re.size());
  kernels::apply_hamiltonian(exec, state.re, state.v, state.dx, h);
  std::vector<double> rho(state.re.size(), 0.0);
  for (std::size_t j = 1; j + 1 < rho.size(); ++j) {
    const double before = state.im[j] + state.dt * h[j];
    rho[j] = state.re[j] * state.re[j] + before * state.im[j];
  }
  return rho;
}

namespace {

double discrete_norm(std::span<const double> rho, double dx) {
  double s = 0.0;
  for (double r : rho) s += r;
  return s * dx;
}

double weighted_sum(std::span<const double> w, std::span<const double> rho) {
  double s = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) s += w[j] * rho[j];
  return s;
}

}  // namespace

LeapFrogResult evolve(const LeapFrogConfig& cfg, const AnyPotential& pot, Exec exec) {
  LeapFrogResult out;
  out.warnings = validate(cfg, pot);
  LeapFrogState state = init_packet(cfg, pot);
  const StepPlan plan = plan_steps(cfg, state.v_max);
  const auto n_obs = static_cast<std::size_t>(std::llround(cfg.t_end / (plan.dt * plan.stride)));
  const std::size_t total_steps = n_obs * plan.stride;
  const double dt_obs = plan.dt * static_cast<double>(plan.stride);

  std::vector<std::size_t> snap_steps;
  for (double t : cfg.snapshot_times)
    snap_steps.push_back(static_cast<std::size_t>(std::llround(t / plan.dt)));

  const std::vector<double> w_in = interval_weights(state.x, cfg.x_in);
  double peak0 = 0.0;
  for (std::size_t j = 0; j < state.re.size(); ++j)
    peak0 = std::max(peak0, std::abs(state.re[j]) + std::abs(state.im[j]));

  DecaySeries& s = out.series;
  s.method = "leapfrog";
  s.x_in = cfg.x_in;
  s.dt_obs = dt_obs;
  s.times.reserve(n_obs + 1);
  s.p_in.reserve(n_obs + 1);

  auto record = [&](std::size_t step_index, const std::vector<double>& rho) {
    const double t = plan.dt * static_cast<double>(step_index);
    if (step_index % plan.stride == 0) {
      s.times.push_back(dt_obs * static_cast<double>(step_index / plan.stride));
      s.p_in.push_back(weighted_sum(w_in, rho));
      out.norms.push_back(discrete_norm(rho, state.dx));
    }
    for (std::size_t k = 0; k < snap_steps.size(); ++k)
      if (snap_steps[k] == step_index) out.snapshots.push_back({t, state.x, rho});
  };

  std::vector<double> rho = initial_density(state, exec);
  record(0, rho);
  for (std::size_t n = 1; n <= total_steps; ++n) {
    const bool observe = n % plan.stride == 0 ||
                         std::find(snap_steps.begin(), snap_steps.end(), n) != snap_steps.end();
    step(state, exec, observe ? std::span<double>(rho) : std::span<double>());
    if (n % kBlowupCheckInterval == 0) check_finite(state, peak0);
    if (observe) record(n, rho);
  }
  check_finite(state, peak0);

  // Snapshots in the order requested.
  std::stable_sort(out.snapshots.begin(), out.snapshots.end(),
                   [](const Snapshot& a, const Snapshot& b) { return a.time < b.time; });

  s.lambda = decay_parameter(s.p_in, dt_obs);
  const double n0 = out.norms.front();
  for (double nv : out.norms) out.norm_drift = std::max(out.norm_drift, std::abs(nv - n0) / n0);
  out.dt = plan.dt;
  out.steps = total_steps;

  s.metadata = {{"method", "leapfrog"},
                {"potential", describe(pot)},
                {"x_in", format_double(cfg.x_in)},
                {"dt_obs", format_double(dt_obs)},
                {"t_end", format_double(s.times.back())},
                {"dx", format_double(cfg.dx)},
                {"x_max", format_double(state.x.back())},
                {"dt", format_double(plan.dt)},
                {"steps", std::to_string(total_steps)},
                {"packet_x0", format_double(cfg.packet.x0)},
                {"packet_sigma", format_double(cfg.packet.sigma)},
                {"packet_k0", format_double(cfg.packet.k0)},
                {"norm_drift", format_double(out.norm_drift)}};
  return out;
}

}  // namespace qdecay
