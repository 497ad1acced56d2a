#include "qdecay/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qdecay/error.hpp"
#include "qdecay/format.hpp"

namespace qdecay {

EnergyGrid make_energy_grid(double e_min, double e_max, std::size_t n_points) {
  if (!(e_min >= 0.0)) throw ValidationError("energy grid needs e_min >= 0");
  if (!(e_max > e_min)) throw ValidationError("energy grid needs e_max > e_min");
  if (n_points < 2) throw ValidationError("energy grid needs at least 2 points");
  EnergyGrid g;
  g.e_min = e_min;
  g.e_max = e_max;
  g.n_points = n_points;
  const double de = g.spacing();
  g.nodes.resize(n_points);
  g.weights.assign(n_points, de);
  for (std::size_t n = 0; n < n_points; ++n) g.nodes[n] = e_min + de * static_cast<double>(n);
  g.nodes.back() = e_max;
  g.weights.front() = 0.5 * de;
  g.weights.back() = 0.5 * de;
  return g;
}

double default_energy_cutoff(double v_max) { return 3.0 * v_max; }

double validity_horizon(const EnergyGrid& grid) {
  return 0.5 * (2.0 * std::numbers::pi / grid.spacing());
}

SpectralTable build_spectral_table(const PotentialSpec& pot, const EnergyGrid& grid, Exec exec) {
  SpectralTable table;
  table.grid = grid;
  const auto n = static_cast<std::ptrdiff_t>(grid.n_points);
  table.weight.resize(grid.n_points);
  table.states.resize(grid.n_points);
  auto solve_one = [&](std::ptrdiff_t i) {
    table.states[i] = solve_stationary(pot, grid.nodes[i]);
    table.weight[i] = spectral_weight(table.states[i]);
  };
  if (exec == Exec::parallel) {
    // Exceptions may not cross the OpenMP region boundary.
    std::vector<std::string> errors(grid.n_points);
#pragma omp parallel for schedule(dynamic, 16)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      try {
        solve_one(i);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
    for (const auto& e : errors)
      if (!e.empty()) throw NumericalError(e);
  } else {
    for (std::ptrdiff_t i = 0; i < n; ++i) solve_one(i);
  }
  return table;
}

SpatialGrid make_spatial_grid(double dx, double x_max) {
  if (!(dx > 0.0)) throw ValidationError("spatial grid needs dx > 0");
  if (!(x_max > dx)) throw ValidationError("spatial grid needs x_max > dx");
  const auto cells = static_cast<std::size_t>(std::llround(x_max / dx));
  SpatialGrid g;
  g.dx = dx;
  g.nodes.resize(cells + 1);
  for (std::size_t j = 0; j <= cells; ++j) g.nodes[j] = dx * static_cast<double>(j);
  return g;
}

namespace {

// Per-energy coefficient w_n phi_n / A_n: the canonical (A = 1) state times
// its quadrature weight.
std::vector<double> superposition_coefficients(const SpectralTable& table) {
  std::vector<double> c(table.grid.n_points);
  for (std::size_t n = 0; n < c.size(); ++n)
    c[n] = table.grid.weights[n] * table.weight[n] / table.states[n].amplitude;
  return c;
}

double trapezoid(std::span<const double> f, double dx) {
  if (f.size() < 2) return 0.0;
  double s = 0.5 * (f.front() + f.back());
  for (std::size_t j = 1; j + 1 < f.size(); ++j) s += f[j];
  return s * dx;
}

}  // namespace

WaveField synthesize(const SpectralTable& table, std::span<const double> x, double t, Exec exec) {
  if (!(t >= 0.0)) throw DomainError("synthesis at negative time");
  if (t > 0.0 && !table.norm_constant)
    throw ContractError("synthesize at t > 0 requires a normalized table (call normalize first)");
  const double norm = table.norm_constant.value_or(1.0);
  const std::vector<double> coef = superposition_coefficients(table);
  const std::size_t ne = coef.size();
  std::vector<double> cr(ne), ci(ne);
  for (std::size_t n = 0; n < ne; ++n) {
    const double phase = table.grid.nodes[n] * t;
    cr[n] = norm * coef[n] * std::cos(phase);
    ci[n] = -norm * coef[n] * std::sin(phase);
  }
  WaveField field;
  field.time = t;
  field.x.assign(x.begin(), x.end());
  field.psi.resize(x.size());
  const auto nx = static_cast<std::ptrdiff_t>(x.size());
  auto one = [&](std::ptrdiff_t j) {
    double re = 0.0, im = 0.0;
    for (std::size_t n = 0; n < ne; ++n) {
      const double u = eval_state_real(table.states[n], x[j]);
      re += cr[n] * u;
      im += ci[n] * u;
    }
    field.psi[j] = {re, im};
  };
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t j = 0; j < nx; ++j) one(j);
  } else {
    for (std::ptrdiff_t j = 0; j < nx; ++j) one(j);
  }
  return field;
}

void normalize(SpectralTable& table, const SpatialGrid& grid, Exec exec) {
  table.norm_constant.reset();
  const WaveField f0 = synthesize(table, grid.nodes, 0.0, exec);
  const double n2 = total_probability(f0);
  if (!(n2 > 0.0) || !std::isfinite(n2))
    throw NumericalError("superposition has zero norm at t = 0");
  table.norm_constant = 1.0 / std::sqrt(n2);
}

std::vector<double> interval_weights(std::span<const double> x, double x_in) {
  if (x.size() < 2) throw DomainError("interval integral needs at least two nodes");
  const double dx = x[1] - x[0];
  if (!(x_in >= 0.0) || x_in > x.back() * (1.0 + 1e-12))
    throw DomainError("x_in = " + format_double(x_in) + " outside the grid [0, " +
                      format_double(x.back()) + "]");
  const double ratio = x_in / dx;
  auto m = static_cast<std::size_t>(std::floor(ratio + 1e-9));
  m = std::min(m, x.size() - 1);
  const double h = x_in - x[m];
  std::vector<double> w(m + 1, dx);
  w.front() = 0.5 * dx;
  if (m == 0) w.front() = 0.0;
  else w.back() = 0.5 * dx;
  if (h > 1e-12 * std::max(1.0, x_in) && m + 1 < x.size()) {
    const double theta = h / dx;
    w.back() += 0.5 * h * (2.0 - theta);
    w.push_back(0.5 * h * theta);
  }
  return w;
}

double survival_probability(const WaveField& field, double x_in) {
  const std::vector<double> w = interval_weights(field.x, x_in);
  double s = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) s += w[j] * std::norm(field.psi[j]);
  return s;
}

double total_probability(const WaveField& field) {
  std::vector<double> rho(field.psi.size());
  for (std::size_t j = 0; j < rho.size(); ++j) rho[j] = std::norm(field.psi[j]);
  const double dx = field.x.size() > 1 ? field.x[1] - field.x[0] : 0.0;
  return trapezoid(rho, dx);
}

std::vector<double> decay_parameter(std::span<const double> p, double dt) {
  if (p.size() < 3) throw DomainError("decay parameter needs at least 3 samples");
  if (!(dt > 0.0)) throw DomainError("decay parameter needs dt > 0");
  std::vector<double> lp(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!(p[i] > 0.0))
      throw DomainError("survival probability " + format_double(p[i]) + " <= 0 at sample " +
                        std::to_string(i) + "; truncate the series before underflow");
    lp[i] = std::log(p[i]);
  }
  const std::size_t n = p.size();
  std::vector<double> lambda(n);
  for (std::size_t i = 1; i + 1 < n; ++i) lambda[i] = -(lp[i + 1] - lp[i - 1]) / (2.0 * dt);
  lambda[0] = -(-3.0 * lp[0] + 4.0 * lp[1] - lp[2]) / (2.0 * dt);
  lambda[n - 1] = -(3.0 * lp[n - 1] - 4.0 * lp[n - 2] + lp[n - 3]) / (2.0 * dt);
  return lambda;
}

std::vector<double> rebuild_survival(double p0, double p1, std::span<const double> lambda,
                                     double dt) {
  std::vector<double> p(lambda.size());
  if (p.empty()) return p;
  p[0] = p0;
  if (p.size() > 1) p[1] = p1;
  for (std::size_t i = 1; i + 1 < p.size(); ++i) p[i + 1] = p[i - 1] * std::exp(-2.0 * dt * lambda[i]);
  return p;
}

std::optional<std::string> DecaySeries::meta(const std::string& key) const {
  for (const auto& [k, v] : metadata)
    if (k == key) return v;
  return std::nullopt;
}

std::vector<double> observation_times(double t_end, double dt_obs) {
  if (!(dt_obs > 0.0)) throw ValidationError("dt_obs must be > 0");
  if (!(t_end > 0.0)) throw ValidationError("t_end must be > 0");
  const auto steps = static_cast<std::size_t>(std::llround(t_end / dt_obs));
  std::vector<double> t(steps + 1);
  for (std::size_t i = 0; i <= steps; ++i) t[i] = dt_obs * static_cast<double>(i);
  return t;
}

void validate(const AnalyticParams& p) {
  if (!(p.e_min >= 0.0)) throw ValidationError("e_min must be >= 0");
  if (p.e_max != 0.0 && !(p.e_max > p.e_min)) throw ValidationError("e_max must exceed e_min");
  if (p.energy_points < 2) throw ValidationError("energy_points must be >= 2");
  if (!(p.dx > 0.0) || !(p.x_max > p.dx)) throw ValidationError("need 0 < dx < x_max");
  if (!(p.dt_obs > 0.0) || !(p.t_end >= 2.0 * p.dt_obs))
    throw ValidationError("need dt_obs > 0 and t_end >= 2 dt_obs");
  if (!(p.x_in > 0.0) || p.x_in > p.x_max) throw ValidationError("need 0 < x_in <= x_max");
}

AnalyticResult run_analytic(const PotentialSpec& pot, const AnalyticParams& params, double v_max,
                            Exec exec) {
  validate(params);
  const double e_max = params.e_max > 0.0 ? params.e_max : default_energy_cutoff(v_max);
  const EnergyGrid grid = make_energy_grid(params.e_min, e_max, params.energy_points);
  const double horizon = validity_horizon(grid);
  if (params.t_end > horizon)
    throw ValidationError("t_end = " + format_double(params.t_end) +
                          " exceeds the validity horizon pi/dE = " + format_double(horizon) +
                          "; add energy points");

  SpectralTable table = build_spectral_table(pot, grid, exec);
  const SpatialGrid space = make_spatial_grid(params.dx, params.x_max);
  normalize(table, space, exec);

  // Dense basis over the nodes that enter the [0, x_in] integral.
  const std::vector<double> xw = interval_weights(space.nodes, params.x_in);
  const std::size_t nx = xw.size();
  const std::size_t ne = grid.n_points;
  const std::vector<double> coef = superposition_coefficients(table);
  std::vector<double> basis(nx * ne);
  for (std::size_t j = 0; j < nx; ++j)
    for (std::size_t n = 0; n < ne; ++n)
      basis[j * ne + n] =
          *table.norm_constant * coef[n] * eval_state_real(table.states[n], space.nodes[j]);

  AnalyticResult out;
  out.validity_horizon = horizon;
  DecaySeries& s = out.series;
  s.method = "analytic";
  s.x_in = params.x_in;
  s.dt_obs = params.dt_obs;
  s.times = observation_times(params.t_end, params.dt_obs);
  s.p_in.resize(s.times.size());
  kernels::survival_series(exec, basis, grid.nodes, xw, s.times, s.p_in);
  s.lambda = decay_parameter(s.p_in, params.dt_obs);

  const WaveField f0 = synthesize(table, space.nodes, 0.0, exec);
  const std::size_t tail_start = space.nodes.size() * 9 / 10;
  double tail = 0.0;
  for (std::size_t j = tail_start; j < space.nodes.size(); ++j)
    tail += std::norm(f0.psi[j]) * space.dx;
  out.tail_mass = tail;
  const WaveField f_end = synthesize(table, space.nodes, s.times.back(), exec);
  out.norm_drift = std::abs(total_probability(f_end) - 1.0);

  s.metadata = {{"method", "analytic"},
                {"potential", describe(pot)},
                {"x_in", format_double(params.x_in)},
                {"dt_obs", format_double(params.dt_obs)},
                {"t_end", format_double(s.times.back())},
                {"e_min", format_double(grid.e_min)},
                {"e_max", format_double(grid.e_max)},
                {"energy_points", std::to_string(grid.n_points)},
                {"dx", format_double(params.dx)},
                {"x_max", format_double(space.x_max())},
                {"validity_horizon", format_double(horizon)},
                {"norm_drift", format_double(out.norm_drift)},
                {"tail_mass", format_double(out.tail_mass)}};
  return out;
}

}  // namespace qdecay
