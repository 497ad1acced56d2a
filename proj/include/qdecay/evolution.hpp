#ifndef QDECAY_EVOLUTION_HPP
#define QDECAY_EVOLUTION_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qdecay/kernels.hpp"
#include "qdecay/potential.hpp"
#include "qdecay/stationary.hpp"

namespace qdecay {

/// Uniform trapezoid grid on [e_min, e_max].
struct EnergyGrid {
  double e_min = 0.0;
  double e_max = 0.0;
  std::size_t n_points = 0;
  std::vector<double> nodes;
  std::vector<double> weights;

  double spacing() const { return (e_max - e_min) / static_cast<double>(n_points - 1); }
};

EnergyGrid make_energy_grid(double e_min, double e_max, std::size_t n_points);

/// Default cutoff: three times the highest barrier.
double default_energy_cutoff(double v_max);

/// A uniform energy grid makes the superposition periodic in t with period
/// 2 pi / dE; results are trusted up to half of that.
double validity_horizon(const EnergyGrid& grid);

/// Spectral weights and solved states at every grid node.
struct SpectralTable {
  EnergyGrid grid;
  std::vector<double> weight;
  std::vector<StationaryState> states;
  /// Set by normalize(); multiplies every synthesized amplitude.
  std::optional<double> norm_constant;
};

SpectralTable build_spectral_table(const PotentialSpec& pot, const EnergyGrid& grid,
                                   Exec exec = Exec::parallel);

/// Uniform nodes 0, dx, ..., x_max.
struct SpatialGrid {
  double dx = 0.0;
  std::vector<double> nodes;

  double x_max() const { return nodes.back(); }
};

SpatialGrid make_spatial_grid(double dx, double x_max);

struct WaveField {
  std::vector<double> x;
  std::vector<cplx> psi;
  double time = 0.0;
};

/// Fixes the global constant so that the t = 0 superposition has unit norm
/// on `grid`.
void normalize(SpectralTable& table, const SpatialGrid& grid, Exec exec = Exec::parallel);

/// psi(x, t) = N sum_n w_n phi_n psi_n(x) exp(-i E_n t). For t > 0 the table
/// must be normalized (ContractError otherwise); at t = 0 an unnormalized
/// table yields the raw sum (N = 1).
WaveField synthesize(const SpectralTable& table, std::span<const double> x, double t,
                     Exec exec = Exec::parallel);

/// Trapezoid integral of |psi|^2 over [0, x_in]; a partial last cell uses
/// linear interpolation of |psi|^2. Throws DomainError outside the grid.
double survival_probability(const WaveField& field, double x_in);

/// Trapezoid integral of |psi|^2 over the whole field.
double total_probability(const WaveField& field);

/// Trapezoid weights for integrating samples on uniform `x` over [0, x_in];
/// the returned weights span the nodes needed (including the one just past
/// x_in when x_in falls inside a cell).
std::vector<double> interval_weights(std::span<const double> x, double x_in);

/// lambda_n = -(ln p_{n+1} - ln p_{n-1}) / (2 dt), second-order one-sided at
/// the ends. Throws DomainError for any p <= 0 or fewer than 3 samples.
std::vector<double> decay_parameter(std::span<const double> p, double dt);

/// Inverts decay_parameter on the interior: p_{n+1} = p_{n-1} exp(-2 dt lambda_n),
/// seeded with the first two samples.
std::vector<double> rebuild_survival(double p0, double p1, std::span<const double> lambda,
                                     double dt);

/// Time series of the interval survival probability and its decay rate.
struct DecaySeries {
  std::vector<double> times;
  std::vector<double> p_in;
  std::vector<double> lambda;
  double x_in = 0.0;
  double dt_obs = 0.0;
  std::string method;  // "analytic" or "leapfrog"
  /// Run parameters written as `# key=value` comment lines.
  std::vector<std::pair<std::string, std::string>> metadata;

  std::optional<std::string> meta(const std::string& key) const;
};

/// Uniform observation times 0, dt_obs, ..., t_end (t_end rounded to a
/// whole number of steps).
std::vector<double> observation_times(double t_end, double dt_obs);

struct AnalyticParams {
  double e_min = 0.0;
  double e_max = 0.0;  // 0: default_energy_cutoff
  std::size_t energy_points = 2000;
  double dx = 0.01;
  double x_max = 40.0;
  double t_end = 30.0;
  double dt_obs = 0.05;
  double x_in = 0.0;
};

struct AnalyticResult {
  DecaySeries series;
  double validity_horizon = 0.0;
  double norm_drift = 0.0;  // |norm(t_end) - 1| on [0, x_max]
  double tail_mass = 0.0;   // t = 0 probability in the outer tenth of [0, x_max]
};

/// Checks grids, window and horizon; throws ValidationError.
void validate(const AnalyticParams& params);

/// Full analytic pipeline: table, normalization, P_in(t), lambda(t).
/// `v_max` sets the default energy cutoff.
AnalyticResult run_analytic(const PotentialSpec& pot, const AnalyticParams& params, double v_max,
                            Exec exec = Exec::parallel);

}  // namespace qdecay

#endif  // QDECAY_EVOLUTION_HPP
