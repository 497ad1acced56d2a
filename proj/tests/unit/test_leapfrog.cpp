#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include <omp.h>

#include "oracles.hpp"
#include "qdecay/error.hpp"
#include "qdecay/leapfrog.hpp"

using namespace qdecay;

namespace {

LeapFrogConfig small_config() {
  LeapFrogConfig c;
  c.dx = 0.02;
  c.x_max = 20.0;
  c.t_end = 2.0;
  c.dt_obs = 0.05;
  c.x_in = 1.5;
  return c;
}

const AnyPotential kBarrier = single_barrier(1.5, 2.25, 3.0);

}  // namespace

TEST_CASE("stability bound and step plan") {
  CHECK(stability_bound(0.01, 4.0) == doctest::Approx(1.0 / 10002.0));
  LeapFrogConfig c = small_config();
  const StepPlan p = plan_steps(c, 3.0);
  CHECK(p.dt <= 0.8 * stability_bound(0.02, 3.0));
  CHECK(p.dt * static_cast<double>(p.stride) == doctest::Approx(0.05).epsilon(1e-14));
  c.dt = 1e-4;
  CHECK(plan_steps(c, 3.0).stride == 500);
}

TEST_CASE("initial packet") {
  const LeapFrogConfig c = small_config();
  const LeapFrogState s = init_packet(c, kBarrier);
  CHECK(s.re.front() == 0.0);
  CHECK(s.re.back() == 0.0);
  double n2 = 0.0, peak = 0.0;
  for (std::size_t j = 0; j < s.x.size(); ++j) {
    n2 += s.re[j] * s.re[j];
    peak = std::max(peak, std::abs(s.re[j]));
  }
  // Real packet: the half step only adds O(dt) to the imaginary part.
  CHECK(n2 * c.dx == doctest::Approx(1.0).epsilon(1e-12));
  // Analytic amplitude at the wall is e^{-x0^2 / (4 sigma^2)} = e^{-4} of the peak.
  CHECK(s.re[1] / peak < std::exp(-3.8));
  const std::vector<double> rho = initial_density(s, Exec::serial);
  double norm = 0.0;
  for (double r : rho) norm += r;
  CHECK(norm * c.dx == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("norm is conserved") {
  const LeapFrogResult r = evolve(small_config(), kBarrier, Exec::serial);
  CHECK(r.norm_drift <= 1e-12);
  for (double p : r.series.p_in) CHECK(p <= 1.0 + 1e-9);
  CHECK(r.series.p_in.back() < r.series.p_in.front());
  CHECK(r.series.times.size() == 41);
}

TEST_CASE("discrete dispersion of a single mode") {
  LeapFrogState s;
  s.dx = 0.05;
  const std::size_t cells = 200;
  const double L = s.dx * cells;
  const double q = 7.0 * std::numbers::pi / L;
  s.dt = 0.001;
  s.x.resize(cells + 1);
  s.v.assign(cells + 1, 0.0);
  s.re.resize(cells + 1);
  s.im.resize(cells + 1);
  const double theta = oracle::staggered_phase(q, s.dx, s.dt);
  std::vector<double> mode(cells + 1);
  for (std::size_t j = 0; j <= cells; ++j) {
    s.x[j] = s.dx * j;
    mode[j] = std::sin(q * s.x[j]);
    s.re[j] = mode[j];
    s.im[j] = -std::sin(0.5 * theta) * mode[j];
  }
  mode.front() = mode.back() = 0.0;
  s.re.front() = s.re.back() = s.im.front() = s.im.back() = 0.0;
  const int n = 2000;
  for (int i = 0; i < n; ++i) step(s, Exec::serial);
  double err_r = 0.0, err_i = 0.0;
  for (std::size_t j = 0; j <= cells; ++j) {
    err_r = std::max(err_r, std::abs(s.re[j] - std::cos(n * theta) * mode[j]));
    err_i = std::max(err_i, std::abs(s.im[j] + std::sin((n + 0.5) * theta) * mode[j]));
  }
  CHECK(err_r <= 1e-10);
  CHECK(err_i <= 1e-10);
}

TEST_CASE("zero state stays zero") {
  LeapFrogState s = init_packet(small_config(), kBarrier);
  std::fill(s.re.begin(), s.re.end(), 0.0);
  std::fill(s.im.begin(), s.im.end(), 0.0);
  for (int i = 0; i < 100; ++i) step(s, Exec::serial);
  for (std::size_t j = 0; j < s.re.size(); ++j) {
    CHECK(s.re[j] == 0.0);
    CHECK(s.im[j] == 0.0);
  }
}

TEST_CASE("unstable steps") {
  LeapFrogConfig c = small_config();
  const double bound = stability_bound(c.dx, 3.0);
  c.dt = 1.5 * bound;
  c.dt_obs = c.dt;
  c.t_end = 200.0 * c.dt;
  try {
    evolve(c, kBarrier, Exec::serial);
    FAIL("expected rejection");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("stability bound") != std::string::npos);
  }
  c.enforce_stability = false;
  try {
    evolve(c, kBarrier, Exec::serial);
    FAIL("expected blow-up");
  } catch (const NumericalError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("blow-up") != std::string::npos);
    CHECK(msg.find("1/dx^2 + v_max/2") != std::string::npos);
  }
}

TEST_CASE("configuration checks") {
  LeapFrogConfig c = small_config();
  c.packet.x0 = 1.0;
  CHECK_THROWS_AS(validate(c, kBarrier), ValidationError);
  c = small_config();
  c.x_in = 0.0;
  CHECK_THROWS_AS(validate(c, kBarrier), ValidationError);
  c = small_config();
  c.snapshot_times = {3.0};
  CHECK_THROWS_AS(validate(c, kBarrier), ValidationError);
  c = small_config();
  c.dt_safety = 1.5;
  CHECK_THROWS_AS(validate(c, kBarrier), ValidationError);
  c = small_config();
  c.t_end = 30.0;
  const auto warnings = validate(c, kBarrier);
  REQUIRE(warnings.size() == 1);
  CHECK(warnings[0].find("far-wall") != std::string::npos);
  c.x_max = 120.0;
  CHECK(validate(c, kBarrier).empty());
}

TEST_CASE("agrees with Crank-Nicolson") {
  LeapFrogConfig c = small_config();
  c.t_end = 1.0;
  c.dt_obs = 0.5;
  c.dt = 2e-5;
  c.snapshot_times = {1.0};
  // Start well away from the wall: the pinned node would otherwise cut a
  // visible kink into the packet and both schemes resolve it differently.
  c.packet.x0 = 3.0;
  const LeapFrogResult lf = evolve(c, kBarrier, Exec::serial);
  REQUIRE(lf.snapshots.size() == 1);

  const LeapFrogState s0 = init_packet(c, kBarrier);
  // Same initial packet, before the half step.
  std::vector<std::complex<double>> psi(s0.x.size());
  const auto& g = c.packet;
  double n2 = 0.0;
  for (std::size_t j = 1; j + 1 < psi.size(); ++j) {
    const double x = s0.x[j];
    psi[j] = std::exp(-(x - g.x0) * (x - g.x0) / (4.0 * g.sigma * g.sigma));
    n2 += std::norm(psi[j]);
  }
  for (auto& p : psi) p /= std::sqrt(n2 * c.dx);
  const oracle::CrankNicolson cn(s0.v, c.dx, 2e-5);
  for (int i = 0; i < 50000; ++i) cn.step(psi);
  double worst = 0.0, peak = 0.0;
  for (std::size_t j = 0; j < psi.size(); ++j) {
    worst = std::max(worst, std::abs(std::norm(psi[j]) - lf.snapshots[0].density[j]));
    peak = std::max(peak, std::norm(psi[j]));
  }
  CHECK(worst / peak <= 1e-4);
}

TEST_CASE("snapshots and series metadata") {
  LeapFrogConfig c = small_config();
  c.snapshot_times = {1.0, 0.0};
  const LeapFrogResult r = evolve(c, kBarrier, Exec::serial);
  REQUIRE(r.snapshots.size() == 2);
  CHECK(r.snapshots[0].time == 0.0);
  CHECK(r.snapshots[1].time == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.series.meta("method") == "leapfrog");
  CHECK(r.series.x_in == 1.5);
}

TEST_CASE("serial and parallel runs are identical") {
  const int saved = omp_get_max_threads();
  omp_set_num_threads(4);
  LeapFrogConfig c = small_config();
  c.snapshot_times = {1.0};
  const AnyPotential ho = CutHarmonicSpec{0.28, 6.0};
  const LeapFrogResult a = evolve(c, ho, Exec::serial);
  const LeapFrogResult b = evolve(c, ho, Exec::parallel);
  omp_set_num_threads(saved);
  CHECK(a.series.p_in == b.series.p_in);
  CHECK(a.norms == b.norms);
  CHECK(a.snapshots[0].density == b.snapshots[0].density);
}
