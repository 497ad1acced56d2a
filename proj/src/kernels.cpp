#include "qdecay/kernels.hpp"

#include <cmath>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace qdecay {

int parallel_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

namespace kernels {

namespace {

inline double hamiltonian_at(const double* u, const double* v, std::ptrdiff_t j, double half_inv_dx2) {
  return -(u[j + 1] - 2.0 * u[j] + u[j - 1]) * half_inv_dx2 + v[j] * u[j];
}

}  // namespace

void apply_hamiltonian(Exec exec, std::span<const double> u, std::span<const double> v, double dx,
                       std::span<double> out) {
  const auto n = static_cast<std::ptrdiff_t>(u.size());
  const double h = 0.5 / (dx * dx);
  const double* up = u.data();
  const double* vp = v.data();
  double* op = out.data();
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t j = 1; j < n - 1; ++j) op[j] = hamiltonian_at(up, vp, j, h);
  } else {
    for (std::ptrdiff_t j = 1; j < n - 1; ++j) op[j] = hamiltonian_at(up, vp, j, h);
  }
  out.front() = 0.0;
  out.back() = 0.0;
}

void leapfrog_real_update(Exec exec, std::span<double> re, std::span<const double> im,
                          std::span<const double> v, double dt, double dx) {
  const auto n = static_cast<std::ptrdiff_t>(re.size());
  const double h = 0.5 / (dx * dx);
  double* rp = re.data();
  const double* ip = im.data();
  const double* vp = v.data();
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t j = 1; j < n - 1; ++j) rp[j] += dt * hamiltonian_at(ip, vp, j, h);
  } else {
    for (std::ptrdiff_t j = 1; j < n - 1; ++j) rp[j] += dt * hamiltonian_at(ip, vp, j, h);
  }
}

void leapfrog_imag_update(Exec exec, std::span<double> im, std::span<const double> re,
                          std::span<const double> v, double dt, double dx,
                          std::span<double> density) {
  const auto n = static_cast<std::ptrdiff_t>(im.size());
  const double h = 0.5 / (dx * dx);
  double* ip = im.data();
  const double* rp = re.data();
  const double* vp = v.data();
  if (density.empty()) {
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
      for (std::ptrdiff_t j = 1; j < n - 1; ++j) ip[j] -= dt * hamiltonian_at(rp, vp, j, h);
    } else {
      for (std::ptrdiff_t j = 1; j < n - 1; ++j) ip[j] -= dt * hamiltonian_at(rp, vp, j, h);
    }
    return;
  }
  double* dp = density.data();
  auto body = [=](std::ptrdiff_t j) {
    const double old = ip[j];
    const double updated = old - dt * hamiltonian_at(rp, vp, j, h);
    ip[j] = updated;
    dp[j] = rp[j] * rp[j] + old * updated;
  };
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t j = 1; j < n - 1; ++j) body(j);
  } else {
    for (std::ptrdiff_t j = 1; j < n - 1; ++j) body(j);
  }
  density.front() = 0.0;
  density.back() = 0.0;
}

namespace {

double survival_at(std::span<const double> basis, std::span<const double> energies,
                   std::span<const double> x_weights, double t, std::vector<double>& cos_t,
                   std::vector<double>& sin_t) {
  const std::size_t ne = energies.size();
  for (std::size_t n = 0; n < ne; ++n) {
    const double phase = energies[n] * t;
    cos_t[n] = std::cos(phase);
    sin_t[n] = std::sin(phase);
  }
  double total = 0.0;
  for (std::size_t j = 0; j < x_weights.size(); ++j) {
    const double* row = basis.data() + j * ne;
    double re = 0.0, im = 0.0;
    for (std::size_t n = 0; n < ne; ++n) {
      re += row[n] * cos_t[n];
      im -= row[n] * sin_t[n];
    }
    total += x_weights[j] * (re * re + im * im);
  }
  return total;
}

}  // namespace

void survival_series(Exec exec, std::span<const double> basis, std::span<const double> energies,
                     std::span<const double> x_weights, std::span<const double> times,
                     std::span<double> out) {
  const auto nt = static_cast<std::ptrdiff_t>(times.size());
  const std::size_t ne = energies.size();
  if (exec == Exec::parallel) {
#pragma omp parallel
    {
      std::vector<double> c(ne), s(ne);
#pragma omp for schedule(static)
      for (std::ptrdiff_t i = 0; i < nt; ++i)
        out[i] = survival_at(basis, energies, x_weights, times[i], c, s);
    }
  } else {
    std::vector<double> c(ne), s(ne);
    for (std::ptrdiff_t i = 0; i < nt; ++i)
      out[i] = survival_at(basis, energies, x_weights, times[i], c, s);
  }
}

}  // namespace kernels
}  // namespace qdecay
