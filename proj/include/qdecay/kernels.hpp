#ifndef QDECAY_KERNELS_HPP
#define QDECAY_KERNELS_HPP

// Data-parallel inner loops. Every kernel has a serial reference path and an
// OpenMP path selected by `Exec`; both evaluate exactly the same expressions
// per output element (no reductions), so results are bit-identical.

#include <cstddef>
#include <span>

namespace qdecay {

enum class Exec { serial, parallel };

/// Number of OpenMP threads the parallel paths will use (1 without OpenMP).
int parallel_threads();

namespace kernels {

/// out_j = (H u)_j = -(u_{j+1} - 2u_j + u_{j-1}) / (2 dx^2) + v_j u_j on
/// interior nodes; boundary entries of `out` are set to 0.
void apply_hamiltonian(Exec exec, std::span<const double> u, std::span<const double> v, double dx,
                       std::span<double> out);

/// re_j += dt (H im)_j on interior nodes.
void leapfrog_real_update(Exec exec, std::span<double> re, std::span<const double> im,
                          std::span<const double> v, double dt, double dx);

/// im_j -= dt (H re)_j on interior nodes. When `density` is non-empty it
/// receives re_j^2 + im_old_j * im_new_j (zero on the boundary nodes).
void leapfrog_imag_update(Exec exec, std::span<double> im, std::span<const double> re,
                          std::span<const double> v, double dt, double dx,
                          std::span<double> density);

/// Interval probability for every time sample of an energy superposition.
///
/// `basis` is row-major [n_x][n_e]: basis[j*n_e + n] is the (already
/// weighted and normalized) real amplitude of energy node n at x node j.
/// For time t_s, psi_j = sum_n basis[j][n] exp(-i E_n t_s) and
/// out_s = sum_j x_weights_j |psi_j|^2. Parallel over time samples.
void survival_series(Exec exec, std::span<const double> basis, std::span<const double> energies,
                     std::span<const double> x_weights, std::span<const double> times,
                     std::span<double> out);

}  // namespace kernels
}  // namespace qdecay

#endif  // QDECAY_KERNELS_HPP
