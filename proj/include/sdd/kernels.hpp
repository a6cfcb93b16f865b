#pragma once

#include <cstddef>
#include <span>

// Low-level data-parallel kernels behind the basis transforms and the
// spatial convolution. Each output element is reduced in a fixed serial
// order, so results are identical for any thread count; OpenMP only
// distributes independent output elements. The serial namespace keeps the
// plain-loop reference used by the equivalence tests and the benchmark.

namespace sdd::kernels {

/// Number of worker threads the parallel kernels will use (OpenMP).
/// 0 = library default.
void set_threads(int n);
int max_threads();

/// analyze: coeff[k] = dx * sum_i basis[k*n_grid + i] * nodal[i]
/// (quadrature inner products against the basis rows).
void analyze(std::span<const double> basis, std::size_t n_modes,
             std::size_t n_grid, double dx, std::span<const double> nodal,
             std::span<double> coeff);

/// synthesize: nodal[i] = sum_k coeff[k] * basis_t[i*n_modes + k]
/// (basis_t is the transposed eigenfunction table).
void synthesize(std::span<const double> basis_t, std::size_t n_modes,
                std::size_t n_grid, std::span<const double> coeff,
                std::span<double> nodal);

/// Trapezoid convolution on the interior grid with Dirichlet endpoints:
///   g[i] = dx * ( w_bnd/2 * tab[i+1 - 0] + sum_{j=1..M} w[j-1]*tab[i-j ...]
///               + w_bnd/2 * tab[i+1 - (M+1)] )
/// where tab[k + M] holds f(k*dx) for k in [-M, M], i in [1..M] indexes the
/// interior nodes, and w_bnd is the integrand value at both boundary nodes.
void convolve(std::span<const double> w, double w_bnd,
              std::span<const double> tab, double dx, std::span<double> g);

namespace serial {
void analyze(std::span<const double> basis, std::size_t n_modes,
             std::size_t n_grid, double dx, std::span<const double> nodal,
             std::span<double> coeff);
void synthesize(std::span<const double> basis_t, std::size_t n_modes,
                std::size_t n_grid, std::span<const double> coeff,
                std::span<double> nodal);
void convolve(std::span<const double> w, double w_bnd,
              std::span<const double> tab, double dx, std::span<double> g);
}  // namespace serial

}  // namespace sdd::kernels
