#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "sdd/modal.hpp"

namespace sdd {

/// The 1D Dirichlet Laplacian on (0, L) through its eigen-decomposition:
/// lambda_k = (k*pi/L)^2, e_k(x) = sqrt(2/L) sin(k*pi*x/L), k = 1..N.
/// Carries a uniform interior quadrature grid x_i = i*dx, dx = L/(n_grid+1).
/// On that grid the discrete sine modes are exactly orthonormal under the
/// rectangle rule, so nodal<->modal transforms are projections, not fits.
/// Immutable after construction; all operations are pure.
class SpectralOperator {
public:
    SpectralOperator() = default;  // empty; populate via the builder

    double length() const { return length_; }
    std::size_t n_modes() const { return n_modes_; }
    std::size_t n_grid() const { return n_grid_; }
    double dx() const { return dx_; }
    double eigenvalue(std::size_t k) const { return eigenvalues_[k]; }  // k = 0..N-1
    const std::vector<double>& eigenvalues() const { return eigenvalues_; }
    const std::vector<double>& grid() const { return grid_; }

    /// e_{k+1}(x) for arbitrary x (not just grid nodes).
    double eigenfunction(std::size_t k, double x) const;

    friend SpectralOperator build_dirichlet_laplacian_1d(double L, std::size_t N,
                                                         std::size_t n_grid);

    const std::vector<double>& basis() const { return basis_; }      // N x M row-major
    const std::vector<double>& basis_t() const { return basis_t_; }  // M x N row-major

private:
    double length_ = 0.0;
    std::size_t n_modes_ = 0;
    std::size_t n_grid_ = 0;
    double dx_ = 0.0;
    std::vector<double> eigenvalues_;
    std::vector<double> grid_;
    std::vector<double> basis_;
    std::vector<double> basis_t_;
};

SpectralOperator build_dirichlet_laplacian_1d(double L, std::size_t N, std::size_t n_grid);
/// Convenience overload with n_grid = 4N.
SpectralOperator build_dirichlet_laplacian_1d(double L, std::size_t N);

/// w_k = exp(-(lambda_k + d) t) v_k. Contraction for every t >= 0, d >= 0.
ModalVector apply_semigroup(const SpectralOperator& op, double d, double t,
                            const ModalVector& v);

/// ||A^delta v|| = sqrt(sum lambda_k^{2 delta} v_k^2), delta in [0, 1].
double frac_power_norm(const SpectralOperator& op, double delta, const ModalVector& v);

/// Rectangle-rule sine analysis of grid values (length must equal n_grid).
ModalVector to_modal(const SpectralOperator& op, std::span<const double> nodal);

/// Evaluation of the modal sum on the grid.
std::vector<double> to_nodal(const SpectralOperator& op, const ModalVector& v);

}  // namespace sdd
