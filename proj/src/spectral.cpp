#include "sdd/spectral.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "sdd/kernels.hpp"

namespace sdd {

double SpectralOperator::eigenfunction(std::size_t k, double x) const {
    const double pi = std::numbers::pi;
    return std::sqrt(2.0 / length_) * std::sin((k + 1) * pi * x / length_);
}

SpectralOperator build_dirichlet_laplacian_1d(double L, std::size_t N, std::size_t n_grid) {
    if (!(L > 0.0)) throw std::invalid_argument("spectral: L must be positive");
    if (N < 1) throw std::invalid_argument("spectral: N must be >= 1");
    if (n_grid < 2 * N)
        throw std::invalid_argument("spectral: n_grid must be >= 2N to resolve the highest mode");

    SpectralOperator op;
    op.length_ = L;
    op.n_modes_ = N;
    op.n_grid_ = n_grid;
    op.dx_ = L / static_cast<double>(n_grid + 1);

    const double pi = std::numbers::pi;
    op.eigenvalues_.resize(N);
    for (std::size_t k = 0; k < N; ++k) {
        const double kk = static_cast<double>(k + 1) * pi / L;
        op.eigenvalues_[k] = kk * kk;
    }

    op.grid_.resize(n_grid);
    for (std::size_t i = 0; i < n_grid; ++i)
        op.grid_[i] = static_cast<double>(i + 1) * op.dx_;

    op.basis_.resize(N * n_grid);
    op.basis_t_.resize(N * n_grid);
    const double amp = std::sqrt(2.0 / L);
    for (std::size_t k = 0; k < N; ++k)
        for (std::size_t i = 0; i < n_grid; ++i) {
            const double v = amp * std::sin((k + 1) * pi * op.grid_[i] / L);
            op.basis_[k * n_grid + i] = v;
            op.basis_t_[i * N + k] = v;
        }
    return op;
}

SpectralOperator build_dirichlet_laplacian_1d(double L, std::size_t N) {
    return build_dirichlet_laplacian_1d(L, N, 4 * N);
}

ModalVector apply_semigroup(const SpectralOperator& op, double d, double t,
                            const ModalVector& v) {
    if (t < 0.0) throw std::invalid_argument("apply_semigroup: t must be >= 0");
    if (d < 0.0) throw std::invalid_argument("apply_semigroup: d must be >= 0");
    if (v.size() != op.n_modes())
        throw std::invalid_argument("apply_semigroup: modal size mismatch");
    ModalVector w(v.size());
    for (std::size_t k = 0; k < v.size(); ++k)
        w[k] = std::exp(-(op.eigenvalue(k) + d) * t) * v[k];
    return w;
}

double frac_power_norm(const SpectralOperator& op, double delta, const ModalVector& v) {
    if (delta < 0.0 || delta > 1.0)
        throw std::invalid_argument("frac_power_norm: delta must be in [0, 1]");
    if (v.size() != op.n_modes())
        throw std::invalid_argument("frac_power_norm: modal size mismatch");
    double s = 0.0;
    for (std::size_t k = 0; k < v.size(); ++k)
        s += std::pow(op.eigenvalue(k), 2.0 * delta) * v[k] * v[k];
    return std::sqrt(s);
}

ModalVector to_modal(const SpectralOperator& op, std::span<const double> nodal) {
    if (nodal.size() != op.n_grid())
        throw std::invalid_argument("to_modal: nodal length must equal n_grid");
    ModalVector v(op.n_modes());
    kernels::analyze(op.basis(), op.n_modes(), op.n_grid(), op.dx(), nodal,
                     std::span<double>(v.coeffs()));
    return v;
}

std::vector<double> to_nodal(const SpectralOperator& op, const ModalVector& v) {
    if (v.size() != op.n_modes())
        throw std::invalid_argument("to_nodal: modal size mismatch");
    std::vector<double> nodal(op.n_grid());
    kernels::synthesize(op.basis_t(), op.n_modes(), op.n_grid(),
                        std::span<const double>(v.coeffs()), nodal);
    return nodal;
}

}  // namespace sdd
