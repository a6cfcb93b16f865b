#include "sdd/kernels.hpp"

#include <cassert>
#include <cstdint>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace sdd::kernels {

void set_threads(int n) {
#ifdef _OPENMP
    if (n > 0) omp_set_num_threads(n);
#else
    (void)n;
#endif
}

int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

namespace serial {

void analyze(std::span<const double> basis, std::size_t n_modes,
             std::size_t n_grid, double dx, std::span<const double> nodal,
             std::span<double> coeff) {
    assert(basis.size() == n_modes * n_grid);
    for (std::size_t k = 0; k < n_modes; ++k) {
        const double* row = basis.data() + k * n_grid;
        double s = 0.0;
        for (std::size_t i = 0; i < n_grid; ++i) s += row[i] * nodal[i];
        coeff[k] = dx * s;
    }
}

void synthesize(std::span<const double> basis_t, std::size_t n_modes,
                std::size_t n_grid, std::span<const double> coeff,
                std::span<double> nodal) {
    assert(basis_t.size() == n_modes * n_grid);
    for (std::size_t i = 0; i < n_grid; ++i) {
        const double* col = basis_t.data() + i * n_modes;
        double s = 0.0;
        for (std::size_t k = 0; k < n_modes; ++k) s += coeff[k] * col[k];
        nodal[i] = s;
    }
}

void convolve(std::span<const double> w, double w_bnd,
              std::span<const double> tab, double dx, std::span<double> g) {
    const std::int64_t m = static_cast<std::int64_t>(w.size());
    assert(tab.size() == static_cast<std::size_t>(2 * m + 1));
    for (std::int64_t i = 1; i <= m; ++i) {
        double s = 0.5 * w_bnd * tab[i + m];  // j = 0 boundary node
        for (std::int64_t j = 1; j <= m; ++j) s += w[j - 1] * tab[i - j + m];
        s += 0.5 * w_bnd * tab[i - (m + 1) + m];  // j = m+1 boundary node
        g[i - 1] = dx * s;
    }
}

}  // namespace serial

void analyze(std::span<const double> basis, std::size_t n_modes,
             std::size_t n_grid, double dx, std::span<const double> nodal,
             std::span<double> coeff) {
    assert(basis.size() == n_modes * n_grid);
    const std::int64_t nk = static_cast<std::int64_t>(n_modes);
#pragma omp parallel for schedule(static) if (nk * static_cast<std::int64_t>(n_grid) > 4096)
    for (std::int64_t k = 0; k < nk; ++k) {
        const double* row = basis.data() + static_cast<std::size_t>(k) * n_grid;
        double s = 0.0;
        for (std::size_t i = 0; i < n_grid; ++i) s += row[i] * nodal[i];
        coeff[k] = dx * s;
    }
}

void synthesize(std::span<const double> basis_t, std::size_t n_modes,
                std::size_t n_grid, std::span<const double> coeff,
                std::span<double> nodal) {
    assert(basis_t.size() == n_modes * n_grid);
    const std::int64_t ni = static_cast<std::int64_t>(n_grid);
#pragma omp parallel for schedule(static) if (ni * static_cast<std::int64_t>(n_modes) > 4096)
    for (std::int64_t i = 0; i < ni; ++i) {
        const double* col = basis_t.data() + static_cast<std::size_t>(i) * n_modes;
        double s = 0.0;
        for (std::size_t k = 0; k < n_modes; ++k) s += coeff[k] * col[k];
        nodal[i] = s;
    }
}

void convolve(std::span<const double> w, double w_bnd,
              std::span<const double> tab, double dx, std::span<double> g) {
    const std::int64_t m = static_cast<std::int64_t>(w.size());
    assert(tab.size() == static_cast<std::size_t>(2 * m + 1));
#pragma omp parallel for schedule(static) if (m > 128)
    for (std::int64_t i = 1; i <= m; ++i) {
        double s = 0.5 * w_bnd * tab[i + m];
        for (std::int64_t j = 1; j <= m; ++j) s += w[j - 1] * tab[i - j + m];
        s += 0.5 * w_bnd * tab[i - (m + 1) + m];
        g[i - 1] = dx * s;
    }
}

}  // namespace sdd::kernels
