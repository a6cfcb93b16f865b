#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <vector>

#include "sdd/kernels.hpp"

using namespace sdd;

namespace {
std::vector<double> random_vec(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    std::vector<double> v(n);
    for (double& x : v) x = unif(rng);
    return v;
}
}  // namespace

TEST_CASE("parallel kernels match the serial reference exactly") {
    std::mt19937_64 rng(42);
    for (std::size_t m : {3u, 17u, 64u, 257u, 1024u}) {
        const std::size_t n = std::max<std::size_t>(1, m / 2);
        const std::vector<double> basis = random_vec(rng, n * m);
        const std::vector<double> basis_t = random_vec(rng, n * m);
        const std::vector<double> nodal = random_vec(rng, m);
        const std::vector<double> coeff = random_vec(rng, n);
        const std::vector<double> w = random_vec(rng, m);
        const std::vector<double> tab = random_vec(rng, 2 * m + 1);
        const double dx = 0.01;

        std::vector<double> c1(n), c2(n);
        kernels::serial::analyze(basis, n, m, dx, nodal, c1);
        kernels::analyze(basis, n, m, dx, nodal, c2);
        for (std::size_t k = 0; k < n; ++k) CHECK(c1[k] == c2[k]);

        std::vector<double> g1(m), g2(m);
        kernels::serial::synthesize(basis_t, n, m, coeff, g1);
        kernels::synthesize(basis_t, n, m, coeff, g2);
        for (std::size_t i = 0; i < m; ++i) CHECK(g1[i] == g2[i]);

        kernels::serial::convolve(w, 0.37, tab, dx, g1);
        kernels::convolve(w, 0.37, tab, dx, g2);
        for (std::size_t i = 0; i < m; ++i) CHECK(g1[i] == g2[i]);
    }
}

TEST_CASE("convolve computes the trapezoid sum") {
    // m = 2 interior nodes, hand-evaluated.
    const std::vector<double> w = {2.0, 3.0};
    const std::vector<double> tab = {0.1, 0.2, 0.3, 0.4, 0.5};  // f(k dx), k = -2..2
    const double wb = 1.0;
    const double dx = 0.5;
    std::vector<double> g(2);
    kernels::serial::convolve(w, wb, tab, dx, g);
    // i=1: 0.5*1*tab[3] + 2*tab[2] + 3*tab[1] + 0.5*1*tab[1? i-(m+1)+m = 0] -> tab[0]
    const double g1 = dx * (0.5 * wb * tab[3] + w[0] * tab[2] + w[1] * tab[1] + 0.5 * wb * tab[0]);
    const double g2 = dx * (0.5 * wb * tab[4] + w[0] * tab[3] + w[1] * tab[2] + 0.5 * wb * tab[1]);
    CHECK(g[0] == doctest::Approx(g1).epsilon(1e-15));
    CHECK(g[1] == doctest::Approx(g2).epsilon(1e-15));
}
