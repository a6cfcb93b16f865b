#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "sdd/spectral.hpp"

using namespace sdd;
namespace {
const double pi = std::numbers::pi;

ModalVector random_modal(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    ModalVector v(n);
    for (std::size_t k = 0; k < n; ++k) v[k] = unif(rng);
    return v;
}
}  // namespace

TEST_CASE("Dirichlet eigenvalues") {
    const auto op = build_dirichlet_laplacian_1d(pi, 3);
    CHECK(op.eigenvalue(0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(op.eigenvalue(1) == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(op.eigenvalue(2) == doctest::Approx(9.0).epsilon(1e-14));

    const auto op2 = build_dirichlet_laplacian_1d(1.0, 2);
    CHECK(op2.eigenvalue(0) == doctest::Approx(pi * pi).epsilon(1e-14));
    CHECK(op2.eigenvalue(1) == doctest::Approx(4.0 * pi * pi).epsilon(1e-14));

    CHECK(op.dx() == doctest::Approx(pi / 13.0).epsilon(1e-15));  // n_grid = 12 default
}

TEST_CASE("constructor validation") {
    CHECK_THROWS_AS(build_dirichlet_laplacian_1d(0.0, 4), std::invalid_argument);
    CHECK_THROWS_AS(build_dirichlet_laplacian_1d(-1.0, 4), std::invalid_argument);
    CHECK_THROWS_AS(build_dirichlet_laplacian_1d(1.0, 0), std::invalid_argument);
    CHECK_THROWS_AS(build_dirichlet_laplacian_1d(1.0, 4, 7), std::invalid_argument);  // < 2N
}

TEST_CASE("discrete Gram matrix of the eigenfunctions is the identity") {
    const auto op = build_dirichlet_laplacian_1d(pi, 16, 64);
    double max_off = 0.0, max_diag_err = 0.0;
    for (std::size_t j = 0; j < 16; ++j)
        for (std::size_t k = 0; k < 16; ++k) {
            double s = 0.0;
            for (std::size_t i = 0; i < op.n_grid(); ++i)
                s += op.basis()[j * op.n_grid() + i] * op.basis()[k * op.n_grid() + i] * op.dx();
            if (j == k)
                max_diag_err = std::max(max_diag_err, std::abs(s - 1.0));
            else
                max_off = std::max(max_off, std::abs(s));
        }
    CHECK(max_off < 1e-10);
    CHECK(max_diag_err < 1e-10);
}

TEST_CASE("semigroup basics") {
    const auto op = build_dirichlet_laplacian_1d(pi, 4);
    ModalVector v(4);
    v[0] = 1.0;

    SUBCASE("identity at t = 0") {
        const ModalVector w = apply_semigroup(op, 0.7, 0.0, v);
        for (std::size_t k = 0; k < 4; ++k) CHECK(w[k] == v[k]);
    }
    SUBCASE("first mode decays at rate lambda_1 = 1") {
        const ModalVector w = apply_semigroup(op, 0.0, 1.0, v);
        CHECK(w[0] == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
    }
    SUBCASE("negative time rejected") {
        CHECK_THROWS_AS(apply_semigroup(op, 0.0, -0.1, v), std::invalid_argument);
    }
}

TEST_CASE("semigroup contraction and composition law") {
    const auto op = build_dirichlet_laplacian_1d(2.5, 6);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> tdist(0.0, 2.0);
    for (int trial = 0; trial < 100; ++trial) {
        const ModalVector v = random_modal(rng, 6);
        const double t = tdist(rng);
        const double d = trial % 3 == 0 ? 0.0 : 0.4;
        const ModalVector w = apply_semigroup(op, d, t, v);
        CHECK(w.norm() <= v.norm() * (1.0 + 1e-14));
        CHECK(w.norm() <= std::exp(-(op.eigenvalue(0) + d) * t) * v.norm() * (1.0 + 1e-12));

        const double t1 = 0.3 * t, t2 = 0.7 * t;
        const ModalVector w2 = apply_semigroup(op, d, t2, apply_semigroup(op, d, t1, v));
        const ModalVector w12 = apply_semigroup(op, d, t1 + t2, v);
        for (std::size_t k = 0; k < 6; ++k)
            CHECK(w2[k] == doctest::Approx(w12[k]).epsilon(1e-12));
    }
}

TEST_CASE("fractional power norm") {
    const auto op = build_dirichlet_laplacian_1d(pi, 8);
    ModalVector e1(8);
    e1[0] = 1.0;
    SUBCASE("delta = 0 is the plain norm") {
        std::mt19937_64 rng(3);
        const ModalVector v = random_modal(rng, 8);
        CHECK(frac_power_norm(op, 0.0, v) == doctest::Approx(v.norm()).epsilon(1e-14));
    }
    SUBCASE("single mode closed form") {
        CHECK(frac_power_norm(op, 0.5, e1) == doctest::Approx(1.0).epsilon(1e-14));
    }
    SUBCASE("delta = 1/4 matches a direct summation oracle") {
        std::mt19937_64 rng(5);
        const ModalVector v = random_modal(rng, 8);
        long double s = 0.0L;
        for (std::size_t k = 0; k < 8; ++k) {
            const long double lam = static_cast<long double>(op.eigenvalue(k));
            s += std::pow(lam, 0.5L) * v[k] * v[k];
        }
        CHECK(frac_power_norm(op, 0.25, v) ==
              doctest::Approx(static_cast<double>(std::sqrt(s))).epsilon(1e-12));
    }
    SUBCASE("delta outside [0, 1] rejected") {
        CHECK_THROWS_AS(frac_power_norm(op, -0.1, e1), std::invalid_argument);
        CHECK_THROWS_AS(frac_power_norm(op, 1.1, e1), std::invalid_argument);
    }
}

TEST_CASE("nodal/modal transforms") {
    const auto op = build_dirichlet_laplacian_1d(pi, 8, 32);

    SUBCASE("samples of e_2 analyze to the unit coefficient vector") {
        std::vector<double> nodal(op.n_grid());
        for (std::size_t i = 0; i < op.n_grid(); ++i) nodal[i] = op.eigenfunction(1, op.grid()[i]);
        const ModalVector v = to_modal(op, nodal);
        for (std::size_t k = 0; k < 8; ++k)
            CHECK(v[k] == doctest::Approx(k == 1 ? 1.0 : 0.0).epsilon(1e-12));
    }
    SUBCASE("zero field gives zero coefficients") {
        const std::vector<double> nodal(op.n_grid(), 0.0);
        const ModalVector v = to_modal(op, nodal);
        for (std::size_t k = 0; k < 8; ++k) CHECK(v[k] == 0.0);
    }
    SUBCASE("band-limited round trip and Parseval") {
        std::mt19937_64 rng(17);
        for (int trial = 0; trial < 20; ++trial) {
            const ModalVector v = random_modal(rng, 8);
            const std::vector<double> nodal = to_nodal(op, v);
            const ModalVector w = to_modal(op, nodal);
            for (std::size_t k = 0; k < 8; ++k)
                CHECK(w[k] == doctest::Approx(v[k]).epsilon(1e-10));
            double quad = 0.0;
            for (double x : nodal) quad += x * x * op.dx();
            CHECK(std::sqrt(quad) == doctest::Approx(v.norm()).epsilon(1e-8));
        }
    }
    SUBCASE("length mismatch rejected") {
        CHECK_THROWS_AS(to_modal(op, std::vector<double>(op.n_grid() + 1, 0.0)),
                        std::invalid_argument);
    }
}
