#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>

#include "sdd/errors.hpp"
#include "sdd/history.hpp"
#include "sdd/io.hpp"
#include "sdd/spectral.hpp"

using namespace sdd;

namespace {
ModalVector mv(std::initializer_list<double> vals) { return ModalVector(std::vector<double>(vals)); }

HistorySegment constant_history(double r, const ModalVector& v) {
    std::vector<HistorySegment::Sample> s;
    for (int j = 0; j <= 4; ++j) s.push_back({-r + r * j / 4.0, v});
    return HistorySegment::from_samples(r, 0.0, std::move(s));
}
}  // namespace

TEST_CASE("eval is exact at samples and linear in between") {
    std::vector<HistorySegment::Sample> s = {
        {0.0, mv({1.0, 0.0})}, {0.5, mv({2.0, 1.0})}, {1.0, mv({4.0, -1.0})}};
    const auto h = HistorySegment::from_samples(1.0, 0.0, std::move(s));

    CHECK(h.eval(0.5)[0] == 2.0);
    CHECK(h.eval(0.5)[1] == 1.0);

    const ModalVector mid = h.eval(0.75);
    CHECK(mid[0] == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(mid[1] == doctest::Approx(0.0).epsilon(1e-15));

    CHECK_THROWS_AS(h.eval(-0.1), OutOfWindowError);
    CHECK_THROWS_AS(h.eval(1.1), OutOfWindowError);
}

TEST_CASE("constant history evaluates to the same vector everywhere") {
    const ModalVector v = mv({0.3, -0.7, 2.0});
    const auto h = constant_history(2.0, v);
    for (double s : {-2.0, -1.7, -0.31, 0.0}) {
        const ModalVector w = h.eval(s);
        for (std::size_t k = 0; k < 3; ++k) CHECK(w[k] == v[k]);
    }
}

TEST_CASE("push semantics") {
    HistorySegment h(1.0, 0.1);
    h.push(0.0, mv({1.0}));
    CHECK_THROWS_AS(h.push(0.0, mv({2.0})), std::invalid_argument);
    CHECK_THROWS_AS(h.push(-0.5, mv({2.0})), std::invalid_argument);

    h.push(0.5, mv({2.0}));
    CHECK(h.eval(0.5)[0] == 2.0);

    SUBCASE("memory stays bounded over a long run") {
        const double step = 0.1;
        double t = 0.5;
        for (int n = 0; n < 500; ++n) {
            t += step;
            h.push(t, mv({1.0}));
        }
        CHECK(h.size() <= static_cast<std::size_t>(std::ceil(1.0 / step)) + 3);
        CHECK(h.t_now() - h.t_oldest() >= 1.0);  // span never shrinks below the window
    }
}

TEST_CASE("extension function") {
    const auto op = build_dirichlet_laplacian_1d(std::numbers::pi, 2);
    const ModalVector a = mv({1.0, 2.0});
    const ModalVector b = mv({3.0, -1.0});
    // phi ramps linearly from a at theta=-1 to b at theta=0.
    const auto phi = InitialFunction::from_function(1.0, 10, [&](double th) {
        return lerp(a, b, th + 1.0);
    });

    const double eta_ign = 0.4;
    const HistorySegment ext = extend(phi, eta_ign);

    SUBCASE("constant at phi(0) inside (0, eta_ign)") {
        const ModalVector w = ext.eval(eta_ign / 2.0);
        for (std::size_t k = 0; k < 2; ++k) CHECK(w[k] == b[k]);
    }
    SUBCASE("matches phi at the far end") {
        const ModalVector w = ext.eval(-1.0);
        for (std::size_t k = 0; k < 2; ++k) CHECK(w[k] == a[k]);
    }
    SUBCASE("restriction to [-r, 0] is sample-identical to phi") {
        for (std::size_t j = 0; j < phi.n_samples(); ++j) {
            const ModalVector w = ext.eval(phi.thetas()[j]);
            for (std::size_t k = 0; k < 2; ++k) CHECK(w[k] == phi.values()[j][k]);
        }
    }
    SUBCASE("constant phi extends to a constant") {
        const auto cphi = InitialFunction::from_function(1.0, 5, [&](double) { return a; });
        const HistorySegment ce = extend(cphi, 0.7);
        for (double s : {-1.0, -0.2, 0.0, 0.3, 0.7}) {
            const ModalVector w = ce.eval(s);
            for (std::size_t k = 0; k < 2; ++k) CHECK(w[k] == a[k]);
        }
    }
    SUBCASE("non-positive eta_ign rejected") {
        CHECK_THROWS_AS(extend(phi, 0.0), std::invalid_argument);
        CHECK_THROWS_AS(extend(phi, -1.0), std::invalid_argument);
    }
}

TEST_CASE("segment sup norm") {
    SUBCASE("constant unit history") {
        const auto h = constant_history(1.0, mv({0.6, 0.8}));
        CHECK(h.sup_norm() == doctest::Approx(1.0).epsilon(1e-15));
    }
    SUBCASE("spike sample dominates") {
        std::vector<HistorySegment::Sample> s = {
            {-1.0, mv({1.0})}, {-0.5, mv({5.0})}, {0.0, mv({0.5})}};
        const auto h = HistorySegment::from_samples(1.0, 0.0, std::move(s));
        CHECK(h.sup_norm() == doctest::Approx(5.0).epsilon(1e-15));
    }
    SUBCASE("random history matches a dense-grid scan") {
        std::mt19937_64 rng(23);
        std::uniform_real_distribution<double> unif(-1.0, 1.0);
        std::vector<HistorySegment::Sample> s;
        for (int j = 0; j <= 20; ++j) {
            ModalVector v(3);
            for (std::size_t k = 0; k < 3; ++k) v[k] = unif(rng);
            s.push_back({-1.0 + j / 20.0, v});
        }
        const auto h = HistorySegment::from_samples(1.0, 0.0, std::move(s));
        double dense = 0.0;
        for (int i = 0; i <= 20000; ++i) dense = std::max(dense, h.eval(-1.0 + i / 20000.0).norm());
        CHECK(h.sup_norm() >= dense - 1e-12);      // node max dominates (norm is convex)
        CHECK(h.sup_norm() <= dense + 1e-6);       // and the dense scan approaches it
    }
}

TEST_CASE("segments equal at all samples interpolate identically") {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    std::vector<HistorySegment::Sample> s1, s2;
    for (int j = 0; j <= 12; ++j) {
        ModalVector v(3);
        for (std::size_t k = 0; k < 3; ++k) v[k] = unif(rng);
        s1.push_back({-1.0 + j / 12.0, v});
        s2.push_back({-1.0 + j / 12.0, v});
    }
    const auto a = HistorySegment::from_samples(1.0, 0.0, std::move(s1));
    const auto b = HistorySegment::from_samples(1.0, 0.3, std::move(s2));  // slack irrelevant
    std::uniform_real_distribution<double> sdist(-1.0, 0.0);
    for (int trial = 0; trial < 500; ++trial) {
        const double s = sdist(rng);
        const ModalVector va = a.eval(s), vb = b.eval(s);
        for (std::size_t k = 0; k < 3; ++k) CHECK(va[k] == vb[k]);
    }
}

TEST_CASE("eval is Lipschitz on a fixed segment") {
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    std::vector<HistorySegment::Sample> s;
    for (int j = 0; j <= 10; ++j) {
        ModalVector v(2);
        v[0] = unif(rng);
        v[1] = unif(rng);
        s.push_back({-1.0 + j / 10.0, v});
    }
    const auto h = HistorySegment::from_samples(1.0, 0.0, std::move(s));
    // slope bound: max |dv| / dt over cells
    double slope = 0.0;
    for (std::size_t j = 1; j < h.samples().size(); ++j)
        slope = std::max(slope, (h.samples()[j].v - h.samples()[j - 1].v).norm() /
                                    (h.samples()[j].t - h.samples()[j - 1].t));
    std::uniform_real_distribution<double> sdist(-1.0, 0.0);
    for (int trial = 0; trial < 200; ++trial) {
        const double s1 = sdist(rng), s2 = sdist(rng);
        CHECK((h.eval(s1) - h.eval(s2)).norm() <= slope * std::abs(s1 - s2) + 1e-12);
    }
}

TEST_CASE("initial function CSV loading") {
    const auto op = build_dirichlet_laplacian_1d(std::numbers::pi, 3, 8);
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "sdd_history_test";
    fs::create_directories(dir);

    SUBCASE("modal columns") {
        const fs::path p = dir / "phi_modal.csv";
        {
            std::ofstream out(p);
            out << "theta,mode_1,mode_2,mode_3\n";
            out << "-1.0,1.0,0.0,0.5\n";
            out << "-0.5,0.5,0.25,0.0\n";
            out << "0.0,0.0,0.5,-0.5\n";
        }
        const auto phi = InitialFunction::load_csv(p.string(), op);
        CHECK(phi.r() == 1.0);
        CHECK(phi.at_zero()[1] == 0.5);
        const ModalVector mid = phi.eval(-0.75);
        CHECK(mid[0] == doctest::Approx(0.75).epsilon(1e-15));
    }
    SUBCASE("nodal columns are converted through the operator") {
        const fs::path p = dir / "phi_nodal.csv";
        {
            std::ofstream out(p);
            out << "theta";
            for (std::size_t i = 1; i <= op.n_grid(); ++i) out << ",node_" << i;
            out << "\n";
            for (double th : {-1.0, 0.0}) {
                out << format_double(th);
                for (std::size_t i = 0; i < op.n_grid(); ++i)
                    out << "," << format_double(op.eigenfunction(0, op.grid()[i]));
                out << "\n";
            }
        }
        const auto phi = InitialFunction::load_csv(p.string(), op);
        CHECK(phi.at_zero()[0] == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(phi.at_zero()[1] == doctest::Approx(0.0).epsilon(1e-12));
    }
    SUBCASE("bad header rejected") {
        const fs::path p = dir / "phi_bad.csv";
        {
            std::ofstream out(p);
            out << "theta,value_1\n-1,0\n0,0\n";
        }
        CHECK_THROWS_AS(InitialFunction::load_csv(p.string(), op), std::invalid_argument);
    }
    SUBCASE("resampling onto a finer grid is exact at shared nodes") {
        const auto phi = InitialFunction::from_function(1.0, 4, [](double th) {
            return ModalVector(std::vector<double>{th, 2.0 * th});
        });
        const auto fine = phi.resampled(8);
        CHECK(fine.n_samples() == 9);
        CHECK(fine.eval(-0.5)[0] == doctest::Approx(-0.5).epsilon(1e-15));
        CHECK(fine.eval(-0.125)[1] == doctest::Approx(-0.25).epsilon(1e-15));
    }
}
