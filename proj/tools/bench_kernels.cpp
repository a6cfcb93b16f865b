// Timing comparison of the OpenMP kernels against the serial reference, at
// grid sizes well above the desk-scale defaults. Also cross-checks that both
// paths produce identical values.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <vector>

#include "sdd/kernels.hpp"
#include "sdd/nonlinearity.hpp"
#include "sdd/spectral.hpp"

using Clock = std::chrono::steady_clock;

namespace {

double time_ms(const std::function<void()>& fn, int reps) {
    fn();  // warm up
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = Clock::now();
        fn();
        const double ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
        if (ms < best) best = ms;
    }
    return best;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace

int main() {
    std::printf("threads=%d\n", sdd::kernels::max_threads());
    std::printf("%-12s %8s %12s %12s %9s %10s\n", "kernel", "size", "serial_ms", "parallel_ms",
                "speedup", "max_diff");

    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);

    for (std::size_t m : {512u, 2048u, 8192u}) {
        const std::size_t n = m / 2;
        const auto op = sdd::build_dirichlet_laplacian_1d(M_PI, n, m);
        std::vector<double> nodal(m), w(m), g1(m), g2(m);
        std::vector<double> c1(n), c2(n);
        for (double& x : nodal) x = unif(rng);
        for (double& x : w) x = unif(rng);
        const auto plan = sdd::make_convolution_plan(op, sdd::Kernel::gaussian(0.05));

        const double a_s = time_ms(
            [&] { sdd::kernels::serial::analyze(op.basis(), n, m, op.dx(), nodal, c1); }, 5);
        const double a_p =
            time_ms([&] { sdd::kernels::analyze(op.basis(), n, m, op.dx(), nodal, c2); }, 5);
        std::printf("%-12s %8zu %12.3f %12.3f %8.2fx %10.2e\n", "analyze", m, a_s, a_p, a_s / a_p,
                    max_abs_diff(c1, c2));

        const double s_s = time_ms(
            [&] { sdd::kernels::serial::synthesize(op.basis_t(), n, m, c1, g1); }, 5);
        const double s_p =
            time_ms([&] { sdd::kernels::synthesize(op.basis_t(), n, m, c1, g2); }, 5);
        std::printf("%-12s %8zu %12.3f %12.3f %8.2fx %10.2e\n", "synthesize", m, s_s, s_p,
                    s_s / s_p, max_abs_diff(g1, g2));

        const double c_s = time_ms(
            [&] { sdd::kernels::serial::convolve(w, 0.0, plan.table, op.dx(), g1); }, 5);
        const double c_p =
            time_ms([&] { sdd::kernels::convolve(w, 0.0, plan.table, op.dx(), g2); }, 5);
        std::printf("%-12s %8zu %12.3f %12.3f %8.2fx %10.2e\n", "convolve", m, c_s, c_p, c_s / c_p,
                    max_abs_diff(g1, g2));
    }
    return 0;
}
