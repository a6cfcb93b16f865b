// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Scenario parameters and tolerances are pinned here, in code.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "sdd/config.hpp"
#include "sdd/diagnostics.hpp"
#include "sdd/io.hpp"

using namespace sdd;
namespace {
const double pi = std::numbers::pi;
using Clock = std::chrono::steady_clock;

int g_failures = 0;

void report(int criterion, bool pass, const std::string& details, double seconds) {
    std::printf("criterion %d: %s  (%s) [%.2fs]\n", criterion, pass ? "PASS" : "FAIL",
                details.c_str(), seconds);
    if (!pass) ++g_failures;
}

struct Timer {
    Clock::time_point t0 = Clock::now();
    double seconds() const {
        return std::chrono::duration<double>(Clock::now() - t0).count();
    }
};

ScenarioConfig::Built nicholson() {
    return ScenarioConfig::parse_string(preset_text("nicholson")).build();
}

// 1. Exact-decay: b = 0, d = 0, Omega = (0, pi), phi(0) = e_1 gives
//    ||u(t)|| = e^{-t} with relative error < 1e-10 at t = 1.
void criterion_1() {
    Timer timer;
    ProblemSpec spec;
    spec.op = build_dirichlet_laplacian_1d(pi, 8, 32);
    spec.d = 0.0;
    spec.r = 1.0;
    spec.eta = DelayFunctional::constant(0.3, 1.0);
    spec.b = BirthFunction::zero();
    spec.f = Kernel::dirac();
    ModalVector e1(8);
    e1[0] = 1.0;
    spec.phi = InitialFunction::from_function(1.0, 100, [e1](double) { return e1; });
    SolverOptions opts;
    opts.h = 1e-3;
    const Trajectory traj = solve(spec, opts, 1.1);
    const std::size_t n = traj.index_at_time(1.0);
    const double expect = std::exp(-traj.t[n]);
    const double rel = std::abs(traj.u[n].norm() - expect) / expect;
    report(1, rel < 1e-10, "exact decay rel_err=" + format_double(rel) + " tol=1e-10",
           timer.seconds());
}

// 2. Constant-delay oracle equivalence at h = 1e-3 plus first-order
//    convergence between h and h/2.
void criterion_2() {
    Timer timer;
    const auto built = ScenarioConfig::parse_string(preset_text("oracle")).build();
    SolverOptions o1 = built.opts;
    o1.h = 1e-3;
    SolverOptions o2 = o1;
    o2.h = 5e-4;
    const OracleReport r1 = oracle_check(built.spec, o1, 3.0, 1e-6);
    const OracleReport r2 = oracle_check(built.spec, o2, 3.0, 1e-6);
    const double ratio = r1.max_l2_error / r2.max_l2_error;
    const bool pass = r1.pass && ratio >= 1.7 && ratio <= 2.3;
    report(2, pass,
           "oracle err_h=" + format_double(r1.max_l2_error) + " tol=1e-06 ratio=" +
               format_double(ratio) + " in [1.7,2.3]",
           timer.seconds());
}

// 3. Hypothesis check: shipped constructors pass with discrepancy exactly 0
//    over 1000 randomized pairs; the deliberate violator fails.
void criterion_3() {
    Timer timer;
    const double r = 1.0;
    const auto p1 = InnerMap::parse("affine_norm", 0.2, 0.3);
    const auto p2 = InnerMap::parse("mean_mode", 0.1, 0.1);
    const std::vector<std::pair<std::string, DelayFunctional>> shipped = {
        {"point", DelayFunctional::point(p1, 0.6, r)},
        {"multi_point", DelayFunctional::multi_point({{p1, 0.5}, {p2, 1.0}}, r)},
        {"integral_of_p", DelayFunctional::integral_of_p(p1, 0.4, r)},
        {"p_of_integral", DelayFunctional::p_of_integral(p2, 0.4, r)},
        {"constant", DelayFunctional::constant(0.3, r)},
    };
    bool pass = true;
    double worst = 0.0;
    for (const auto& [name, eta] : shipped) {
        const CheckHReport rep = check_H(eta, 1000, 20240817);
        pass = pass && rep.pass && rep.max_discrepancy == 0.0;
        worst = std::max(worst, rep.max_discrepancy);
    }
    const CheckHReport bad = check_H(
        DelayFunctional::violating_point(InnerMap::parse("affine_norm", 0.1, 0.5), 0.5, r), 1000,
        20240817);
    const bool violator_detected = !bad.pass && bad.max_discrepancy > 0.0;
    report(3, pass && violator_detected,
           "constructors max_discrepancy=" + format_double(worst) +
               " violator_discrepancy=" + format_double(bad.max_discrepancy),
           timer.seconds());
}

// 4. Method-of-steps consistency: post-hoc eta(u_t) equals the frozen
//    schedule at every micro node, exactly, on the bundled birth scenario.
void criterion_4() {
    Timer timer;
    const auto built = nicholson();
    const Trajectory traj = solve(built.spec, built.opts, built.T);
    const double err = schedule_consistency_max_error(built.spec, traj);
    report(4, err == 0.0, "schedule max_error=" + format_double(err) + " (exact match required)",
           timer.seconds());
}

// 5. Continuous dependence: epsilon ladder 1e-1..1e-6 in three perturbation
//    directions decays strictly with final deviation < 1e-4; restart
//    discrepancy < 1e-9.
void criterion_5() {
    Timer timer;
    const auto built = nicholson();
    const std::vector<double> ladder = {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
    const auto reps = continuous_dependence(built.spec, built.opts, ladder, 2.0, 1e-4);
    bool pass = true;
    std::ostringstream details;
    for (const auto& rep : reps) {
        pass = pass && rep.pass;
        details << rep.direction << "_final=" << format_double(rep.final_deviation) << " ";
    }
    const double disc = semigroup_restart_discrepancy(built.spec, built.opts, 1.0, 1.0);
    pass = pass && disc < 1e-9;
    details << "restart=" << format_double(disc);
    report(5, pass, details.str(), timer.seconds());
}

// 6. A-priori bound with 1e-6 relative slack on the analytic side.
void criterion_6() {
    Timer timer;
    const auto built = nicholson();
    const AprioriReport rep = apriori_bound(built.spec, built.opts, 5.0);
    report(6, rep.pass,
           "observed=" + format_double(rep.observed_max) +
               " analytic=" + format_double(rep.analytic) +
               " f_observed=" + format_double(rep.f_observed_max) +
               " f_bound=" + format_double(rep.f_bound),
           timer.seconds());
}

// 7. Dissipativity: initial data up to 100 R enters the 1.05 R ball, stays,
//    and the transient obeys the exponential envelope.
void criterion_7() {
    Timer timer;
    const auto built = nicholson();
    const std::vector<double> deltas = {0.0, 0.25};
    bool pass = true;
    std::ostringstream details;
    for (double scale : {1.0, 10.0, 100.0}) {
        ProblemSpec spec = built.spec;
        const double R = dissipation_radius(spec.b, spec.f, spec.op, spec.d, 0.0);
        ModalVector v(spec.op.n_modes());
        v[0] = scale * R;
        spec.phi = InitialFunction::from_function(spec.r, 200, [v](double) { return v; });
        for (const DissipationReport& rep : dissipativity_check(spec, built.opts, deltas, 10.0)) {
            pass = pass && rep.pass;
            details << "s" << scale << "_d" << rep.delta << "_entry="
                    << format_double(rep.entry_time) << " ";
        }
    }
    report(7, pass, details.str(), timer.seconds());
}

// 8. Square-root equicontinuity: 500 random pairs on [1, 3] at delta = 0.25,
//    every ratio below its analytic constant.
void criterion_8() {
    Timer timer;
    const auto built = nicholson();
    const HolderReport rep = holder_check(built.spec, built.opts, 0.25, 1.0, 3.0, 500, 20240817);
    report(8, rep.pass,
           "max_ratio=" + format_double(rep.max_ratio) + " uniform_L=" +
               format_double(rep.uniform_L) + " violations=" + std::to_string(rep.violations),
           timer.seconds());
}

// 9. Determinism: the bundled scenario writes byte-identical CSVs on
//    repeated runs.
void criterion_9() {
    Timer timer;
    namespace fs = std::filesystem;
    const auto built = nicholson();
    const fs::path dir = fs::temp_directory_path() / "sdd_acceptance";
    fs::create_directories(dir);
    const fs::path a = dir / "run_a.csv";
    const fs::path b = dir / "run_b.csv";
    for (const fs::path& p : {a, b}) {
        const Trajectory traj = solve(built.spec, built.opts, built.T);
        write_trajectory_csv(p.string(), traj, built.spec.op, built.delta_list, built.probes);
    }
    auto slurp = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    const std::string sa = slurp(a);
    const bool pass = !sa.empty() && sa == slurp(b);
    report(9, pass, "bit-identical CSV bytes=" + std::to_string(sa.size()), timer.seconds());
}

}  // namespace

int main() {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    if (g_failures == 0)
        std::printf("acceptance: all 9 criteria passed\n");
    else
        std::printf("acceptance: %d criterion(s) FAILED\n", g_failures);
    return g_failures == 0 ? 0 : 1;
}
