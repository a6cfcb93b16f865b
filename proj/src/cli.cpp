#include "sdd/cli.hpp"

#include <cctype>
#include <chrono>
#include <cmath>
#include <limits>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "sdd/config.hpp"
#include "sdd/diagnostics.hpp"
#include "sdd/errors.hpp"
#include "sdd/io.hpp"
#include "sdd/kernels.hpp"

namespace sdd::cli {

namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

// Where verify suites drop the trajectories behind their reports ("" = skip).
std::string g_verify_out;

void export_check_trajectory(const std::string& name, const ProblemSpec& spec,
                             const SolverOptions& opts, double T) {
    if (g_verify_out.empty()) return;
    fs::create_directories(g_verify_out);
    const Trajectory traj = solve(spec, opts, T);
    const std::vector<double> deltas = {0.0, 0.25};
    write_trajectory_csv(g_verify_out + "/" + name + ".csv", traj, spec.op, deltas, {});
}

double elapsed_ms(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

void print_verdict(bool pass, const std::string& line) {
    std::cout << (pass ? "[PASS] " : "[FAIL] ") << line << "\n";
}

int total_picard_iterations(const Trajectory& traj) {
    int s = 0;
    for (const MacroRecord& m : traj.macros) s += m.picard_iterations;
    return s;
}

/// First confirmed entry time into the delta = 0 absorbing ball, for sweep
/// summaries. NaN when the reaction term admits no uniform bound.
double entry_time_delta0(const ScenarioConfig::Built& built, const Trajectory& traj) {
    double radius;
    try {
        radius = dissipation_radius(built.spec.b, built.spec.f, built.spec.op, built.spec.d, 0.0);
    } catch (const std::exception&) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    const double threshold = radius * 1.05;
    std::ptrdiff_t last_exceed = -1;
    for (std::size_t i = traj.i0; i < traj.n_nodes(); ++i)
        if (traj.u[i].norm() > threshold) last_exceed = static_cast<std::ptrdiff_t>(i);
    const std::size_t entry = traj.i0 + static_cast<std::size_t>(last_exceed + 1);
    if (entry >= traj.n_nodes()) return std::numeric_limits<double>::quiet_NaN();
    if (traj.t[entry] + built.spec.r > traj.t_final() + 1e-9)
        return std::numeric_limits<double>::quiet_NaN();
    return traj.t[entry];
}

std::string sanitize(const std::string& s) {
    std::string out;
    for (char c : s)
        out += (std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '-') ? c : '_';
    return out;
}

// ---------------------------------------------------------------------------
// verify suites

bool verify_H() {
    const double r = 1.0;
    struct Entry {
        std::string name;
        DelayFunctional eta;
    };
    const std::vector<Entry> shipped = {
        {"point", DelayFunctional::point(InnerMap::parse("affine_norm", 0.2, 0.3), 0.6, r)},
        {"multi_point",
         DelayFunctional::multi_point({{InnerMap::parse("affine_norm", 0.1, 0.2), 0.5},
                                       {InnerMap::parse("mean_mode", 0.1, 0.1), 1.0}},
                                      r)},
        {"integral_of_p", DelayFunctional::integral_of_p(InnerMap::parse("affine_norm", 0.3, 0.1), 0.4, r)},
        {"p_of_integral", DelayFunctional::p_of_integral(InnerMap::parse("affine_norm", 0.2, 0.05), 0.4, r)},
        {"constant", DelayFunctional::constant(0.3, r)},
    };
    bool all = true;
    for (const Entry& e : shipped) {
        const CheckHReport rep = check_H(e.eta, 1000, 20240817);
        print_verdict(rep.pass, "H " + e.name + " trials=1000 max_discrepancy=" +
                                    format_double(rep.max_discrepancy));
        all = all && rep.pass;
    }
    const DelayFunctional bad =
        DelayFunctional::violating_point(InnerMap::parse("affine_norm", 0.1, 0.5), 0.5, r);
    const CheckHReport rep = check_H(bad, 1000, 20240817);
    const bool violator_detected = !rep.pass && rep.max_discrepancy > 0.0;
    print_verdict(violator_detected, "H violating_point detected=" +
                                         std::string(violator_detected ? "1" : "0") +
                                         " max_discrepancy=" + format_double(rep.max_discrepancy));
    return all && violator_detected;
}

bool verify_oracle() {
    const auto built = ScenarioConfig::parse_string(preset_text("oracle")).build();
    const OracleReport rep = oracle_check(built.spec, built.opts, built.T, 1e-6);
    print_verdict(rep.pass, rep.to_kv());
    export_check_trajectory("oracle", built.spec, built.opts, built.T);

    SolverOptions half = built.opts;
    half.h = built.opts.h / 2.0;
    const OracleReport rep_half = oracle_check(built.spec, half, built.T, 1e-6);
    const double ratio = rep.max_l2_error / rep_half.max_l2_error;
    const bool order_ok = ratio >= 1.7 && ratio <= 2.3;
    print_verdict(order_ok, "oracle order ratio=" + format_double(ratio) +
                                " err_h=" + format_double(rep.max_l2_error) +
                                " err_h2=" + format_double(rep_half.max_l2_error));
    return rep.pass && rep_half.pass && order_ok;
}

bool verify_dissipation() {
    auto cfg = ScenarioConfig::parse_string(preset_text("nicholson"));
    const auto base = cfg.build();
    const double radius = dissipation_radius(base.spec.b, base.spec.f, base.spec.op, base.spec.d, 0.0);
    const std::vector<double> deltas = {0.0, 0.25};
    bool all = true;
    for (double scale : {1.0, 10.0, 100.0}) {
        ProblemSpec spec = base.spec;
        ModalVector v(spec.op.n_modes());
        v[0] = scale * radius;  // ||phi||_C = scale * R
        spec.phi = InitialFunction::from_function(spec.r, 200, [v](double) { return v; });
        const auto reports = dissipativity_check(spec, base.opts, deltas, 10.0);
        for (const DissipationReport& rep : reports) {
            print_verdict(rep.pass, "dissipation scale=" + format_double(scale) + " " + rep.to_kv());
            all = all && rep.pass;
        }
        export_check_trajectory("dissipation_scale_" + format_double(scale), spec, base.opts, 10.0);
    }
    return all;
}

bool verify_holder() {
    const auto built = ScenarioConfig::parse_string(preset_text("nicholson")).build();
    const HolderReport rep = holder_check(built.spec, built.opts, 0.25, 1.0, 3.0, 500, 777);
    print_verdict(rep.pass, rep.to_kv());
    export_check_trajectory("holder", built.spec, built.opts, 3.0);
    return rep.pass;
}

bool verify_dependence() {
    const auto built = ScenarioConfig::parse_string(preset_text("nicholson")).build();
    const std::vector<double> ladder = {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
    bool all = true;
    for (const DependenceReport& rep : continuous_dependence(built.spec, built.opts, ladder, 2.0)) {
        print_verdict(rep.pass, rep.to_kv());
        all = all && rep.pass;
    }
    const double disc = semigroup_restart_discrepancy(built.spec, built.opts, 1.0, 1.0);
    const bool restart_ok = disc < 1e-9;
    print_verdict(restart_ok, "dependence restart t1=1 t2=1 discrepancy=" + format_double(disc));
    export_check_trajectory("dependence_base", built.spec, built.opts, 2.0);
    return all && restart_ok;
}

bool verify_apriori() {
    const auto built = ScenarioConfig::parse_string(preset_text("nicholson")).build();
    const AprioriReport rep = apriori_bound(built.spec, built.opts, 5.0);
    print_verdict(rep.pass, rep.to_kv());
    export_check_trajectory("apriori", built.spec, built.opts, 5.0);
    return rep.pass;
}

}  // namespace

int cmd_run(const std::string& config_path, const std::optional<std::string>& out_override,
            bool print_config) {
    try {
        ScenarioConfig cfg = ScenarioConfig::parse_file(config_path);
        if (print_config) {
            const auto built = cfg.build();  // validate before echoing
            (void)built;
            std::cout << cfg.print();
            return kExitOk;
        }
        const auto built = cfg.build();
        const auto t0 = Clock::now();
        const Trajectory traj = solve(built.spec, built.opts, built.T);
        const double ms = elapsed_ms(t0);
        const std::string out_path = out_override.value_or(built.output_path);
        write_trajectory_csv(out_path, traj, built.spec.op, built.delta_list, built.probes);

        std::cout << "run config=" << config_path << " out=" << out_path
                  << " final_norm=" << format_double(traj.final_state().norm())
                  << " t_final=" << format_double(traj.t_final())
                  << " wall_ms=" << format_double(ms)
                  << " clamp_events=" << traj.total_clamp_events()
                  << " corrector_steps=" << traj.total_corrector_steps()
                  << " picard_iterations=" << total_picard_iterations(traj)
                  << " tail_ratio=" << format_double(traj.tail_ratio_max());
        if (built.spec.b.bounded() && !built.spec.f.local()) {
            std::cout << " f_norm_bound="
                      << format_double(f_norm_bound(built.spec.b, built.spec.f, built.spec.op));
        }
        std::cout << " lip_transport="
                  << format_double(f_lipschitz(built.spec.b, built.spec.f, built.spec.op)) << "\n";
        return kExitOk;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const DivergenceError& e) {
        std::cerr << "divergence: " << e.what() << "\n";
        return kExitDiverged;
    } catch (const NonConvergenceError& e) {
        std::cerr << "non-convergence: " << e.what() << "\n";
        return kExitDiverged;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
}

int cmd_verify(const std::string& suite) { return cmd_verify(suite, ""); }

int cmd_verify(const std::string& suite, const std::string& out_dir) {
    g_verify_out = out_dir;
    struct Suite {
        std::string name;
        bool (*fn)();
    };
    static const std::vector<Suite> suites = {
        {"H", verify_H},           {"oracle", verify_oracle},
        {"dissipation", verify_dissipation}, {"holder", verify_holder},
        {"dependence", verify_dependence},   {"apriori", verify_apriori},
    };
    try {
        bool all = true;
        bool matched = false;
        for (const Suite& s : suites) {
            if (suite == "all" || suite == s.name) {
                matched = true;
                all = s.fn() && all;
            }
        }
        if (!matched) {
            std::cerr << "unknown suite: " << suite
                      << " (expected all | H | oracle | dissipation | holder | dependence | apriori)\n";
            return kExitConfig;
        }
        std::cout << (all ? "verify: all checks passed\n" : "verify: FAILURES above\n");
        return all ? kExitOk : kExitFail;
    } catch (const std::exception& e) {
        std::cerr << "verify error: " << e.what() << "\n";
        return kExitFail;
    }
}

int cmd_sweep(const std::string& config_path, const std::string& param,
              const std::vector<std::string>& values, const std::string& out_dir, int threads) {
    try {
        ScenarioConfig base = ScenarioConfig::parse_file(config_path);
        if (values.empty()) {
            std::cerr << "sweep: no values given\n";
            return kExitConfig;
        }
        {
            // The parameter must be a key the builder accepts.
            ScenarioConfig probe = base;
            probe.set(param, values.front());
            probe.build();
        }
        fs::create_directories(out_dir);

        const int n = static_cast<int>(values.size());
        std::vector<std::string> files(n);
        std::vector<double> final_norms(n), entry_times(n), walls(n);
        std::vector<std::string> errors(n);

        kernels::set_threads(threads);
#pragma omp parallel for schedule(dynamic) if (threads > 1)
        for (int i = 0; i < n; ++i) {
            try {
                ScenarioConfig cfg = base;
                cfg.set(param, values[i]);
                const auto built = cfg.build();
                const auto t0 = Clock::now();
                const Trajectory traj = solve(built.spec, built.opts, built.T);
                walls[i] = elapsed_ms(t0);
                const std::string file =
                    out_dir + "/sweep_" + sanitize(param) + "_" + sanitize(values[i]) + ".csv";
                write_trajectory_csv(file, traj, built.spec.op, built.delta_list, built.probes);
                files[i] = file;
                final_norms[i] = traj.final_state().norm();
                entry_times[i] = entry_time_delta0(built, traj);
            } catch (const std::exception& e) {
                errors[i] = e.what();
            }
        }

        for (int i = 0; i < n; ++i)
            if (!errors[i].empty()) {
                std::cerr << "sweep value " << values[i] << ": " << errors[i] << "\n";
                return kExitConfig;
            }

        const std::string summary_path = out_dir + "/summary.csv";
        std::ofstream summary(summary_path);
        summary << "param,value,final_norm,entry_time,wall_ms,file\n";
        for (int i = 0; i < n; ++i)
            summary << param << "," << values[i] << "," << format_double(final_norms[i]) << ","
                    << format_double(entry_times[i]) << "," << format_double(walls[i]) << ","
                    << files[i] << "\n";
        std::cout << "sweep param=" << param << " runs=" << n << " summary=" << summary_path << "\n";
        return kExitOk;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
}

int cmd_presets(const std::optional<std::string>& out_dir) {
    if (!out_dir) {
        for (const auto& [name, text] : bundled_presets()) std::cout << name << "\n";
        return kExitOk;
    }
    try {
        fs::create_directories(*out_dir);
        for (const auto& [name, text] : bundled_presets()) {
            const std::string path = *out_dir + "/" + name + ".cfg";
            std::ofstream out(path);
            if (!out) throw std::runtime_error("cannot write " + path);
            out << text;
            std::cout << path << "\n";
        }
        return kExitOk;
    } catch (const std::exception& e) {
        std::cerr << "presets error: " << e.what() << "\n";
        return kExitConfig;
    }
}

}  // namespace sdd::cli
