#include "sdd/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <memory>

#include "sdd/errors.hpp"
#include "sdd/io.hpp"

namespace sdd {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

void ProblemSpec::validate() const {
    if (op.n_modes() == 0) throw std::invalid_argument("ProblemSpec: operator not built");
    if (d < 0.0) throw std::invalid_argument("ProblemSpec: damping d must be >= 0");
    if (!(r > 0.0)) throw std::invalid_argument("ProblemSpec: window r must be positive");
    if (std::abs(eta.window() - r) > 1e-12 * std::max(1.0, r))
        throw std::invalid_argument("ProblemSpec: delay functional window differs from r");
    if (!(eta.eta_ign() > 0.0) || eta.eta_ign() > r * (1.0 + 1e-12))
        throw std::invalid_argument("ProblemSpec: eta_ign must lie in (0, r]");
    if (phi.n_samples() < 2) throw std::invalid_argument("ProblemSpec: initial function not set");
    if (std::abs(phi.r() - r) > 1e-9 * std::max(1.0, r))
        throw std::invalid_argument("ProblemSpec: phi must span exactly [-r, 0]");
    for (const ModalVector& v : phi.values())
        if (v.size() != op.n_modes())
            throw std::invalid_argument("ProblemSpec: phi modal dimension mismatch");
}

double etd_phi1(double z) {
    if (std::abs(z) < 1e-8) return 1.0 - z / 2.0 + z * z / 6.0;
    return -std::expm1(-z) / z;
}

double etd_phi2(double z) {
    if (std::abs(z) < 1e-4) return 0.5 - z / 6.0 + z * z / 24.0 - z * z * z / 120.0;
    return (std::expm1(-z) + z) / (z * z);
}

ModalVector step_micro_etd1(const SpectralOperator& op, double d, double h,
                            const ModalVector& u_n, const ModalVector& F_n) {
    if (!(h > 0.0)) throw std::invalid_argument("step_micro_etd1: h must be positive");
    ModalVector out(u_n.size());
    for (std::size_t k = 0; k < u_n.size(); ++k) {
        const double z = (op.eigenvalue(k) + d) * h;
        out[k] = std::exp(-z) * u_n[k] + h * etd_phi1(z) * F_n[k];
    }
    return out;
}

ModalVector step_micro_etd2(const SpectralOperator& op, double d, double h,
                            const ModalVector& u_n, const ModalVector& F_n,
                            const ModalVector& F_np1) {
    if (!(h > 0.0)) throw std::invalid_argument("step_micro_etd2: h must be positive");
    ModalVector out(u_n.size());
    for (std::size_t k = 0; k < u_n.size(); ++k) {
        const double z = (op.eigenvalue(k) + d) * h;
        const double p1 = etd_phi1(z);
        const double p2 = etd_phi2(z);
        out[k] = std::exp(-z) * u_n[k] + h * ((p1 - p2) * F_n[k] + p2 * F_np1[k]);
    }
    return out;
}

ScheduleResult delay_schedule(const DelayFunctional& eta, const HistorySegment& frozen,
                              double a, double delta, std::span<const double> micro_times) {
    if (delta > eta.eta_ign() * (1.0 + 1e-12))
        throw std::invalid_argument(
            "delay_schedule: macro length exceeds eta_ign (schedule would be state-dependent)");
    if (std::abs(frozen.t_now() - a) > 1e-9 * std::max(1.0, std::abs(a)))
        throw std::invalid_argument("delay_schedule: frozen history must end at the macro start");

    // Constant extension past a: one extra node is exact under linear
    // interpolation. Widen the window so old samples stay retained.
    HistorySegment ext = frozen.rewindowed(frozen.window() + delta);
    if (delta > 0.0) ext.push(a + delta, frozen.latest());

    ScheduleResult out;
    out.tau.reserve(micro_times.size());
    for (double s : micro_times) {
        const DelayEval e = eta.eval_at_ex(ext, s);
        out.tau.push_back(e.tau);
        if (e.clamped) ++out.clamp_events;
    }
    return out;
}

namespace {

struct NodeRecord {
    double delay;
    double f_norm;
    double g_norm;
};

class SolveDriver {
public:
    SolveDriver(const ProblemSpec& spec, const SolverOptions& opts, double T)
        : spec_(spec), opts_(opts), T_(T), plan_(make_convolution_plan(spec.op, spec.f)) {}

    Trajectory run() {
        prepare();
        while (t_ < T_ - 1e-12 * std::max(1.0, T_)) run_macro();
        finalize_last_node();
        return std::move(traj_);
    }

private:
    void prepare() {
        if (!(T_ > 0.0)) throw std::invalid_argument("solve: T must be positive");
        spec_.validate();
        if (!(opts_.h > 0.0)) throw std::invalid_argument("solve: micro step h must be positive");
        const double eta_ign = spec_.eta.eta_ign();
        if (opts_.macro_override < 0.0 || opts_.macro_override > eta_ign * (1.0 + 1e-12))
            throw std::invalid_argument("solve: macro override must lie in (0, eta_ign]");

        double macro = opts_.macro_override > 0.0 ? opts_.macro_override : eta_ign;
        if (opts_.mode == SolverMode::Picard) {
            // Keep the per-interval contraction constant below one.
            const double lip = f_lipschitz(spec_.b, spec_.f, spec_.op) + spec_.d;
            if (lip > 0.0) macro = std::min(macro, 0.8 / lip);
        }
        macro = std::min(macro, T_);
        const auto n_micro = std::max<std::size_t>(
            1, static_cast<std::size_t>(std::ceil(macro / opts_.h - 1e-9)));
        h_eff_ = macro / static_cast<double>(n_micro);
        macro_len_ = macro;

        // Ingest phi on the solver theta grid (spacing <= h_eff).
        const std::size_t m_theta =
            std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(spec_.r / h_eff_ - 1e-9)));
        phi_s_ = spec_.phi.resampled(m_theta);

        traj_.r = spec_.r;
        traj_.h = h_eff_;
        history_ = std::make_unique<HistorySegment>(spec_.r, h_eff_);
        for (std::size_t j = 0; j < phi_s_.n_samples(); ++j) {
            const double th = phi_s_.thetas()[j];
            history_->push(th, phi_s_.values()[j]);
            traj_.t.push_back(th);
            traj_.u.push_back(phi_s_.values()[j]);
            traj_.delay.push_back(kNaN);
            traj_.f_norm.push_back(kNaN);
            traj_.g_norm.push_back(kNaN);
        }
        traj_.i0 = traj_.t.size() - 1;  // theta = 0 sample
        t_ = 0.0;
    }

    ModalVector reaction(const ModalVector& v_delayed) const {
        return eval_F(spec_.op, spec_.b, plan_, v_delayed);
    }

    NodeRecord node_record(double tau, const ModalVector& F, const ModalVector& u) const {
        ModalVector g = F;
        if (spec_.d != 0.0) {
            ModalVector du = u;
            du *= spec_.d;
            g += du;
        }
        return {tau, F.norm(), g.norm()};
    }

    void store_record(std::size_t node, const NodeRecord& rec) {
        traj_.delay[node] = rec.delay;
        traj_.f_norm[node] = rec.f_norm;
        traj_.g_norm[node] = rec.g_norm;
    }

    void append_node(double t, ModalVector u) {
        if (!u.all_finite())
            throw DivergenceError("solve: state became non-finite at t = " + format_double(t), t);
        history_->push(t, u);
        traj_.t.push_back(t);
        traj_.u.push_back(std::move(u));
        traj_.delay.push_back(kNaN);
        traj_.f_norm.push_back(kNaN);
        traj_.g_norm.push_back(kNaN);
    }

    void run_macro() {
        const double a = t_;
        const double len = std::min(macro_len_, T_ - a);

        // Micro node times from a global step index, so a node's time does not
        // depend on how the macro intervals subdivide the run; a short
        // trailing step absorbs whatever is left of the final macro interval.
        std::vector<double> times;
        times.push_back(a);
        const std::size_t n_full = static_cast<std::size_t>(std::floor(len / h_eff_ + 1e-9));
        for (std::size_t j = 1; j <= n_full; ++j)
            times.push_back(static_cast<double>(n_base_ + j) * h_eff_);
        if (a + len > times.back() + 1e-12 * std::max(1.0, std::abs(a + len)))
            times.push_back(a + len);
        n_base_ += n_full;
        const std::size_t m = times.size() - 1;
        if (m == 0) {
            t_ = a + len;
            return;
        }

        MacroRecord mrec;
        mrec.t_begin = a;
        mrec.t_end = times.back();

        const ScheduleResult sched = delay_schedule(spec_.eta, *history_, a, times.back() - a, times);
        mrec.clamp_events = sched.clamp_events;

        const std::size_t i_start = traj_.t.size() - 1;  // global index of node at time a

        if (opts_.mode == SolverMode::Picard)
            run_macro_picard(times, sched, i_start, mrec);
        else
            run_macro_etd(times, sched, i_start, mrec);

        traj_.macros.push_back(mrec);
        t_ = times.back();
    }

    void run_macro_etd(const std::vector<double>& times, const ScheduleResult& sched,
                       std::size_t i_start, MacroRecord& mrec) {
        const std::size_t m = times.size() - 1;
        for (std::size_t j = 0; j < m; ++j) {
            const double tj = times[j];
            const double hj = times[j + 1] - tj;
            const ModalVector uj = traj_.u[i_start + j];  // copy: traj_.u reallocates below
            const ModalVector v_del = history_->eval(tj - sched.tau[j]);
            const ModalVector Fj = reaction(v_del);
            store_record(i_start + j, node_record(sched.tau[j], Fj, uj));

            ModalVector u_next = step_micro_etd1(spec_.op, spec_.d, hj, uj, Fj);
            if (opts_.mode == SolverMode::Etd2) {
                const double s_del1 = times[j + 1] - sched.tau[j + 1];
                if (s_del1 <= tj + 1e-15 * std::max(1.0, std::abs(tj))) {
                    const ModalVector F1 = reaction(history_->eval(s_del1));
                    u_next = step_micro_etd2(spec_.op, spec_.d, hj, uj, Fj, F1);
                } else {
                    // Vanishing delay: the predicted reaction needs the state
                    // inside the current step. Constant predictor (the ETD1
                    // value) then a few fixed-point corrections; the delayed
                    // value interpolates between u(t_j) and the candidate.
                    const double w = (s_del1 - tj) / hj;
                    ModalVector cand = u_next;
                    bool converged = false;
                    for (int it = 0; it < 3; ++it) {
                        ++mrec.corrector_steps;
                        const ModalVector F1 = reaction(lerp(uj, cand, w));
                        ModalVector next = step_micro_etd2(spec_.op, spec_.d, hj, uj, Fj, F1);
                        const double res = (next - cand).norm();
                        mrec.corrector_residual_max = std::max(mrec.corrector_residual_max, res);
                        cand = std::move(next);
                        if (res < 1e-10) {
                            converged = true;
                            break;
                        }
                    }
                    if (!converged) mrec.corrector_converged = false;
                    u_next = std::move(cand);
                }
            }
            append_node(times[j + 1], std::move(u_next));
        }
    }

    void run_macro_picard(const std::vector<double>& times, const ScheduleResult& sched,
                          std::size_t i_start, MacroRecord& mrec) {
        const std::size_t m = times.size() - 1;
        const ModalVector u0 = traj_.u[i_start];
        const double a = times.front();

        std::vector<ModalVector> cur(m + 1, u0);  // iterate 0: constant continuation
        std::vector<ModalVector> next(m + 1, u0);

        auto delayed_value = [&](double s, const std::vector<ModalVector>& vals) {
            if (s <= a + 1e-15 * std::max(1.0, std::abs(a))) return history_->eval(s);
            auto it = std::upper_bound(times.begin(), times.end(), s);
            std::size_t j = static_cast<std::size_t>(it - times.begin());
            if (j >= times.size()) j = times.size() - 1;
            const double w = (s - times[j - 1]) / (times[j] - times[j - 1]);
            return lerp(vals[j - 1], vals[j], w);
        };

        double prev_diff = kNaN;
        bool converged = false;
        for (int iter = 1; iter <= opts_.picard_max_iter; ++iter) {
            mrec.picard_iterations = iter;
            next[0] = u0;
            for (std::size_t j = 0; j < m; ++j) {
                const double hj = times[j + 1] - times[j];
                const ModalVector Fj = reaction(delayed_value(times[j] - sched.tau[j], cur));
                next[j + 1] = step_micro_etd1(spec_.op, spec_.d, hj, next[j], Fj);
            }
            double diff = 0.0;
            for (std::size_t j = 0; j <= m; ++j) diff = std::max(diff, (next[j] - cur[j]).norm());
            if (std::isfinite(prev_diff) && prev_diff > 1e-13)
                mrec.contraction_ratio = std::max(mrec.contraction_ratio, diff / prev_diff);
            prev_diff = diff;
            std::swap(cur, next);
            if (diff < opts_.picard_tol) {
                converged = true;
                break;
            }
        }
        if (!converged)
            throw NonConvergenceError("solve_picard: iteration cap exceeded on macro starting at t = " +
                                      format_double(a));

        for (std::size_t j = 0; j < m; ++j) {
            const ModalVector Fj = reaction(delayed_value(times[j] - sched.tau[j], cur));
            store_record(i_start + j, node_record(sched.tau[j], Fj, cur[j]));
            append_node(times[j + 1], cur[j + 1]);
        }
    }

    void finalize_last_node() {
        // Reaction record at the final node (its schedule value is the right
        // endpoint of the last macro).
        const std::size_t n = traj_.t.size() - 1;
        if (traj_.macros.empty()) return;
        const double tau = traj_.delay[n];
        double tau_here = tau;
        if (std::isnan(tau_here)) {
            // delay at the last node was recorded by the schedule of its own
            // macro only if the node acted as a left endpoint; recover it.
            const ScheduleResult s =
                delay_schedule(spec_.eta, *history_, traj_.t[n], 0.0, std::vector<double>{traj_.t[n]});
            tau_here = s.tau[0];
        }
        const ModalVector v_del = history_->eval(traj_.t[n] - tau_here);
        const ModalVector F = reaction(v_del);
        store_record(n, node_record(tau_here, F, traj_.u[n]));
    }

    const ProblemSpec& spec_;
    SolverOptions opts_;
    double T_;
    ConvolutionPlan plan_;

    double macro_len_ = 0.0;
    double h_eff_ = 0.0;
    std::size_t n_base_ = 0;
    double t_ = 0.0;
    InitialFunction phi_s_;
    std::unique_ptr<HistorySegment> history_;
    Trajectory traj_;
};

}  // namespace

Trajectory solve(const ProblemSpec& spec, const SolverOptions& opts, double T) {
    SolveDriver driver(spec, opts, T);
    return driver.run();
}

Trajectory solve_picard(const ProblemSpec& spec, const SolverOptions& opts, double T) {
    SolverOptions o = opts;
    o.mode = SolverMode::Picard;
    return solve(spec, o, T);
}

std::size_t Trajectory::index_at_time(double tt) const {
    auto it = std::lower_bound(t.begin(), t.end(), tt);
    std::size_t best = static_cast<std::size_t>(it - t.begin());
    if (best == t.size()) best = t.size() - 1;
    if (best > 0 && std::abs(t[best - 1] - tt) < std::abs(t[best] - tt)) --best;
    if (std::abs(t[best] - tt) > 0.5 * h + 1e-12)
        throw std::invalid_argument("Trajectory: no node near requested time");
    return best;
}

HistorySegment Trajectory::segment_at(std::size_t n) const {
    if (n >= t.size()) throw std::invalid_argument("Trajectory: node index out of range");
    const double lo = t[n] - r - h;  // window plus one cell of slack
    std::size_t first = n;
    while (first > 0 && t[first - 1] >= lo) --first;
    if (first > 0) --first;  // keep one bracketing sample past the edge
    std::vector<HistorySegment::Sample> samples;
    samples.reserve(n - first + 1);
    for (std::size_t i = first; i <= n; ++i) samples.push_back({t[i], u[i]});
    return HistorySegment::from_samples(r, h, std::move(samples));
}

InitialFunction Trajectory::initial_from_segment(std::size_t n) const {
    const HistorySegment seg = segment_at(n);
    const double tn = t[n];
    std::vector<double> thetas;
    std::vector<ModalVector> values;
    thetas.push_back(-r);
    values.push_back(seg.eval(tn - r));
    for (std::size_t i = 0; i <= n; ++i) {
        const double th = t[i] - tn;
        if (th > -r + 1e-12 && th < 0.0) {
            thetas.push_back(th);
            values.push_back(u[i]);
        }
    }
    thetas.push_back(0.0);
    values.push_back(u[n]);
    return InitialFunction::from_samples(std::move(thetas), std::move(values));
}

double Trajectory::tail_ratio_max() const {
    double m = 0.0;
    for (std::size_t i = i0; i < u.size(); ++i) {
        const double nn = u[i].norm();
        if (nn > 1e-300) m = std::max(m, std::abs(u[i][u[i].size() - 1]) / nn);
    }
    return m;
}

int Trajectory::total_clamp_events() const {
    int s = 0;
    for (const MacroRecord& mr : macros) s += mr.clamp_events;
    return s;
}

int Trajectory::total_corrector_steps() const {
    int s = 0;
    for (const MacroRecord& mr : macros) s += mr.corrector_steps;
    return s;
}

void write_trajectory_csv(const std::string& path, const Trajectory& traj,
                          const SpectralOperator& op, std::span<const double> delta_list,
                          std::span<const double> probes) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file " + path);
    out << "t,norm";
    for (double d : delta_list) out << ",fracnorm_" << format_double(d);
    out << ",eta";
    for (double x : probes) out << ",probe_" << format_double(x);
    out << "\n";
    for (std::size_t i = traj.i0; i < traj.n_nodes(); ++i) {
        out << format_double(traj.t[i]) << "," << format_double(traj.u[i].norm());
        for (double d : delta_list)
            out << "," << format_double(frac_power_norm(op, d, traj.u[i]));
        out << "," << format_double(traj.delay[i]);
        for (double x : probes) {
            double val = 0.0;
            for (std::size_t k = 0; k < traj.u[i].size(); ++k)
                val += traj.u[i][k] * op.eigenfunction(k, x);
            out << "," << format_double(val);
        }
        out << "\n";
    }
}

}  // namespace sdd
