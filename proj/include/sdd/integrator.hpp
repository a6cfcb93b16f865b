#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "sdd/delay.hpp"
#include "sdd/history.hpp"
#include "sdd/modal.hpp"
#include "sdd/nonlinearity.hpp"
#include "sdd/spectral.hpp"

namespace sdd {

/// Everything that defines one initial value problem.
struct ProblemSpec {
    SpectralOperator op;
    double d = 0.0;  // damping
    double r = 0.0;  // history window
    DelayFunctional eta = DelayFunctional::constant(0.0, 1.0);
    BirthFunction b = BirthFunction::zero();
    Kernel f = Kernel::dirac();
    InitialFunction phi;

    void validate() const;
};

enum class SolverMode { Etd1, Etd2, Picard };

struct SolverOptions {
    double h = 1e-2;
    SolverMode mode = SolverMode::Etd1;
    double picard_tol = 1e-12;
    int picard_max_iter = 200;
    double macro_override = 0.0;  // 0 = use the full ignore horizon
};

/// Per-macro-step bookkeeping.
struct MacroRecord {
    double t_begin = 0.0;
    double t_end = 0.0;
    int picard_iterations = 0;
    double contraction_ratio = 0.0;  // max observed ratio of Picard differences
    int clamp_events = 0;            // delay range clamps in the schedule
    int corrector_steps = 0;         // vanishing-delay corrector iterations
    double corrector_residual_max = 0.0;
    bool corrector_converged = true;
};

/// The computed solution: the initial segment (t < 0) followed by the micro
/// grid, one state per node, plus the realized delay schedule and the norms
/// used by the diagnostics. Values are immutable once emitted; macro seams
/// share a single stored node.
struct Trajectory {
    double r = 0.0;
    double h = 0.0;  // realized micro step
    std::vector<double> t;
    std::vector<ModalVector> u;
    std::vector<double> delay;   // eta(u_t); NaN on the initial segment
    std::vector<double> f_norm;  // ||F(u_t)||; NaN on the initial segment
    std::vector<double> g_norm;  // ||F(u_t) + d u(t)||; NaN on the initial segment
    std::size_t i0 = 0;          // index of the t = 0 node
    std::vector<MacroRecord> macros;

    std::size_t n_nodes() const { return t.size(); }
    double t_final() const { return t.back(); }
    const ModalVector& final_state() const { return u.back(); }

    /// Nearest node to time tt; throws if farther than half a step.
    std::size_t index_at_time(double tt) const;

    /// History segment of window r ending at node n (samples up to t[n]).
    HistorySegment segment_at(std::size_t n) const;

    /// The segment at node n re-rooted as an initial function on [-r, 0].
    InitialFunction initial_from_segment(std::size_t n) const;

    /// Largest |u_N| / ||u|| over computed nodes (spectral tail monitor).
    double tail_ratio_max() const;

    int total_clamp_events() const;
    int total_corrector_steps() const;
};

struct ScheduleResult {
    std::vector<double> tau;  // one value per micro node, in [0, r]
    int clamp_events = 0;
};

/// Freezes the delay over one macro interval [a, a + delta]: extends the
/// given history constantly past a and evaluates eta anchored at each micro
/// node. Under the ignore hypothesis this equals eta(u_t) for the true
/// solution at every node. Requires delta <= eta.eta_ign().
ScheduleResult delay_schedule(const DelayFunctional& eta, const HistorySegment& frozen,
                              double a, double delta, std::span<const double> micro_times);

/// One exponential-time-differencing micro step with frozen reaction term:
///   u_k(t+h) = e^{-(lam_k+d)h} u_k(t) + h phi1((lam_k+d)h) F_k.
ModalVector step_micro_etd1(const SpectralOperator& op, double d, double h,
                            const ModalVector& u_n, const ModalVector& F_n);

/// Trapezoidal corrector using a predicted reaction value at t + h:
///   u_k(t+h) = e^{-z} u_k + h [ (phi1-phi2) F_k + phi2 F1_k ],  z = (lam_k+d)h.
ModalVector step_micro_etd2(const SpectralOperator& op, double d, double h,
                            const ModalVector& u_n, const ModalVector& F_n,
                            const ModalVector& F_np1);

/// phi1(z) = (1 - e^-z)/z and phi2(z) = (z - 1 + e^-z)/z^2 with series
/// branches near z = 0.
double etd_phi1(double z);
double etd_phi2(double z);

/// Method-of-steps solve on [0, T]: per macro step of length at most
/// eta_ign, freeze the delay schedule, then advance with ETD micro steps
/// (or Picard iteration of the mild-solution map in picard mode).
Trajectory solve(const ProblemSpec& spec, const SolverOptions& opts, double T);

/// Picard mode entry point; identical to solve() with mode = Picard.
Trajectory solve_picard(const ProblemSpec& spec, const SolverOptions& opts, double T);

/// Trajectory CSV export: header t,norm,fracnorm_<delta>...,eta,probe_<x>...
/// with 17 significant digits.
void write_trajectory_csv(const std::string& path, const Trajectory& traj,
                          const SpectralOperator& op, std::span<const double> delta_list,
                          std::span<const double> probes);

}  // namespace sdd
