#include "sdd/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "sdd/errors.hpp"
#include "sdd/io.hpp"

namespace sdd {

namespace {
const double kE = std::numbers::e;

double pow_or_one(double base, double expo) {
    // delta^delta with the delta -> 0 limit value 1.
    return base == 0.0 ? 1.0 : std::pow(base, expo);
}

void require_half_open(double delta) {
    if (delta < 0.0 || delta >= 0.5)
        throw std::invalid_argument("diagnostics: delta must lie in [0, 1/2)");
}
}  // namespace

double dissipation_radius(const BirthFunction& b, const Kernel& f, const SpectralOperator& op,
                          double d, double delta) {
    require_half_open(delta);
    if (!b.bounded())
        throw UnsupportedError("dissipation_radius: requires a bounded birth function");
    const double mf = f.bound();
    const double omega = op.length();
    const double lam1 = op.eigenvalue(0);
    const double r2 = mf * mf * std::pow(omega, 3.0) * b.cb() * b.cb() *
                      std::pow(lam1, 4.0 * delta - 2.0) / (lam1 + 2.0 * d);
    return std::sqrt(r2);
}

double compute_D_delta(double delta) {
    const double s = delta + 0.5;
    return std::exp(-s) * std::pow(s, s);
}

double compute_D_hat(double delta) {
    const double s = 1.0 + delta;
    return std::exp(-s) * std::pow(s, s);
}

double holder_pair_L(double delta, double t1, double t2, double phi0_norm, double g_max) {
    require_half_open(delta);
    if (!(t1 > 0.0) || !(t2 > 0.0))
        throw std::invalid_argument("holder_pair_L: times must be positive");
    const double tmin = std::min(t1, t2);
    const double D = compute_D_delta(delta);
    const double first = D * std::pow(tmin, -(delta + 0.5)) * phi0_norm;
    const double bracket = D * std::pow(tmin, 0.5 - delta) / (0.5 - delta) +
                           pow_or_one(delta, delta) / (kE * (1.0 - delta));
    return first + bracket * g_max;
}

double holder_uniform_L(double delta, double a, double b, double phi0_norm, double g_max) {
    require_half_open(delta);
    const double D = compute_D_delta(delta);
    const double first = D * std::pow(a, -(delta + 0.5)) * phi0_norm;
    const double bracket = D * std::pow(b, 0.5 - delta) / (0.5 - delta) +
                           pow_or_one(delta, delta) / (kE * (1.0 - delta));
    return first + bracket * g_max;
}

double apriori_bound_value(const BirthFunction& b, const Kernel& f, const SpectralOperator& op,
                           double d, double phi0_norm, double T) {
    const double K = f_norm_bound(b, f, op);
    // q(d, T) = (e^{dT} - 1 - dT)/d, with q -> 0 as d -> 0.
    const double x = d * T;
    double q;
    if (std::abs(x) < 1e-4)
        q = d * T * T * (0.5 + x / 6.0 + x * x / 24.0);
    else
        q = (std::expm1(x) - x) / d;
    return phi0_norm * std::exp(x) + K * q + K * T;
}

// ---------------------------------------------------------------------------

namespace {
double max_f_norm(const Trajectory& traj) {
    double m = 0.0;
    for (std::size_t i = traj.i0; i < traj.n_nodes(); ++i) m = std::max(m, traj.f_norm[i]);
    return m;
}
}  // namespace

std::string AprioriReport::to_kv() const {
    std::ostringstream os;
    os << "check=apriori T=" << format_double(T) << " analytic=" << format_double(analytic)
       << " observed=" << format_double(observed_max) << " f_bound=" << format_double(f_bound)
       << " f_observed=" << format_double(f_observed_max) << " f_bound_ok=" << f_bound_ok
       << " pass=" << pass;
    return os.str();
}

AprioriReport apriori_bound(const ProblemSpec& spec, const SolverOptions& opts, double T) {
    AprioriReport rep;
    rep.T = T;
    const Trajectory traj = solve(spec, opts, T);
    const double phi0 = traj.u[traj.i0].norm();
    rep.analytic = apriori_bound_value(spec.b, spec.f, spec.op, spec.d, phi0, T);
    double obs = 0.0;
    for (std::size_t i = traj.i0; i < traj.n_nodes(); ++i) obs = std::max(obs, traj.u[i].norm());
    rep.observed_max = obs;
    rep.f_bound = f_norm_bound(spec.b, spec.f, spec.op);
    rep.f_observed_max = max_f_norm(traj);
    rep.f_bound_ok = rep.f_observed_max <= rep.f_bound * (1.0 + 1e-9) + 1e-12;
    rep.pass = obs <= rep.analytic * (1.0 + 1e-6) && rep.f_bound_ok;
    return rep;
}

std::string DissipationReport::to_kv() const {
    std::ostringstream os;
    os << "check=dissipation delta=" << format_double(delta) << " radius=" << format_double(radius)
       << " threshold=" << format_double(threshold) << " entry_time=" << format_double(entry_time)
       << " max_after_entry=" << format_double(max_after_entry) << " entered=" << entered
       << " envelope_ok=" << envelope_ok << " f_bound_ok=" << f_bound_ok
       << " smoothing_sup=" << format_double(smoothing_sup) << " pass=" << pass;
    return os.str();
}

std::vector<DissipationReport> dissipativity_check(const ProblemSpec& spec,
                                                   const SolverOptions& opts,
                                                   std::span<const double> deltas, double T,
                                                   double slack) {
    for (double d : deltas) require_half_open(d);
    const auto shared_traj = std::make_shared<const Trajectory>(solve(spec, opts, T));
    const Trajectory& traj = *shared_traj;
    const double lam1 = spec.op.eigenvalue(0);
    const double decay = lam1 + 2.0 * spec.d;
    const double f_bound = f_norm_bound(spec.b, spec.f, spec.op);
    const double f_obs = max_f_norm(traj);
    double smoothing_sup = 0.0;
    for (std::size_t i = traj.i0 + 1; i < traj.n_nodes(); ++i)
        smoothing_sup = std::max(smoothing_sup, frac_power_norm(spec.op, 0.75, traj.u[i]));

    std::vector<DissipationReport> out;
    for (double delta : deltas) {
        DissipationReport rep;
        rep.delta = delta;
        rep.radius = dissipation_radius(spec.b, spec.f, spec.op, spec.d, delta);
        rep.threshold = rep.radius * (1.0 + slack);
        rep.f_bound_ok = f_obs <= f_bound * (1.0 + 1e-9) + 1e-12;
        rep.smoothing_sup = smoothing_sup;
        rep.smoothing_finite = std::isfinite(smoothing_sup);
        rep.trajectory = shared_traj;

        std::vector<double> obs(traj.n_nodes() - traj.i0);
        for (std::size_t i = traj.i0; i < traj.n_nodes(); ++i)
            obs[i - traj.i0] = frac_power_norm(spec.op, delta, traj.u[i]);

        // Transient envelope from the differential inequality, started at 0.
        const double x0 = obs[0] * obs[0];
        rep.envelope_ok = true;
        for (std::size_t i = 0; i < obs.size(); ++i) {
            const double t = traj.t[traj.i0 + i];
            const double env = x0 * std::exp(-decay * t) + rep.radius * rep.radius;
            if (obs[i] * obs[i] > env * (1.0 + slack) + 1e-12) {
                rep.envelope_ok = false;
                break;
            }
        }

        // Entry: after the last exceedance, a confirmation window of length r
        // must fit before T.
        std::ptrdiff_t last_exceed = -1;
        for (std::size_t i = 0; i < obs.size(); ++i)
            if (obs[i] > rep.threshold) last_exceed = static_cast<std::ptrdiff_t>(i);
        if (rep.radius > 0.0) {
            const std::size_t entry = static_cast<std::size_t>(last_exceed + 1);
            if (entry < obs.size() && traj.t[traj.i0 + entry] + spec.r <= T + 1e-9) {
                rep.entered = true;
                rep.entry_time = traj.t[traj.i0 + entry];
                double m = 0.0;
                for (std::size_t i = entry; i < obs.size(); ++i) m = std::max(m, obs[i]);
                rep.max_after_entry = m;
            } else {
                rep.entered = false;
                rep.entry_time = std::numeric_limits<double>::quiet_NaN();
            }
            rep.pass = rep.entered && rep.envelope_ok && rep.f_bound_ok && rep.smoothing_finite;
        } else {
            rep.entered = false;
            rep.entry_time = std::numeric_limits<double>::quiet_NaN();
            rep.pass = rep.envelope_ok && rep.f_bound_ok && rep.smoothing_finite;
        }
        out.push_back(rep);
    }
    return out;
}

std::string HolderReport::to_kv() const {
    std::ostringstream os;
    os << "check=holder delta=" << format_double(delta) << " a=" << format_double(a)
       << " b=" << format_double(b) << " pairs=" << n_pairs
       << " uniform_L=" << format_double(uniform_L) << " max_ratio=" << format_double(max_ratio)
       << " violations=" << violations << " pass=" << pass;
    return os.str();
}

HolderReport holder_check(const ProblemSpec& spec, const SolverOptions& opts, double delta,
                          double a, double b, int n_pairs, std::uint64_t seed) {
    require_half_open(delta);
    if (!(0.0 < a && a < b)) throw std::invalid_argument("holder_check: need 0 < a < b");
    HolderReport rep;
    rep.delta = delta;
    rep.a = a;
    rep.b = b;
    rep.n_pairs = n_pairs;

    const Trajectory traj = solve(spec, opts, b);
    const double phi0 = traj.u[traj.i0].norm();

    // Node indices inside [a, b] and the running max of ||F + d u||.
    std::vector<std::size_t> idx;
    for (std::size_t i = traj.i0; i < traj.n_nodes(); ++i)
        if (traj.t[i] >= a && traj.t[i] <= b) idx.push_back(i);
    if (idx.size() < 2) throw std::invalid_argument("holder_check: too few nodes in [a, b]");
    std::vector<double> g_running(traj.n_nodes(), 0.0);
    double g = 0.0;
    for (std::size_t i = traj.i0; i < traj.n_nodes(); ++i) {
        g = std::max(g, traj.g_norm[i]);
        g_running[i] = g;
    }
    rep.uniform_L = holder_uniform_L(delta, a, b, phi0, g_running.back());

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, idx.size() - 1);
    double max_ratio = 0.0;
    int violations = 0;
    for (int p = 0; p < n_pairs; ++p) {
        const std::size_t i1 = idx[pick(rng)];
        const std::size_t i2 = idx[pick(rng)];
        if (i1 == i2) continue;  // ratio defined as 0
        const double t1 = traj.t[std::min(i1, i2)];
        const double t2 = traj.t[std::max(i1, i2)];
        const double num = frac_power_norm(spec.op, delta, traj.u[i1] - traj.u[i2]);
        const double ratio = num / std::sqrt(t2 - t1);
        max_ratio = std::max(max_ratio, ratio);
        const double L = holder_pair_L(delta, t1, t2, phi0, g_running[std::max(i1, i2)]);
        if (ratio > L) ++violations;
    }
    rep.max_ratio = max_ratio;
    rep.violations = violations;
    rep.pass = violations == 0;
    return rep;
}

std::string DependenceReport::to_kv() const {
    std::ostringstream os;
    os << "check=dependence direction=" << direction;
    for (std::size_t i = 0; i < eps.size(); ++i)
        os << " dev_" << format_double(eps[i]) << "=" << format_double(deviation[i])
           << " resp_" << format_double(eps[i]) << "=" << format_double(response[i]);
    os << " monotone=" << monotone << " final=" << format_double(final_deviation)
       << " schedule_step0_equal=" << schedule_step0_equal << " pass=" << pass;
    return os.str();
}

namespace {

// Piecewise-linear tent on [lo, hi], peak 1 at the midpoint, 0 outside.
double tent(double x, double lo, double hi) {
    if (x <= lo || x >= hi) return 0.0;
    const double mid = 0.5 * (lo + hi);
    return x <= mid ? (x - lo) / (mid - lo) : (hi - x) / (hi - mid);
}

InitialFunction perturb_phi(const InitialFunction& phi, double eps, const ModalVector& dir,
                            double lo, double hi) {
    std::vector<double> thetas = phi.thetas();
    std::vector<ModalVector> values;
    values.reserve(thetas.size());
    for (std::size_t j = 0; j < thetas.size(); ++j) {
        ModalVector v = phi.values()[j];
        const double w = eps * tent(thetas[j], lo, hi);
        for (std::size_t k = 0; k < v.size(); ++k) v[k] += w * dir[k];
        values.push_back(std::move(v));
    }
    return InitialFunction::from_samples(std::move(thetas), std::move(values));
}

double sup_deviation(const Trajectory& a, const Trajectory& b, std::size_t from = 0) {
    if (a.n_nodes() != b.n_nodes())
        throw std::logic_error("sup_deviation: trajectories on different grids");
    double m = 0.0;
    for (std::size_t i = from; i < a.n_nodes(); ++i) m = std::max(m, (a.u[i] - b.u[i]).norm());
    return m;
}

}  // namespace

std::vector<DependenceReport> continuous_dependence(const ProblemSpec& spec,
                                                    const SolverOptions& opts,
                                                    std::span<const double> eps_ladder, double T,
                                                    double final_tol) {
    const Trajectory base = solve(spec, opts, T);
    const double base_delay0 = base.delay[base.i0];

    ModalVector dir(spec.op.n_modes());
    for (std::size_t k = 0; k < dir.size(); ++k)
        dir[k] = 1.0 / static_cast<double>((k + 1) * (k + 1));
    dir *= 1.0 / dir.norm();

    const double r = spec.r;
    const double eta_ign = spec.eta.eta_ign();
    struct Direction {
        std::string name;
        double lo, hi;
    };
    // The "recent" support keeps a margin above -eta_ign so the frozen
    // schedule at t = 0 reads only untouched samples.
    const std::vector<Direction> dirs = {
        {"full", -r, 0.0},
        {"tail", -r, -eta_ign},
        {"recent", -0.9 * eta_ign, 0.0},
    };

    std::vector<DependenceReport> out;
    for (const Direction& dd : dirs) {
        DependenceReport rep;
        rep.direction = dd.name;
        rep.schedule_step0_equal = true;
        for (double eps : eps_ladder) {
            ProblemSpec p = spec;
            p.phi = perturb_phi(spec.phi, eps, dir, dd.lo, dd.hi);
            const Trajectory tr = solve(p, opts, T);
            rep.eps.push_back(eps);
            rep.deviation.push_back(sup_deviation(base, tr));
            rep.response.push_back(sup_deviation(base, tr, base.i0 + 1));
            if (dd.name == "recent" && tr.delay[tr.i0] != base_delay0)
                rep.schedule_step0_equal = false;
        }
        rep.monotone = true;
        for (std::size_t i = 1; i < rep.deviation.size(); ++i)
            if (!(rep.deviation[i] < rep.deviation[i - 1])) rep.monotone = false;
        rep.final_deviation = rep.deviation.back();
        rep.pass = rep.monotone && rep.final_deviation < final_tol && rep.schedule_step0_equal;
        out.push_back(rep);
    }
    return out;
}

double semigroup_restart_discrepancy(const ProblemSpec& spec, const SolverOptions& opts,
                                     double t1, double t2) {
    const Trajectory full = solve(spec, opts, t1 + t2);
    const Trajectory first = solve(spec, opts, t1);

    ProblemSpec restarted = spec;
    restarted.phi = first.initial_from_segment(first.index_at_time(t1));
    const Trajectory second = solve(restarted, opts, t2);

    // Compare over the final window of length r.
    double m = 0.0;
    for (std::size_t i = second.i0; i < second.n_nodes(); ++i) {
        const double tt = second.t[i];
        if (tt < t2 - spec.r - 1e-12) continue;
        const std::size_t j = full.index_at_time(t1 + tt);
        m = std::max(m, (second.u[i] - full.u[j]).norm());
    }
    return m;
}

std::vector<ModalVector> constant_delay_oracle(const ProblemSpec& spec,
                                               std::span<const double> times, double h_fine) {
    if (spec.eta.variant() != DelayFunctional::Variant::Constant)
        throw UnsupportedError("constant_delay_oracle: delay must be constant");
    if (!spec.f.local())
        throw UnsupportedError("constant_delay_oracle: kernel must be dirac (local)");
    double c;
    if (spec.b.variant() == BirthFunction::Variant::Linear)
        c = spec.b.param();
    else if (spec.b.variant() == BirthFunction::Variant::Zero)
        c = 0.0;
    else
        throw UnsupportedError("constant_delay_oracle: birth function must be linear");
    if (!(h_fine > 0.0)) throw std::invalid_argument("constant_delay_oracle: h_fine must be > 0");
    if (times.empty()) return {};
    const double T = times.back();

    // Exactly uniform fine grid reaching T, so delayed-value lookups can
    // index cells directly.
    const std::size_t n_steps =
        std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(T / h_fine - 1e-9)));
    const double hf = T / static_cast<double>(n_steps);
    const double tau = spec.eta.constant_value();
    if (tau > 0.0 && tau < hf)
        throw std::invalid_argument("constant_delay_oracle: requires tau = 0 or tau >= h_fine");

    const std::size_t n_modes = spec.op.n_modes();
    const std::size_t n_fine = n_steps + 1;

    std::vector<std::vector<double>> fine(n_modes);
    for (std::size_t k = 0; k < n_modes; ++k) {
        const double mu = spec.op.eigenvalue(k) + spec.d;
        std::vector<double>& y = fine[k];
        y.resize(n_fine);
        y[0] = spec.phi.at_zero()[k];

        auto delayed = [&](double t) {
            const double s = t - tau;
            if (s <= 0.0) return spec.phi.eval(s)[k];
            const double pos = s / hf;
            std::size_t j = static_cast<std::size_t>(pos);
            if (j >= y.size() - 1) j = y.size() - 2;
            const double w = pos - static_cast<double>(j);
            return y[j] + w * (y[j + 1] - y[j]);
        };

        for (std::size_t n = 0; n + 1 < n_fine; ++n) {
            const double t = static_cast<double>(n) * hf;
            const double hh = hf;
            const double yn = y[n];
            if (tau == 0.0) {
                // Plain ODE u' = (c - mu) u.
                const double a = c - mu;
                const double k1 = a * yn;
                const double k2 = a * (yn + 0.5 * hh * k1);
                const double k3 = a * (yn + 0.5 * hh * k2);
                const double k4 = a * (yn + hh * k3);
                y[n + 1] = yn + hh / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            } else {
                // Time-dependent forcing z(t) = u(t - tau), known from the past.
                const double z0 = delayed(t);
                const double zh = delayed(t + 0.5 * hh);
                const double z1 = delayed(t + hh);
                const double k1 = -mu * yn + c * z0;
                const double k2 = -mu * (yn + 0.5 * hh * k1) + c * zh;
                const double k3 = -mu * (yn + 0.5 * hh * k2) + c * zh;
                const double k4 = -mu * (yn + hh * k3) + c * z1;
                y[n + 1] = yn + hh / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            }
        }
    }

    std::vector<ModalVector> out;
    out.reserve(times.size());
    for (double t : times) {
        ModalVector v(n_modes);
        const double pos = t / hf;
        std::size_t j = static_cast<std::size_t>(pos);
        if (j >= n_fine - 1) j = n_fine - 2;
        const double w = pos - static_cast<double>(j);
        for (std::size_t k = 0; k < n_modes; ++k)
            v[k] = fine[k][j] + w * (fine[k][j + 1] - fine[k][j]);
        out.push_back(std::move(v));
    }
    return out;
}

std::string OracleReport::to_kv() const {
    std::ostringstream os;
    os << "check=oracle max_l2_error=" << format_double(max_l2_error)
       << " tol=" << format_double(tol) << " pass=" << pass;
    return os.str();
}

OracleReport oracle_check(const ProblemSpec& spec, const SolverOptions& opts, double T,
                          double tol) {
    const Trajectory traj = solve(spec, opts, T);
    std::vector<double> times(traj.t.begin() + static_cast<std::ptrdiff_t>(traj.i0),
                              traj.t.end());
    const std::vector<ModalVector> ref = constant_delay_oracle(spec, times, opts.h / 10.0);
    OracleReport rep;
    rep.tol = tol;
    for (std::size_t i = 0; i < times.size(); ++i)
        rep.max_l2_error = std::max(rep.max_l2_error, (traj.u[traj.i0 + i] - ref[i]).norm());
    rep.pass = rep.max_l2_error < tol;
    return rep;
}

double schedule_consistency_max_error(const ProblemSpec& spec, const Trajectory& traj) {
    double m = 0.0;
    for (std::size_t n = traj.i0; n < traj.n_nodes(); ++n) {
        const HistorySegment seg = traj.segment_at(n);
        const double re = spec.eta.eval(seg);
        m = std::max(m, std::abs(re - traj.delay[n]));
    }
    return m;
}

}  // namespace sdd
