#include "sdd/delay.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "sdd/errors.hpp"

namespace sdd {

double InnerMap::eval(const ModalVector& v, double cap) const {
    double feature = 0.0;
    switch (kind) {
        case Kind::AffineNorm: feature = v.norm(); break;
        case Kind::MeanMode: feature = v.size() > 0 ? v[0] : 0.0; break;
    }
    return std::clamp(a + b * feature, 0.0, cap);
}

InnerMap InnerMap::parse(const std::string& name, double a, double b) {
    InnerMap p;
    if (name == "affine_norm")
        p.kind = Kind::AffineNorm;
    else if (name == "mean_mode")
        p.kind = Kind::MeanMode;
    else
        throw std::invalid_argument("InnerMap: unknown primitive '" + name + "'");
    p.a = a;
    p.b = b;
    if (a < 0.0) throw std::invalid_argument("InnerMap: offset a must be >= 0");
    return p;
}

std::string InnerMap::name() const {
    return kind == Kind::AffineNorm ? "affine_norm" : "mean_mode";
}

namespace {
void require_window(double r) {
    if (!(r > 0.0)) throw std::invalid_argument("DelayFunctional: window r must be positive");
}
}  // namespace

DelayFunctional DelayFunctional::point(InnerMap p, double r_k, double r,
                                       std::optional<double> declared_eta_ign) {
    return multi_point({{p, r_k}}, r, declared_eta_ign);
}

DelayFunctional DelayFunctional::multi_point(std::vector<std::pair<InnerMap, double>> terms,
                                             double r, std::optional<double> declared_eta_ign) {
    require_window(r);
    if (terms.empty()) throw std::invalid_argument("DelayFunctional: no terms");
    double min_rk = r;
    for (const auto& [p, rk] : terms) {
        if (!(rk > 0.0)) throw std::invalid_argument("DelayFunctional: offsets must satisfy min r_k > 0");
        if (rk > r) throw std::invalid_argument("DelayFunctional: offset r_k exceeds the window r");
        min_rk = std::min(min_rk, rk);
    }
    const double eta_ign = declared_eta_ign.value_or(min_rk);
    if (!(eta_ign > 0.0) || eta_ign > r)
        throw std::invalid_argument("DelayFunctional: eta_ign must lie in (0, r]");
    if (min_rk < eta_ign)
        throw std::invalid_argument(
            "DelayFunctional: offset r_k inside the ignore zone (r_k < eta_ign)");
    DelayFunctional d;
    d.variant_ = terms.size() == 1 ? Variant::Point : Variant::MultiPoint;
    d.terms_ = std::move(terms);
    d.r_ = r;
    d.eta_ign_ = eta_ign;
    return d;
}

DelayFunctional DelayFunctional::integral_of_p(InnerMap p, double eta_ign, double r) {
    require_window(r);
    if (!(eta_ign > 0.0) || eta_ign > r)
        throw std::invalid_argument("DelayFunctional: eta_ign must lie in (0, r]");
    DelayFunctional d;
    d.variant_ = Variant::IntegralOfP;
    d.terms_ = {{p, r}};
    d.r_ = r;
    d.eta_ign_ = eta_ign;
    return d;
}

DelayFunctional DelayFunctional::p_of_integral(InnerMap p, double eta_ign, double r) {
    DelayFunctional d = integral_of_p(p, eta_ign, r);
    d.variant_ = Variant::POfIntegral;
    return d;
}

DelayFunctional DelayFunctional::constant(double tau, double r) {
    require_window(r);
    if (tau < 0.0 || tau > r)
        throw std::invalid_argument("DelayFunctional: constant delay must lie in [0, r]");
    DelayFunctional d;
    d.variant_ = Variant::Constant;
    d.r_ = r;
    d.eta_ign_ = r;  // a constant delay ignores the whole history
    d.tau_ = tau;
    return d;
}

DelayFunctional DelayFunctional::violating_point(InnerMap p, double declared_eta_ign, double r) {
    require_window(r);
    if (!(declared_eta_ign > 0.0) || declared_eta_ign > r)
        throw std::invalid_argument("DelayFunctional: eta_ign must lie in (0, r]");
    DelayFunctional d;
    d.variant_ = Variant::Point;
    d.terms_ = {{p, 0.0}};  // reads h(t_now)
    d.r_ = r;
    d.eta_ign_ = declared_eta_ign;
    d.violator_ = true;
    return d;
}

DelayFunctional DelayFunctional::with_floor(double eta_min) const {
    if (eta_min < 0.0 || eta_min > r_)
        throw std::invalid_argument("DelayFunctional: eta_min must lie in [0, r]");
    DelayFunctional d = *this;
    d.eta_min_ = eta_min;
    return d;
}

std::string DelayFunctional::describe() const {
    switch (variant_) {
        case Variant::Point: return violator_ ? "violating_point" : "point";
        case Variant::MultiPoint: return "multi_point";
        case Variant::IntegralOfP: return "integral_of_p";
        case Variant::POfIntegral: return "p_of_integral";
        case Variant::Constant: return "constant";
    }
    return "?";
}

DelayEval DelayFunctional::eval_ex(const HistorySegment& h) const {
    return eval_at_ex(h, h.t_now());
}

DelayEval DelayFunctional::eval_at_ex(const HistorySegment& h, double t_anchor) const {
    const double tol = 1e-12 * std::max(1.0, std::abs(t_anchor));
    if (t_anchor - r_ < h.t_oldest() - tol || t_anchor > h.t_now() + tol)
        throw OutOfWindowError("DelayFunctional: history window does not cover [t - r, t]");

    double raw = 0.0;
    switch (variant_) {
        case Variant::Constant:
            raw = tau_;
            break;
        case Variant::Point:
        case Variant::MultiPoint:
            for (const auto& [p, rk] : terms_) raw += p.eval(h.eval(t_anchor - rk), r_);
            break;
        case Variant::IntegralOfP: {
            const InnerMap& p = terms_.front().first;
            raw = integrate_scalar(h, t_anchor - r_, t_anchor - eta_ign_,
                                   [&](const ModalVector& v) { return p.eval(v, r_); });
            break;
        }
        case Variant::POfIntegral: {
            const InnerMap& p = terms_.front().first;
            raw = p.eval(integrate_vector(h, t_anchor - r_, t_anchor - eta_ign_), r_);
            break;
        }
    }

    DelayEval out;
    out.tau = std::clamp(raw, eta_min_, r_);
    out.clamped = out.tau != raw;
    return out;
}

CheckHReport check_H(const DelayFunctional& eta, int trials, std::uint64_t seed,
                     std::size_t n_modes) {
    if (trials < 1) throw std::invalid_argument("check_H: trials must be >= 1");
    const double r = eta.window();
    const double eta_ign = std::min(eta.eta_ign(), r);

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    auto random_vec = [&]() {
        ModalVector v(n_modes);
        for (std::size_t k = 0; k < n_modes; ++k)
            v[k] = unif(rng) / static_cast<double>(k + 1);
        return v;
    };

    // theta grid with a node pinned at -eta_ign so the agreement region
    // [-r, -eta_ign] is read from identical samples in both histories.
    const int m_tail = 8;
    const int m_recent = 8;
    std::vector<double> thetas;
    if (eta_ign < r) {
        for (int j = 0; j <= m_tail; ++j)
            thetas.push_back(-r + (r - eta_ign) * static_cast<double>(j) / m_tail);
    } else {
        thetas.push_back(-r);
    }
    for (int j = 1; j <= m_recent; ++j)
        thetas.push_back(-eta_ign + eta_ign * static_cast<double>(j) / m_recent);

    CheckHReport rep;
    rep.trials = trials;
    double max_disc = 0.0;
    for (int trial = 0; trial < trials; ++trial) {
        std::vector<HistorySegment::Sample> s1, s2;
        s1.reserve(thetas.size());
        s2.reserve(thetas.size());
        for (double th : thetas) {
            ModalVector v = random_vec();
            s1.push_back({th, v});
            if (th > -eta_ign) {
                ModalVector w = random_vec();  // differ on (-eta_ign, 0]
                s2.push_back({th, std::move(w)});
            } else {
                s2.push_back({th, std::move(v)});
            }
        }
        const HistorySegment h1 = HistorySegment::from_samples(r, 0.0, std::move(s1));
        const HistorySegment h2 = HistorySegment::from_samples(r, 0.0, std::move(s2));
        max_disc = std::max(max_disc, std::abs(eta.eval(h1) - eta.eval(h2)));
    }
    rep.max_discrepancy = max_disc;
    rep.pass = max_disc == 0.0;
    return rep;
}

}  // namespace sdd
