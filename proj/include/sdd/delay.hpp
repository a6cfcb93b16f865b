#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sdd/history.hpp"
#include "sdd/modal.hpp"

namespace sdd {

/// The inner maps p_k: L2 -> R+ used by the delay constructors, drawn from a
/// small named registry so configurations stay declarative:
///   affine_norm: clamp(a + b*||v||, 0, cap)
///   mean_mode:   clamp(a + b*v_1,   0, cap)
struct InnerMap {
    enum class Kind { AffineNorm, MeanMode };
    Kind kind = Kind::AffineNorm;
    double a = 0.0;
    double b = 0.0;

    double eval(const ModalVector& v, double cap) const;
    static InnerMap parse(const std::string& name, double a, double b);
    std::string name() const;
};

struct DelayEval {
    double tau = 0.0;
    bool clamped = false;  // hit the [eta_min, r] range clamp
};

/// A state-dependent delay functional eta: C([-r,0];L2) -> [0, r] that reads
/// the history only at offsets <= -eta_ign (so two histories agreeing on
/// [-r, -eta_ign] produce the same delay). Constructors cover point,
/// multi-point, integral-of-p and p-of-integral forms plus the constant
/// degenerate case. The value is always clamped to [0, r]; an optional floor
/// eta_min tightens the range to [eta_min, r].
class DelayFunctional {
public:
    enum class Variant { Point, MultiPoint, IntegralOfP, POfIntegral, Constant };

    static DelayFunctional point(InnerMap p, double r_k, double r,
                                 std::optional<double> declared_eta_ign = {});
    static DelayFunctional multi_point(std::vector<std::pair<InnerMap, double>> terms, double r,
                                       std::optional<double> declared_eta_ign = {});
    static DelayFunctional integral_of_p(InnerMap p, double eta_ign, double r);
    static DelayFunctional p_of_integral(InnerMap p, double eta_ign, double r);
    static DelayFunctional constant(double tau, double r);

    /// Negative control for check_H: reads the history at the current time
    /// while still declaring a positive ignore horizon.
    static DelayFunctional violating_point(InnerMap p, double declared_eta_ign, double r);

    DelayFunctional with_floor(double eta_min) const;

    Variant variant() const { return variant_; }
    double window() const { return r_; }
    double eta_ign() const { return eta_ign_; }
    double eta_min() const { return eta_min_; }
    bool has_floor() const { return eta_min_ > 0.0; }
    const std::vector<std::pair<InnerMap, double>>& terms() const { return terms_; }
    double constant_value() const { return tau_; }
    bool is_violator() const { return violator_; }
    std::string describe() const;

    /// Evaluation anchored at the segment's newest sample.
    DelayEval eval_ex(const HistorySegment& h) const;
    double eval(const HistorySegment& h) const { return eval_ex(h).tau; }

    /// Evaluation of eta(u_t) for t = t_anchor on a segment that may extend
    /// past the anchor (used when the delay schedule is frozen over a macro
    /// step). Requires [t_anchor - r, t_anchor] inside the stored range.
    DelayEval eval_at_ex(const HistorySegment& h, double t_anchor) const;

private:
    DelayFunctional() = default;

    Variant variant_ = Variant::Constant;
    std::vector<std::pair<InnerMap, double>> terms_;  // (p_k, r_k) for point forms
    double r_ = 0.0;
    double eta_ign_ = 0.0;
    double eta_min_ = 0.0;
    double tau_ = 0.0;
    bool violator_ = false;
};

struct CheckHReport {
    bool pass = false;
    double max_discrepancy = 0.0;
    int trials = 0;
};

/// Randomized hypothesis check: draws `trials` pairs of histories that agree
/// on [-r, -eta_ign] and differ on (-eta_ign, 0], and reports the largest
/// |eta(phi1) - eta(phi2)|. Pass requires the discrepancy to be exactly zero.
CheckHReport check_H(const DelayFunctional& eta, int trials, std::uint64_t seed,
                     std::size_t n_modes = 8);

}  // namespace sdd
