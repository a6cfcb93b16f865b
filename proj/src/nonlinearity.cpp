#include "sdd/nonlinearity.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "sdd/errors.hpp"
#include "sdd/kernels.hpp"

namespace sdd {

double BirthFunction::eval(double w) const {
    switch (variant_) {
        case Variant::Nicholson: return param_ * w * std::exp(-w);
        case Variant::Linear: return param_ * w;
        case Variant::Zero: return 0.0;
        case Variant::BoundedTanh: return param_ * std::tanh(w);
    }
    return 0.0;
}

std::string BirthFunction::name() const {
    switch (variant_) {
        case Variant::Nicholson: return "nicholson";
        case Variant::Linear: return "linear";
        case Variant::Zero: return "zero";
        case Variant::BoundedTanh: return "tanh";
    }
    return "?";
}

void BirthFunction::certify() const {
    // |b(w)| <= C1|w| + Cb and a difference-quotient Lipschitz check over a
    // dense sample of the working range.
    const int n = 2000;
    const double lo = range_lo_, hi = range_hi_;
    double prev_w = lo, prev_b = eval(lo);
    for (int i = 0; i <= n; ++i) {
        const double w = lo + (hi - lo) * static_cast<double>(i) / n;
        const double bw = eval(w);
        if (std::abs(bw) > c1_ * std::abs(w) + cb_ + 1e-12)
            throw std::invalid_argument("BirthFunction: growth constants fail certification");
        if (i > 0) {
            const double dq = std::abs(bw - prev_b) / (w - prev_w);
            if (dq > lb_ * (1.0 + 1e-9) + 1e-12)
                throw std::invalid_argument("BirthFunction: Lipschitz constant fails certification");
        }
        prev_w = w;
        prev_b = bw;
    }
}

BirthFunction BirthFunction::nicholson(double p, double w_max) {
    if (!(p > 0.0)) throw std::invalid_argument("BirthFunction: nicholson needs p > 0");
    if (!(w_max > 1.0)) throw std::invalid_argument("BirthFunction: working range too small");
    BirthFunction b;
    b.variant_ = Variant::Nicholson;
    b.param_ = p;
    b.c1_ = 0.0;
    b.cb_ = p / std::numbers::e;  // max of w e^{-w} on [0, inf) is 1/e at w = 1
    b.lb_ = p;                    // |b'| = p|1-w|e^{-w} peaks at w = 0
    b.range_lo_ = 0.0;
    b.range_hi_ = w_max;
    b.certify();
    return b;
}

BirthFunction BirthFunction::linear(double c) {
    BirthFunction b;
    b.variant_ = Variant::Linear;
    b.param_ = c;
    b.c1_ = std::abs(c);
    b.cb_ = 0.0;
    b.lb_ = std::abs(c);
    b.range_lo_ = -50.0;
    b.range_hi_ = 50.0;
    b.certify();
    return b;
}

BirthFunction BirthFunction::zero() {
    BirthFunction b;
    b.variant_ = Variant::Zero;
    b.range_lo_ = -50.0;
    b.range_hi_ = 50.0;
    b.certify();
    return b;
}

BirthFunction BirthFunction::bounded_tanh(double c) {
    if (!(c >= 0.0)) throw std::invalid_argument("BirthFunction: tanh needs c >= 0");
    BirthFunction b;
    b.variant_ = Variant::BoundedTanh;
    b.param_ = c;
    b.c1_ = 0.0;
    b.cb_ = c;
    b.lb_ = c;
    b.range_lo_ = -50.0;
    b.range_hi_ = 50.0;
    b.certify();
    return b;
}

Kernel Kernel::gaussian(double alpha) {
    if (!(alpha > 0.0)) throw std::invalid_argument("Kernel: gaussian needs alpha > 0");
    Kernel f;
    f.variant_ = Variant::Gaussian;
    f.alpha_ = alpha;
    return f;
}

Kernel Kernel::dirac() {
    Kernel f;
    f.variant_ = Variant::Dirac;
    return f;
}

double Kernel::bound() const {
    if (local()) throw UnsupportedError("Kernel: no finite sup bound for the dirac variant");
    return 1.0 / std::sqrt(4.0 * std::numbers::pi * alpha_);
}

double Kernel::eval(double z) const {
    if (local()) throw UnsupportedError("Kernel: dirac variant has no pointwise values");
    return std::exp(-z * z / (4.0 * alpha_)) / std::sqrt(4.0 * std::numbers::pi * alpha_);
}

std::string Kernel::name() const { return local() ? "dirac" : "gaussian"; }

ConvolutionPlan make_convolution_plan(const SpectralOperator& op, const Kernel& f) {
    ConvolutionPlan plan;
    plan.local = f.local();
    if (plan.local) return plan;
    const std::size_t m = op.n_grid();
    plan.table.resize(2 * m + 1);
    for (std::size_t idx = 0; idx < plan.table.size(); ++idx) {
        const double k = static_cast<double>(idx) - static_cast<double>(m);
        plan.table[idx] = f.eval(k * op.dx());
    }
    return plan;
}

ModalVector eval_F(const SpectralOperator& op, const BirthFunction& b,
                   const ConvolutionPlan& plan, const ModalVector& v_delayed) {
    std::vector<double> nodal = to_nodal(op, v_delayed);
    for (double& w : nodal) w = b.eval(w);
    if (plan.local) return to_modal(op, nodal);
    std::vector<double> g(op.n_grid());
    // Dirichlet boundary nodes carry the integrand value b(0).
    kernels::convolve(nodal, b.eval(0.0), plan.table, op.dx(), g);
    return to_modal(op, g);
}

ModalVector eval_F(const SpectralOperator& op, const BirthFunction& b, const Kernel& f,
                   const ModalVector& v_delayed) {
    return eval_F(op, b, make_convolution_plan(op, f), v_delayed);
}

double f_norm_bound(const BirthFunction& b, const Kernel& f, const SpectralOperator& op) {
    if (!b.bounded())
        throw UnsupportedError("f_norm_bound: requires a bounded birth function (C1 = 0)");
    const double omega = op.length();
    return f.bound() * std::pow(omega, 1.5) * b.cb();
}

double f_lipschitz(const BirthFunction& b, const Kernel& f, const SpectralOperator& op) {
    if (f.local()) return b.lipschitz();
    return f.bound() * op.length() * b.lipschitz();
}

}  // namespace sdd
