#pragma once

#include <string>
#include <vector>

#include "sdd/modal.hpp"
#include "sdd/spectral.hpp"

namespace sdd {

/// Pointwise birth-rate map b: R -> R with certified growth and Lipschitz
/// constants |b(w)| <= C1|w| + Cb and |b(w1)-b(w2)| <= Lb|w1-w2| on the
/// declared working range. Constants are validated by dense sampling at
/// construction.
class BirthFunction {
public:
    enum class Variant { Nicholson, Linear, Zero, BoundedTanh };

    static BirthFunction nicholson(double p, double w_max = 50.0);
    static BirthFunction linear(double c);
    static BirthFunction zero();
    /// Bounded custom primitive b(w) = c * tanh(w).
    static BirthFunction bounded_tanh(double c);

    double eval(double w) const;

    Variant variant() const { return variant_; }
    double param() const { return param_; }
    bool bounded() const { return c1_ == 0.0; }
    double c1() const { return c1_; }
    double cb() const { return cb_; }
    double lipschitz() const { return lb_; }
    double range_lo() const { return range_lo_; }
    double range_hi() const { return range_hi_; }
    std::string name() const;

private:
    BirthFunction() = default;
    void certify() const;  // dense-sampling validation of the declared constants

    Variant variant_ = Variant::Zero;
    double param_ = 0.0;
    double c1_ = 0.0;
    double cb_ = 0.0;
    double lb_ = 0.0;
    double range_lo_ = 0.0;
    double range_hi_ = 0.0;
};

inline double eval_b(const BirthFunction& b, double w) { return b.eval(w); }

/// Spatial interaction kernel f on Omega - Omega. The gaussian variant is
/// f(z) = exp(-z^2/(4 alpha)) / sqrt(4 pi alpha) with bound M_f = f(0); the
/// dirac variant selects the local reaction path F_l(u_t)(x) = b(u(t-eta, x)).
class Kernel {
public:
    enum class Variant { Gaussian, Dirac };

    static Kernel gaussian(double alpha);
    static Kernel dirac();

    Variant variant() const { return variant_; }
    bool local() const { return variant_ == Variant::Dirac; }
    double alpha() const { return alpha_; }
    /// sup |f|; UnsupportedError for the dirac variant.
    double bound() const;
    double eval(double z) const;
    std::string name() const;

private:
    Kernel() = default;
    Variant variant_ = Variant::Dirac;
    double alpha_ = 0.0;
};

/// Precomputed kernel values at all grid differences k*dx, k in [-M, M],
/// including the boundary nodes. Built once per solve.
struct ConvolutionPlan {
    std::vector<double> table;  // size 2*n_grid + 1, or empty for dirac
    bool local = false;
};

ConvolutionPlan make_convolution_plan(const SpectralOperator& op, const Kernel& f);

/// The delayed reaction term on a single delayed snapshot:
///   nonlocal: (F v)(x) = int_Omega b(v(y)) f(x - y) dy  (trapezoid quadrature)
///   local:    (F_l v)(x) = b(v(x))
/// The caller resolves the delayed time; this is a pure map L2 -> L2.
ModalVector eval_F(const SpectralOperator& op, const BirthFunction& b, const Kernel& f,
                   const ModalVector& v_delayed);
ModalVector eval_F(const SpectralOperator& op, const BirthFunction& b,
                   const ConvolutionPlan& plan, const ModalVector& v_delayed);

/// The uniform reaction bound M_f |Omega|^{3/2} C_b. Requires a bounded b
/// (C1 = 0) and an integral kernel.
double f_norm_bound(const BirthFunction& b, const Kernel& f, const SpectralOperator& op);

/// The Lipschitz transport constant of F: M_f |Omega| L_b for integral
/// kernels, L_b for the local path.
double f_lipschitz(const BirthFunction& b, const Kernel& f, const SpectralOperator& op);

}  // namespace sdd
