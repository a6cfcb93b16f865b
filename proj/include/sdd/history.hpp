#pragma once

#include <deque>
#include <functional>
#include <string>
#include <vector>

#include "sdd/modal.hpp"

namespace sdd {

class SpectralOperator;

/// The trailing solution segment u_t over [t_now - r, t_now], stored as
/// time-ordered samples with linear interpolation in between. Samples are
/// retained down to t_now - r - slack so the far edge of the window stays
/// evaluable under floating-point rounding. Owned by a single solve.
class HistorySegment {
public:
    struct Sample {
        double t;
        ModalVector v;
    };

    HistorySegment(double window, double slack);

    /// Builds a segment from strictly increasing samples spanning at least
    /// [t_last - window, t_last].
    static HistorySegment from_samples(double window, double slack,
                                       std::vector<Sample> samples);

    double window() const { return window_; }
    double slack() const { return slack_; }
    double t_now() const;
    double t_oldest() const;
    std::size_t size() const { return samples_.size(); }
    const std::deque<Sample>& samples() const { return samples_; }
    const ModalVector& latest() const;

    /// Linear interpolation; exact at sample times. Throws OutOfWindowError
    /// outside [t_oldest, t_now] (modulo a rounding-level tolerance).
    ModalVector eval(double s) const;

    /// Appends a sample (t_new must exceed t_now) and drops samples older
    /// than t_now - window - slack.
    void push(double t_new, ModalVector v);

    /// max ||u(s)|| over the window [t_now - window, t_now]. Attained at a
    /// node of the piecewise-linear interpolant, so this is the exact sup of
    /// the stored representative.
    double sup_norm() const;

    /// A copy restricted to samples with t >= lo - slack, re-windowed. Used
    /// to freeze history at a macro-step seam.
    HistorySegment rewindowed(double new_window) const;

    /// Sample times strictly inside (lo, hi); trapezoid helpers add the
    /// interpolated endpoints themselves.
    std::vector<double> sample_times_between(double lo, double hi) const;

private:
    std::size_t locate(double s) const;

    double window_;
    double slack_;
    std::deque<Sample> samples_;
};

/// Trapezoid integral of g(u(s)) over [lo, hi] with nodes at the segment's
/// sample times plus the interpolated endpoints.
double integrate_scalar(const HistorySegment& h, double lo, double hi,
                        const std::function<double(const ModalVector&)>& g);

/// Componentwise trapezoid integral of u(s) over [lo, hi].
ModalVector integrate_vector(const HistorySegment& h, double lo, double hi);

/// The initial function phi on [-r, 0]: theta samples with linear
/// interpolation. phi(0) is the last sample.
class InitialFunction {
public:
    static InitialFunction from_function(double r, std::size_t n_cells,
                                         const std::function<ModalVector(double)>& f);
    static InitialFunction from_samples(std::vector<double> thetas,
                                        std::vector<ModalVector> values);
    /// CSV with header "theta,mode_1,..." (modal coefficients) or
    /// "theta,node_1,..." (grid values, converted through op).
    static InitialFunction load_csv(const std::string& path, const SpectralOperator& op);

    double r() const { return -thetas_.front(); }
    std::size_t n_samples() const { return thetas_.size(); }
    const std::vector<double>& thetas() const { return thetas_; }
    const std::vector<ModalVector>& values() const { return values_; }
    const ModalVector& at_zero() const { return values_.back(); }

    ModalVector eval(double theta) const;

    /// Linear resampling onto a uniform grid of n_cells cells over [-r, 0].
    /// Exact (sample-for-sample) when the grids already coincide.
    InitialFunction resampled(std::size_t n_cells) const;

private:
    std::vector<double> thetas_;
    std::vector<ModalVector> values_;
};

/// The extension of phi by its value at 0: equal to phi on [-r, 0] and
/// constant at phi(0) on (0, eta_ign). Returned as a segment whose window
/// spans the whole extended range.
HistorySegment extend(const InitialFunction& phi, double eta_ign);

}  // namespace sdd
