#include "sdd/history.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "sdd/errors.hpp"
#include "sdd/spectral.hpp"

namespace sdd {

namespace {
// Absolute tolerance for window-boundary comparisons: rounding in t - tau
// arithmetic may land an evaluation an ulp outside the stored range.
double edge_tol(double t) { return 1e-12 * std::max(1.0, std::abs(t)); }
}  // namespace

HistorySegment::HistorySegment(double window, double slack)
    : window_(window), slack_(slack) {
    if (!(window > 0.0)) throw std::invalid_argument("HistorySegment: window must be positive");
    if (slack < 0.0) throw std::invalid_argument("HistorySegment: slack must be >= 0");
}

HistorySegment HistorySegment::from_samples(double window, double slack,
                                            std::vector<Sample> samples) {
    HistorySegment h(window, slack);
    if (samples.empty()) throw std::invalid_argument("HistorySegment: no samples");
    for (std::size_t i = 1; i < samples.size(); ++i)
        if (!(samples[i].t > samples[i - 1].t))
            throw std::invalid_argument("HistorySegment: sample times must be strictly increasing");
    const double span = samples.back().t - samples.front().t;
    if (span + edge_tol(span) < window)
        throw std::invalid_argument("HistorySegment: samples do not span the window");
    h.samples_.assign(samples.begin(), samples.end());
    return h;
}

double HistorySegment::t_now() const {
    if (samples_.empty()) throw std::logic_error("HistorySegment: empty");
    return samples_.back().t;
}

double HistorySegment::t_oldest() const {
    if (samples_.empty()) throw std::logic_error("HistorySegment: empty");
    return samples_.front().t;
}

const ModalVector& HistorySegment::latest() const {
    if (samples_.empty()) throw std::logic_error("HistorySegment: empty");
    return samples_.back().v;
}

std::size_t HistorySegment::locate(double s) const {
    // Index of the first sample with t >= s; caller guarantees in range.
    auto it = std::lower_bound(samples_.begin(), samples_.end(), s,
                               [](const Sample& a, double val) { return a.t < val; });
    return static_cast<std::size_t>(it - samples_.begin());
}

ModalVector HistorySegment::eval(double s) const {
    if (samples_.empty()) throw std::logic_error("HistorySegment: empty");
    const double lo = samples_.front().t;
    const double hi = samples_.back().t;
    if (s < lo - edge_tol(lo) || s > hi + edge_tol(hi))
        throw OutOfWindowError("HistorySegment: evaluation outside stored window");
    const double sc = std::clamp(s, lo, hi);
    const std::size_t j = locate(sc);
    if (samples_[j].t == sc) return samples_[j].v;
    const Sample& a = samples_[j - 1];
    const Sample& b = samples_[j];
    const double w = (sc - a.t) / (b.t - a.t);
    return lerp(a.v, b.v, w);
}

void HistorySegment::push(double t_new, ModalVector v) {
    if (!samples_.empty() && !(t_new > samples_.back().t))
        throw std::invalid_argument("HistorySegment: push requires t_new > t_now");
    samples_.push_back({t_new, std::move(v)});
    const double cutoff = t_new - window_ - slack_;
    while (samples_.size() >= 2 && samples_[1].t <= cutoff) samples_.pop_front();
}

double HistorySegment::sup_norm() const {
    const double lo = t_now() - window_;
    double m = eval(lo).norm();
    for (const Sample& s : samples_)
        if (s.t > lo) m = std::max(m, s.v.norm());
    return m;
}

HistorySegment HistorySegment::rewindowed(double new_window) const {
    HistorySegment h(new_window, slack_);
    const double cutoff = t_now() - new_window - slack_;
    std::size_t first = 0;
    while (first + 1 < samples_.size() && samples_[first + 1].t <= cutoff) ++first;
    for (std::size_t i = first; i < samples_.size(); ++i) h.samples_.push_back(samples_[i]);
    return h;
}

std::vector<double> HistorySegment::sample_times_between(double lo, double hi) const {
    std::vector<double> out;
    for (const Sample& s : samples_)
        if (s.t > lo && s.t < hi) out.push_back(s.t);
    return out;
}

double integrate_scalar(const HistorySegment& h, double lo, double hi,
                        const std::function<double(const ModalVector&)>& g) {
    if (!(hi > lo)) return 0.0;
    std::vector<double> nodes;
    nodes.push_back(lo);
    for (double t : h.sample_times_between(lo, hi)) nodes.push_back(t);
    nodes.push_back(hi);
    double acc = 0.0;
    double g_prev = g(h.eval(nodes[0]));
    for (std::size_t i = 1; i < nodes.size(); ++i) {
        const double g_next = g(h.eval(nodes[i]));
        acc += 0.5 * (nodes[i] - nodes[i - 1]) * (g_prev + g_next);
        g_prev = g_next;
    }
    return acc;
}

ModalVector integrate_vector(const HistorySegment& h, double lo, double hi) {
    ModalVector acc(h.latest().size());
    if (!(hi > lo)) return acc;
    std::vector<double> nodes;
    nodes.push_back(lo);
    for (double t : h.sample_times_between(lo, hi)) nodes.push_back(t);
    nodes.push_back(hi);
    ModalVector prev = h.eval(nodes[0]);
    for (std::size_t i = 1; i < nodes.size(); ++i) {
        ModalVector next = h.eval(nodes[i]);
        const double w = 0.5 * (nodes[i] - nodes[i - 1]);
        for (std::size_t k = 0; k < acc.size(); ++k) acc[k] += w * (prev[k] + next[k]);
        prev = std::move(next);
    }
    return acc;
}

InitialFunction InitialFunction::from_function(double r, std::size_t n_cells,
                                               const std::function<ModalVector(double)>& f) {
    if (!(r > 0.0)) throw std::invalid_argument("InitialFunction: r must be positive");
    if (n_cells < 1) throw std::invalid_argument("InitialFunction: need at least one cell");
    InitialFunction phi;
    phi.thetas_.resize(n_cells + 1);
    phi.values_.reserve(n_cells + 1);
    for (std::size_t j = 0; j <= n_cells; ++j) {
        const double theta =
            (j == n_cells) ? 0.0 : -r + static_cast<double>(j) * (r / static_cast<double>(n_cells));
        phi.thetas_[j] = theta;
        phi.values_.push_back(f(theta));
    }
    return phi;
}

InitialFunction InitialFunction::from_samples(std::vector<double> thetas,
                                              std::vector<ModalVector> values) {
    if (thetas.size() != values.size() || thetas.size() < 2)
        throw std::invalid_argument("InitialFunction: need matching theta/value samples");
    for (std::size_t i = 1; i < thetas.size(); ++i)
        if (!(thetas[i] > thetas[i - 1]))
            throw std::invalid_argument("InitialFunction: thetas must be strictly increasing");
    if (thetas.back() != 0.0)
        throw std::invalid_argument("InitialFunction: last sample must sit at theta = 0");
    if (!(thetas.front() < 0.0))
        throw std::invalid_argument("InitialFunction: first sample must sit at theta = -r < 0");
    InitialFunction phi;
    phi.thetas_ = std::move(thetas);
    phi.values_ = std::move(values);
    return phi;
}

ModalVector InitialFunction::eval(double theta) const {
    const double lo = thetas_.front();
    if (theta < lo - edge_tol(lo) || theta > edge_tol(1.0))
        throw OutOfWindowError("InitialFunction: theta outside [-r, 0]");
    const double tc = std::clamp(theta, lo, 0.0);
    auto it = std::lower_bound(thetas_.begin(), thetas_.end(), tc);
    const std::size_t j = static_cast<std::size_t>(it - thetas_.begin());
    if (j < thetas_.size() && thetas_[j] == tc) return values_[j];
    const double w = (tc - thetas_[j - 1]) / (thetas_[j] - thetas_[j - 1]);
    return lerp(values_[j - 1], values_[j], w);
}

InitialFunction InitialFunction::resampled(std::size_t n_cells) const {
    const double rr = r();
    return from_function(rr, n_cells, [this](double th) { return eval(th); });
}

InitialFunction InitialFunction::load_csv(const std::string& path, const SpectralOperator& op) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("InitialFunction: cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("InitialFunction: empty CSV " + path);

    auto split = [](const std::string& s) {
        std::vector<std::string> cells;
        std::stringstream ss(s);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        return cells;
    };

    const std::vector<std::string> header = split(line);
    if (header.size() < 2 || header[0] != "theta")
        throw std::invalid_argument("InitialFunction: CSV header must start with 'theta'");
    bool modal;
    if (header[1].rfind("mode_", 0) == 0)
        modal = true;
    else if (header[1].rfind("node_", 0) == 0)
        modal = false;
    else
        throw std::invalid_argument("InitialFunction: columns must be mode_* or node_*");
    const std::size_t ncols = header.size() - 1;
    if (modal && ncols != op.n_modes())
        throw std::invalid_argument("InitialFunction: CSV has wrong number of modal columns");
    if (!modal && ncols != op.n_grid())
        throw std::invalid_argument("InitialFunction: CSV has wrong number of nodal columns");

    std::vector<double> thetas;
    std::vector<ModalVector> values;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const std::vector<std::string> cells = split(line);
        if (cells.size() != header.size())
            throw std::invalid_argument("InitialFunction: ragged CSV row in " + path);
        thetas.push_back(std::stod(cells[0]));
        std::vector<double> row(ncols);
        for (std::size_t c = 0; c < ncols; ++c) row[c] = std::stod(cells[c + 1]);
        if (modal)
            values.emplace_back(std::move(row));
        else
            values.push_back(to_modal(op, row));
    }
    return from_samples(std::move(thetas), std::move(values));
}

HistorySegment extend(const InitialFunction& phi, double eta_ign) {
    if (!(eta_ign > 0.0)) throw std::invalid_argument("extend: eta_ign must be positive");
    std::vector<HistorySegment::Sample> samples;
    samples.reserve(phi.n_samples() + 1);
    for (std::size_t j = 0; j < phi.n_samples(); ++j)
        samples.push_back({phi.thetas()[j], phi.values()[j]});
    // One extra node is enough: linear interpolation between equal values is
    // exact, so the segment is constant at phi(0) on (0, eta_ign).
    samples.push_back({eta_ign, phi.at_zero()});
    return HistorySegment::from_samples(phi.r() + eta_ign, 0.0, std::move(samples));
}

}  // namespace sdd
