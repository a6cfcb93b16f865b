#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace sdd {

/// An element of L2(0,L) represented by its first N coefficients in the
/// eigenbasis of the operator. Plain value type; Parseval holds by
/// construction: ||v||^2 = sum v_k^2.
class ModalVector {
public:
    ModalVector() = default;
    explicit ModalVector(std::size_t n) : c_(n, 0.0) {}
    explicit ModalVector(std::vector<double> coeffs) : c_(std::move(coeffs)) {}

    std::size_t size() const { return c_.size(); }
    double operator[](std::size_t k) const { return c_[k]; }
    double& operator[](std::size_t k) { return c_[k]; }
    const std::vector<double>& coeffs() const { return c_; }
    std::vector<double>& coeffs() { return c_; }

    double norm() const {
        double s = 0.0;
        for (double x : c_) s += x * x;
        return std::sqrt(s);
    }

    bool all_finite() const {
        for (double x : c_)
            if (!std::isfinite(x)) return false;
        return true;
    }

    ModalVector& operator+=(const ModalVector& o) {
        check_size(o);
        for (std::size_t k = 0; k < c_.size(); ++k) c_[k] += o.c_[k];
        return *this;
    }
    ModalVector& operator-=(const ModalVector& o) {
        check_size(o);
        for (std::size_t k = 0; k < c_.size(); ++k) c_[k] -= o.c_[k];
        return *this;
    }
    ModalVector& operator*=(double s) {
        for (double& x : c_) x *= s;
        return *this;
    }

    friend ModalVector operator+(ModalVector a, const ModalVector& b) { return a += b; }
    friend ModalVector operator-(ModalVector a, const ModalVector& b) { return a -= b; }
    friend ModalVector operator*(double s, ModalVector a) { return a *= s; }
    friend ModalVector operator*(ModalVector a, double s) { return a *= s; }

private:
    void check_size(const ModalVector& o) const {
        if (o.c_.size() != c_.size())
            throw std::invalid_argument("ModalVector: size mismatch");
    }

    std::vector<double> c_;
};

inline double dot(const ModalVector& a, const ModalVector& b) {
    if (a.size() != b.size()) throw std::invalid_argument("dot: size mismatch");
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
    return s;
}

/// Linear interpolation a + w*(b - a). Returns a bitwise when a == b samplewise
/// (the increment is exactly zero), which the history store relies on.
inline ModalVector lerp(const ModalVector& a, const ModalVector& b, double w) {
    if (a.size() != b.size()) throw std::invalid_argument("lerp: size mismatch");
    ModalVector r(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) r[k] = a[k] + w * (b[k] - a[k]);
    return r;
}

}  // namespace sdd
