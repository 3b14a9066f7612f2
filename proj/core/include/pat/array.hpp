#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace pat {

/// Dense row-major 2D array of doubles. The one container shared by images,
/// data volumes and coefficient blocks.
struct Array2d {
    int rows = 0;
    int cols = 0;
    std::vector<double> v;

    Array2d() = default;
    Array2d(int r, int c, double fill = 0.0)
        : rows(r), cols(c), v(static_cast<size_t>(r) * static_cast<size_t>(c), fill) {
        if (r < 0 || c < 0) throw std::invalid_argument("Array2d: negative dims");
    }

    double& at(int r, int c) { return v[static_cast<size_t>(r) * cols + c]; }
    double at(int r, int c) const { return v[static_cast<size_t>(r) * cols + c]; }

    size_t size() const { return v.size(); }
    double* data() { return v.data(); }
    const double* data() const { return v.data(); }

    bool same_shape(const Array2d& o) const { return rows == o.rows && cols == o.cols; }
};

inline double norm2(const Array2d& a) {
    double s = 0.0;
    for (double x : a.v) s += x * x;
    return std::sqrt(s);
}

inline double norm2(const std::vector<double>& a) {
    double s = 0.0;
    for (double x : a) s += x * x;
    return std::sqrt(s);
}

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) throw std::invalid_argument("dot: size mismatch");
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double dot(const Array2d& a, const Array2d& b) { return dot(a.v, b.v); }

inline bool all_finite(const Array2d& a) {
    for (double x : a.v)
        if (!std::isfinite(x)) return false;
    return true;
}

}  // namespace pat
