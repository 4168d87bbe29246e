#pragma once

// Uniform grid on [-L, L], central difference stencils, trapezoid quadrature.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "nsk/error.hpp"

namespace nsk {

using Field = std::vector<double>;

class Grid {
public:
    Grid(double half_width, std::size_t n_points) : L_(half_width), n_(n_points) {
        if (!(half_width > 0.0)) throw DomainError("grid: half width must be positive");
        if (n_points < 8) throw DomainError("grid: need at least 8 points");
        dx_ = 2.0 * L_ / static_cast<double>(n_ - 1);
    }

    double half_width() const noexcept { return L_; }
    std::size_t size() const noexcept { return n_; }
    double dx() const noexcept { return dx_; }

    double x(std::size_t i) const noexcept {
        return i + 1 == n_ ? L_ : -L_ + static_cast<double>(i) * dx_;
    }

    Field nodes() const {
        Field out(n_);
        for (std::size_t i = 0; i < n_; ++i) out[i] = x(i);
        return out;
    }

    template <class F>
    Field sample(F&& fn) const {
        Field out(n_);
        for (std::size_t i = 0; i < n_; ++i) out[i] = fn(x(i));
        return out;
    }

private:
    double L_;
    std::size_t n_;
    double dx_;
};

namespace detail {

inline void check_length(const Grid& g, std::span<const double> f) {
    if (f.size() != g.size()) throw LengthError("field length does not match grid size");
}

/// Constant extrapolation beyond either end (the far-field clamp ghosts).
inline double at(std::span<const double> f, std::ptrdiff_t i) noexcept {
    const auto n = static_cast<std::ptrdiff_t>(f.size());
    return f[static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(i, 0, n - 1))];
}

} // namespace detail

inline Field d1(const Grid& g, std::span<const double> f) {
    detail::check_length(g, f);
    const auto n = static_cast<std::ptrdiff_t>(f.size());
    const double s = 0.5 / g.dx();
    Field out(f.size());
    for (std::ptrdiff_t i = 0; i < n; ++i) out[i] = (detail::at(f, i + 1) - detail::at(f, i - 1)) * s;
    return out;
}

inline Field d2(const Grid& g, std::span<const double> f) {
    detail::check_length(g, f);
    const auto n = static_cast<std::ptrdiff_t>(f.size());
    const double s = 1.0 / (g.dx() * g.dx());
    Field out(f.size());
    for (std::ptrdiff_t i = 0; i < n; ++i)
        out[i] = (detail::at(f, i + 1) - 2.0 * f[i] + detail::at(f, i - 1)) * s;
    return out;
}

inline Field d3(const Grid& g, std::span<const double> f) {
    detail::check_length(g, f);
    const auto n = static_cast<std::ptrdiff_t>(f.size());
    const double h = g.dx();
    const double s = 0.5 / (h * h * h);
    Field out(f.size());
    for (std::ptrdiff_t i = 0; i < n; ++i)
        out[i] = (detail::at(f, i + 2) - 2.0 * detail::at(f, i + 1) + 2.0 * detail::at(f, i - 1) -
                  detail::at(f, i - 2)) *
                 s;
    return out;
}

/// Trapezoid rule over the whole grid.
inline double integrate(const Grid& g, std::span<const double> f) {
    detail::check_length(g, f);
    double s = 0.5 * (f.front() + f.back());
    for (std::size_t i = 1; i + 1 < f.size(); ++i) s += f[i];
    return s * g.dx();
}

inline double sup_norm(const Grid& g, std::span<const double> f) {
    detail::check_length(g, f);
    double m = 0.0;
    for (double x : f) m = std::max(m, std::abs(x));
    return m;
}

inline double l1_norm(const Grid& g, std::span<const double> f) {
    detail::check_length(g, f);
    double s = 0.5 * (std::abs(f.front()) + std::abs(f.back()));
    for (std::size_t i = 1; i + 1 < f.size(); ++i) s += std::abs(f[i]);
    return s * g.dx();
}

inline double l2_norm(const Grid& g, std::span<const double> f) {
    detail::check_length(g, f);
    double s = 0.5 * (f.front() * f.front() + f.back() * f.back());
    for (std::size_t i = 1; i + 1 < f.size(); ++i) s += f[i] * f[i];
    return std::sqrt(s * g.dx());
}

/// Cubic Lagrange interpolation of a grid field at an arbitrary point inside the grid.
inline double interpolate(const Grid& g, std::span<const double> f, double x) {
    detail::check_length(g, f);
    const double s = (x + g.half_width()) / g.dx();
    const auto n = static_cast<std::ptrdiff_t>(f.size());
    auto i = static_cast<std::ptrdiff_t>(std::floor(s));
    i = std::clamp<std::ptrdiff_t>(i, 1, n - 3);
    const double t = s - static_cast<double>(i);
    const double fm = f[i - 1], f0 = f[i], f1 = f[i + 1], f2 = f[i + 2];
    return fm * (-t * (t - 1.0) * (t - 2.0) / 6.0) + f0 * ((t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0) +
           f1 * (-(t + 1.0) * t * (t - 2.0) / 2.0) + f2 * ((t + 1.0) * t * (t - 1.0) / 6.0);
}

} // namespace nsk
