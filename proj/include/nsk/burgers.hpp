#pragma once

// Smooth Burgers solution w_t + w w_x = 0 with tanh initial data, the seed of
// the approximate rarefaction waves.

#include <cmath>

#include "nsk/error.hpp"

namespace nsk {

struct BurgersPoint {
    double w;
    double w_x;
    double w_xx;
    double w_t;
};

/// Burgers solution from w(0,x) = (w+ + w-)/2 + (w+ - w-)/2 tanh x.
class BurgersWave {
public:
    BurgersWave(double w_minus, double w_plus) : wm_(w_minus), wp_(w_plus) {
        if (!(w_plus >= w_minus)) throw DomainError("burgers: requires w_minus <= w_plus");
    }

    double w_minus() const noexcept { return wm_; }
    double w_plus() const noexcept { return wp_; }
    double strength() const noexcept { return wp_ - wm_; }

    double initial(double y) const noexcept { return mid() + half() * std::tanh(y); }

    /// w - w0(x - w t): the implicit relation along characteristics.
    double residual(double w, double x, double t) const noexcept { return w - initial(x - w * t); }

    /// Unique root of the implicit relation: bisection on [w-, w+], Newton polish.
    double solve(double x, double t) const {
        if (t < 0.0) throw DomainError("burgers: t must be nonnegative");
        if (wp_ == wm_) return wm_;
        if (t == 0.0) return initial(x);
        double lo = wm_, hi = wp_;
        // residual is strictly increasing in w
        double w = 0.5 * (lo + hi);
        for (int it = 0; it < 200 && hi - lo > 1e-6 * (wp_ - wm_); ++it) {
            w = 0.5 * (lo + hi);
            if (residual(w, x, t) > 0.0) hi = w;
            else lo = w;
        }
        w = 0.5 * (lo + hi);
        for (int it = 0; it < 100; ++it) {
            const double y = x - w * t;
            const double r = w - initial(y);
            if (r == 0.0) return w;
            if (r > 0.0) hi = std::min(hi, w);
            else lo = std::max(lo, w);
            double next = w - r / (1.0 + t * slope(y));
            if (!(next >= lo && next <= hi) || next == w) next = 0.5 * (lo + hi);
            if (next == w) break;
            w = next;
        }
        // the last iterate or a bracket end, whichever fits best
        double best = w, rb = std::abs(residual(w, x, t));
        for (double c : {lo, hi})
            if (const double rc = std::abs(residual(c, x, t)); rc < rb) best = c, rb = rc;
        return best;
    }

    BurgersPoint eval(double x, double t) const {
        BurgersPoint p{};
        if (wp_ == wm_) {
            p.w = wm_;
            return p;
        }
        p.w = solve(x, t);
        const double y = x - p.w * t;
        const double s1 = slope(y);
        const double s2 = curvature(y);
        const double den = 1.0 + t * s1;
        p.w_x = s1 / den;
        p.w_xx = s2 / (den * den * den);
        p.w_t = -p.w * p.w_x;
        return p;
    }

private:
    double mid() const noexcept { return 0.5 * (wp_ + wm_); }
    double half() const noexcept { return 0.5 * (wp_ - wm_); }
    double slope(double y) const noexcept {
        const double c = std::cosh(y);
        return std::isfinite(c) ? half() / (c * c) : 0.0;
    }
    double curvature(double y) const noexcept {
        const double c = std::cosh(y);
        return std::isfinite(c) ? -2.0 * half() * std::tanh(y) / (c * c) : 0.0;
    }

    double wm_;
    double wp_;
};

/// Entropy solution of the Riemann problem (w-, w+) with w- < w+: the fan x/t.
inline double burgers_fan(double w_minus, double w_plus, double x, double t) {
    if (t <= 0.0) return x < 0 ? w_minus : w_plus;
    const double z = x / t;
    return z <= w_minus ? w_minus : (z >= w_plus ? w_plus : z);
}

} // namespace nsk
