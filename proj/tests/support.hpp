#pragma once

// Oracles shared by the unit tests and the acceptance driver. Nothing in here
// calls into the library's closed forms; quadrature and bisection are done
// from scratch.

#include <cmath>
#include <functional>

#include "nsk/states.hpp"
#include "nsk/thermo.hpp"

namespace oracle {

/// Composite Simpson with n (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n = 4000) {
    if (n % 2) ++n;
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

/// Plain bisection for an increasing function on [lo, hi].
inline double bisect(const std::function<double(double)>& f, double lo, double hi, int iters = 200) {
    for (int i = 0; i < iters; ++i) {
        const double m = 0.5 * (lo + hi);
        if (m <= lo || m >= hi) break;
        (f(m) > 0.0 ? hi : lo) = m;
    }
    return 0.5 * (lo + hi);
}

/// Characteristic speed from the pressure law p = A v^-gamma exp(delta s / R),
/// lambda^2 = -dp/dv.
inline double speed(const nsk::ThermoParams& tp, double v, double s, int sign) {
    const double p = tp.A * std::pow(v, -tp.gamma) * std::exp(tp.delta() * s / tp.R);
    return sign * std::sqrt(tp.gamma * p / v);
}

/// u reached from (v_a, u_a) along the isentrope s to volume v, by quadrature.
inline double wave_curve_u(const nsk::ThermoParams& tp, double v_a, double u_a, double s, int sign, double v) {
    return u_a - simpson([&](double eta) { return speed(tp, eta, s, sign); }, v_a, v);
}

inline double entropy_of(const nsk::ThermoParams& tp, double v, double theta) {
    return tp.R / tp.delta() * std::log(tp.R * theta / tp.A) + tp.R * std::log(v);
}

/// End states joined by 1-rarefaction / contact / 3-rarefaction, built
/// backwards from a middle state (p_mid, u_mid, theta_m_minus, theta_m_plus).
/// Each rarefaction raises the outer temperature by dtheta over the middle one.
inline nsk::EndStates composite_ends(const nsk::ThermoParams& tp, double p_mid, double u_mid, double th_m_minus,
                                     double th_m_plus, double dtheta) {
    const double d = tp.delta();
    const double vm_minus = tp.R * th_m_minus / p_mid, vm_plus = tp.R * th_m_plus / p_mid;
    nsk::EndStates e;
    e.theta_minus = th_m_minus + dtheta;
    e.theta_plus = th_m_plus + dtheta;
    // theta v^delta is constant along an isentrope
    e.v_minus = vm_minus * std::pow(th_m_minus / e.theta_minus, 1.0 / d);
    e.v_plus = vm_plus * std::pow(th_m_plus / e.theta_plus, 1.0 / d);
    const double s_minus = entropy_of(tp, e.v_minus, e.theta_minus);
    const double s_plus = entropy_of(tp, e.v_plus, e.theta_plus);
    e.u_minus = u_mid + simpson([&](double eta) { return speed(tp, eta, s_minus, -1); }, e.v_minus, vm_minus);
    e.u_plus = u_mid + simpson([&](double eta) { return speed(tp, eta, s_plus, +1); }, e.v_plus, vm_plus);
    return e;
}

/// Middle pressure by dense sampling of the velocity mismatch followed by
/// bisection on the bracketing cell. Wave curves are integrated numerically.
inline double middle_pressure(const nsk::ThermoParams& tp, const nsk::EndStates& e, double p_lo, double p_hi,
                              int samples = 2000) {
    const double sm = entropy_of(tp, e.v_minus, e.theta_minus), sp = entropy_of(tp, e.v_plus, e.theta_plus);
    auto v_at = [&](double v_a, double th_a, double p) { return v_a * std::pow(tp.R * th_a / v_a / p, 1.0 / tp.gamma); };
    auto mismatch = [&](double p) {
        const double uL = wave_curve_u(tp, e.v_minus, e.u_minus, sm, -1, v_at(e.v_minus, e.theta_minus, p));
        const double uR = wave_curve_u(tp, e.v_plus, e.u_plus, sp, +1, v_at(e.v_plus, e.theta_plus, p));
        return uL - uR;
    };
    double a = p_lo, fa = mismatch(a);
    for (int k = 1; k <= samples; ++k) {
        const double b = p_lo + (p_hi - p_lo) * k / samples;
        const double fb = mismatch(b);
        if ((fa > 0) != (fb > 0) || fb == 0.0) return bisect([&](double p) { return -mismatch(p); }, a, b, 100);
        a = b;
        fa = fb;
    }
    return std::nan("");
}

} // namespace oracle
