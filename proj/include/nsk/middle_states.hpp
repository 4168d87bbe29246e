#pragma once

// Middle states of the rarefaction / contact / rarefaction Riemann pattern.
// Both isentropic wave curves are parameterized by the common pressure p and
// the velocity mismatch is bisected to the root.

#include <algorithm>
#include <cmath>

#include "nsk/error.hpp"
#include "nsk/states.hpp"
#include "nsk/thermo.hpp"

namespace nsk {

struct MiddleStates {
    double v_m_minus = 0, theta_m_minus = 0;
    double v_m_plus = 0, theta_m_plus = 0;
    double u_mid = 0;
    double p_mid = 0;
    double s_minus = 0, s_plus = 0;

    /// True when both outer waves are rarefactions (p_mid below both end pressures).
    bool in_rarefaction_region(const ThermoParams& tp, const EndStates& e, double rel_tol = 1e-12) const {
        const double pmin = std::min(e.p_minus(tp), e.p_plus(tp));
        return p_mid <= pmin * (1.0 + rel_tol);
    }
};

namespace detail {

/// Velocity reached from the anchor along its isentrope at pressure p
/// (rarefaction-curve formula continued to all p > 0).
inline double curve_velocity(const ThermoParams& tp, double v_a, double u_a, double theta_a, Family f, double p) {
    const double p_a = tp.R * theta_a / v_a;
    const double v = p == p_a ? v_a : v_a * std::pow(p_a / p, 1.0 / tp.gamma);
    const double s = entropy(tp, v_a, theta_a);
    const double c = std::sqrt(tp.A * tp.gamma * std::exp(tp.delta() * s / tp.R));
    const double h = 0.5 * tp.delta();
    return u_a - sign_of(f) * c * (2.0 / tp.delta()) * (std::pow(v_a, -h) - std::pow(v, -h));
}

} // namespace detail

/// u along the 1-curve from the left state minus u along the 3-curve from the
/// right state, both at pressure p. Strictly decreasing in p.
inline double velocity_mismatch(const ThermoParams& tp, const EndStates& e, double p) {
    return detail::curve_velocity(tp, e.v_minus, e.u_minus, e.theta_minus, Family::minus, p) -
           detail::curve_velocity(tp, e.v_plus, e.u_plus, e.theta_plus, Family::plus, p);
}

/// Searches p in [1e-6 min(p-,p+), max(p-,p+)]. A root above both end
/// pressures (two compressive waves) or a vacuum-like root below the floor is
/// reported as a BracketError.
inline MiddleStates solve_middle_states(const EndStates& e, const ThermoParams& tp) {
    e.validate();
    const double pm = e.p_minus(tp), pp = e.p_plus(tp);
    double hi = std::max(pm, pp);
    double lo = 1e-6 * std::min(pm, pp);
    const double f_hi = velocity_mismatch(tp, e, hi);
    const double f_lo = velocity_mismatch(tp, e, lo);

    double p_root;
    if (f_hi == 0.0) {
        p_root = hi;
    } else {
        if (f_hi > 0.0 || f_lo < 0.0)
            throw BracketError("middle states: no sign change of the velocity mismatch on [" + std::to_string(lo) +
                               ", " + std::to_string(hi) + "]; end states lie outside the admissible wave region");
        for (int it = 0; it < 400; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi) break;
            const double fm = velocity_mismatch(tp, e, mid);
            if (fm == 0.0) {
                lo = hi = mid;
                break;
            }
            if (fm > 0.0) lo = mid;
            else hi = mid;
        }
        p_root = 0.5 * (lo + hi);
    }

    MiddleStates m;
    m.p_mid = p_root;
    m.s_minus = entropy(tp, e.v_minus, e.theta_minus);
    m.s_plus = entropy(tp, e.v_plus, e.theta_plus);
    auto side = [&](double v_a, double th_a, double p_a, double& v_out, double& th_out) {
        if (p_root == p_a) {
            v_out = v_a;
            th_out = th_a;
        } else {
            v_out = v_a * std::pow(p_a / p_root, 1.0 / tp.gamma);
            th_out = p_root * v_out / tp.R;
        }
    };
    side(e.v_minus, e.theta_minus, pm, m.v_m_minus, m.theta_m_minus);
    side(e.v_plus, e.theta_plus, pp, m.v_m_plus, m.theta_m_plus);
    const double uL = detail::curve_velocity(tp, e.v_minus, e.u_minus, e.theta_minus, Family::minus, p_root);
    const double uR = detail::curve_velocity(tp, e.v_plus, e.u_plus, e.theta_plus, Family::plus, p_root);
    m.u_mid = uL == uR ? uL : 0.5 * (uL + uR);
    return m;
}

} // namespace nsk
