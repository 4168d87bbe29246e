#pragma once

// Smooth approximate rarefaction waves: lambda(V, s) = w(t,x) along the
// isentrope through the anchor state, with w the tanh-Burgers solution.

#include <cmath>

#include "nsk/burgers.hpp"
#include "nsk/error.hpp"
#include "nsk/states.hpp"
#include "nsk/thermo.hpp"

namespace nsk {

struct StatePoint {
    double v;
    double u;
    double theta;
};

class RarefactionWave {
public:
    /// anchor is the far-field state of the family ((v-,u-,theta-) for the
    /// 1-wave, (v+,u+,theta+) for the 3-wave); v_middle is the specific volume
    /// of the middle state on the same isentrope.
    RarefactionWave(const ThermoParams& tp, Family family, StatePoint anchor, double v_middle)
        : tp_(tp), family_(family), anchor_(anchor),
          s_(entropy(tp, anchor.v, anchor.theta)),
          c_(std::sqrt(tp.A * tp.gamma * std::exp(tp.delta() * s_ / tp.R))),
          burgers_(make_burgers(tp, family, anchor, v_middle)) {}

    Family family() const noexcept { return family_; }
    const StatePoint& anchor() const noexcept { return anchor_; }
    double entropy_value() const noexcept { return s_; }
    const BurgersWave& burgers() const noexcept { return burgers_; }

    /// V with lambda(V, s) = w, in closed form.
    double volume_from_speed(double w) const {
        if (w * sign_of(family_) <= 0.0) throw DomainError("rarefaction: speed has the wrong sign for the family");
        return std::pow(c_ * c_ / (w * w), 1.0 / (tp_.gamma + 1.0));
    }

    /// u_a - integral from v_a to V of lambda(eta, s) d eta.
    double velocity_from_volume(double V) const {
        const double h = 0.5 * tp_.delta();
        return anchor_.u - sign_of(family_) * c_ * (2.0 / tp_.delta()) * (std::pow(anchor_.v, -h) - std::pow(V, -h));
    }

    double temperature_from_volume(double V) const {
        return anchor_.theta * std::pow(anchor_.v / V, tp_.delta());
    }

    WavePoint eval(double x, double t) const {
        if (burgers_.strength() == 0.0) return constant_point();
        return from_burgers(burgers_.eval(x, t));
    }

    /// The exact centred rarefaction fan at x/t (Burgers Riemann solution mapped
    /// through the same closed forms).
    StatePoint eval_fan(double x, double t) const {
        if (burgers_.strength() == 0.0) return anchor_;
        const double w = burgers_fan(burgers_.w_minus(), burgers_.w_plus(), x, t);
        const double V = volume_from_speed(w);
        return {V, velocity_from_volume(V), temperature_from_volume(V)};
    }

private:
    static BurgersWave make_burgers(const ThermoParams& tp, Family f, StatePoint a, double v_mid) {
        const double s = entropy(tp, a.v, a.theta);
        const double l_anchor = lambda_pm(tp, a.v, s, f);
        const double l_mid = lambda_pm(tp, v_mid, s, f);
        if (v_mid == a.v) return BurgersWave(l_anchor, l_anchor);
        if (f == Family::minus) {
            if (!(l_anchor < l_mid)) throw DomainError("1-rarefaction requires v_mid > v_minus");
            return BurgersWave(l_anchor, l_mid);
        }
        if (!(l_mid < l_anchor)) throw DomainError("3-rarefaction requires v_mid > v_plus");
        return BurgersWave(l_mid, l_anchor);
    }

    WavePoint constant_point() const {
        WavePoint p;
        p.V = anchor_.v;
        p.U = anchor_.u;
        p.Theta = anchor_.theta;
        return p;
    }

    WavePoint from_burgers(const BurgersPoint& b) const {
        const double m = -2.0 / (tp_.gamma + 1.0);
        const double d = tp_.delta();
        WavePoint p;
        p.V = volume_from_speed(b.w);
        p.U = velocity_from_volume(p.V);
        p.Theta = temperature_from_volume(p.V);
        const double rx = b.w_x / b.w;
        p.V_x = m * p.V * rx;
        p.V_xx = m * p.V * ((m - 1.0) * rx * rx + b.w_xx / b.w);
        p.U_x = -b.w * p.V_x;
        p.U_xx = -b.w_x * p.V_x - b.w * p.V_xx;
        const double gx = p.V_x / p.V;
        p.Theta_x = -d * p.Theta * gx;
        p.Theta_xx = p.Theta * (d * (d + 1.0) * gx * gx - d * p.V_xx / p.V);
        p.V_t = -b.w * p.V_x;
        p.U_t = -b.w * p.U_x;
        p.Theta_t = -b.w * p.Theta_x;
        return p;
    }

    ThermoParams tp_;
    Family family_;
    StatePoint anchor_;
    double s_;
    double c_;
    BurgersWave burgers_;
};

} // namespace nsk
