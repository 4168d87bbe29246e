#pragma once

#include "nsk/error.hpp"
#include "nsk/thermo.hpp"

namespace nsk {

/// Far-field states (v, u, theta) at x -> -inf and x -> +inf.
struct EndStates {
    double v_minus = 1.0, u_minus = 0.0, theta_minus = 1.0;
    double v_plus = 1.0, u_plus = 0.0, theta_plus = 1.0;

    void validate() const {
        if (!(v_minus > 0 && v_plus > 0)) throw DomainError("end states: specific volumes must be positive");
        if (!(theta_minus > 0 && theta_plus > 0)) throw DomainError("end states: temperatures must be positive");
    }

    double p_minus(const ThermoParams& tp) const { return pressure(tp, v_minus, theta_minus); }
    double p_plus(const ThermoParams& tp) const { return pressure(tp, v_plus, theta_plus); }
};

/// One value of (v, u, theta) with first and second x-derivatives and t-derivatives.
struct WavePoint {
    double V = 0, U = 0, Theta = 0;
    double V_x = 0, U_x = 0, Theta_x = 0;
    double V_xx = 0, U_xx = 0, Theta_xx = 0;
    double V_t = 0, U_t = 0, Theta_t = 0;

    WavePoint& operator+=(const WavePoint& o) noexcept {
        V += o.V;
        U += o.U;
        Theta += o.Theta;
        V_x += o.V_x;
        U_x += o.U_x;
        Theta_x += o.Theta_x;
        V_xx += o.V_xx;
        U_xx += o.U_xx;
        Theta_xx += o.Theta_xx;
        V_t += o.V_t;
        U_t += o.U_t;
        Theta_t += o.Theta_t;
        return *this;
    }
};

} // namespace nsk
