#pragma once

// Ideal-gas closure in Lagrangian variables: pressure, entropy, characteristic
// speeds and the relative-entropy weight Phi.

#include <cmath>
#include <string>

#include "nsk/error.hpp"

namespace nsk {

struct ThermoParams {
    double R = 1.0;
    double gamma = 1.4;
    double A = 1.0;

    ThermoParams() = default;
    ThermoParams(double R_, double gamma_, double A_) : R(R_), gamma(gamma_), A(A_) { validate(); }

    void validate() const {
        if (!(R > 0.0)) throw DomainError("thermo: R must be positive");
        if (!(gamma > 1.0)) throw DomainError("thermo: gamma must exceed 1");
        if (!(A > 0.0)) throw DomainError("thermo: A must be positive");
    }

    double delta() const noexcept { return gamma - 1.0; }
    double cv() const noexcept { return R / delta(); }
};

namespace detail {
inline void require_positive(double x, const char* name) {
    if (!(x > 0.0)) throw DomainError(std::string(name) + " must be positive");
}
} // namespace detail

inline double pressure(const ThermoParams& tp, double v, double theta) {
    detail::require_positive(v, "specific volume");
    detail::require_positive(theta, "temperature");
    return tp.R * theta / v;
}

/// s = R/(gamma-1) ln(R theta / A) + R ln v
inline double entropy(const ThermoParams& tp, double v, double theta) {
    detail::require_positive(v, "specific volume");
    detail::require_positive(theta, "temperature");
    return tp.R / tp.delta() * std::log(tp.R * theta / tp.A) + tp.R * std::log(v);
}

inline double temp_from_entropy(const ThermoParams& tp, double v, double s) {
    detail::require_positive(v, "specific volume");
    return tp.A / tp.R * std::pow(v, -tp.delta()) * std::exp(tp.delta() * s / tp.R);
}

/// Entropy form of the pressure law, A v^{-gamma} exp((gamma-1) s / R).
inline double pressure_from_entropy(const ThermoParams& tp, double v, double s) {
    detail::require_positive(v, "specific volume");
    return tp.A * std::pow(v, -tp.gamma) * std::exp(tp.delta() * s / tp.R);
}

enum class Family { minus = -1, plus = 1 };

inline double sign_of(Family f) noexcept { return f == Family::minus ? -1.0 : 1.0; }

/// Characteristic speed of the 1- (minus) or 3- (plus) family along the isentrope s.
inline double lambda_pm(const ThermoParams& tp, double v, double s, Family f) {
    detail::require_positive(v, "specific volume");
    const double mag = std::sqrt(tp.A * tp.gamma * std::pow(v, -tp.gamma - 1.0) * std::exp(tp.delta() * s / tp.R));
    return sign_of(f) * mag;
}

/// Phi(s) = s - 1 - ln s. Nonnegative, convex, zero only at s = 1.
inline double phi_entropy(double s) {
    detail::require_positive(s, "Phi argument");
    // log1p keeps the small-|s-1| regime accurate
    const double d = s - 1.0;
    if (std::abs(d) < 1e-3) {
        // Taylor: d^2/2 - d^3/3 + d^4/4 - d^5/5
        return d * d * (0.5 - d * (1.0 / 3.0 - d * (0.25 - d * 0.2)));
    }
    return d - std::log1p(d);
}

} // namespace nsk
