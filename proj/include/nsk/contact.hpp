#pragma once

// Viscous contact wave built from the self-similar temperature profile:
//     V = R Theta / p,   U = u_anchor + (gamma-1)/(gamma R) alpha_hat(Theta) Theta_x / Theta.

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "nsk/coefficients.hpp"
#include "nsk/selfsimilar.hpp"
#include "nsk/states.hpp"
#include "nsk/thermo.hpp"

namespace nsk {

/// Contact wave value with spatial derivatives up to order 3 of V and Theta.
struct ContactPoint : WavePoint {
    double V_xxx = 0;
    double Theta_xxx = 0;
};

template <CoefficientModel M>
class ContactWave {
public:
    ContactWave(const ThermoParams& tp, const M& model, SelfSimilarProfile profile, double u_anchor)
        : tp_(tp), model_(model), prof_(std::move(profile)), u_anchor_(u_anchor),
          cd_{&model_, tp.R, prof_.p_plus} {}

    ContactWave(const ContactWave& o)
        : tp_(o.tp_), model_(o.model_), prof_(o.prof_), u_anchor_(o.u_anchor_), cd_{&model_, tp_.R, prof_.p_plus} {}
    ContactWave& operator=(const ContactWave&) = delete;

    const SelfSimilarProfile& profile() const noexcept { return prof_; }
    double u_anchor() const noexcept { return u_anchor_; }
    double p() const noexcept { return prof_.p_plus; }
    const M& model() const noexcept { return model_; }
    const ThermoParams& thermo() const noexcept { return tp_; }
    bool degenerate() const noexcept { return prof_.theta_minus == prof_.theta_plus; }

    struct ProfileValue {
        double th, d1, d2, d3;
    };

    /// Theta and its xi-derivatives at an arbitrary xi. Outside [-Xi, Xi] the
    /// profile is clamped to theta_+- with vanishing derivatives.
    ProfileValue profile_at(double xi) const {
        const double Xi = prof_.half_width;
        if (degenerate() || xi <= -Xi) return {prof_.theta_minus, 0, 0, 0};
        if (xi >= Xi) return {prof_.theta_plus, 0, 0, 0};
        auto [th, d1] = hermite(xi);
        const double d2 = profile_second_derivative(cd_, prof_.a_coef, xi, th, d1);
        // one difference of Theta'' across the grid spacing
        const double hh = 0.5 * prof_.spacing();
        const double xl = std::max(-Xi, xi - hh), xr = std::min(Xi, xi + hh);
        auto [tl, dl] = hermite(xl);
        auto [tr, dr] = hermite(xr);
        const double d3 = (profile_second_derivative(cd_, prof_.a_coef, xr, tr, dr) -
                           profile_second_derivative(cd_, prof_.a_coef, xl, tl, dl)) /
                          (xr - xl);
        return {th, d1, d2, d3};
    }

    ContactPoint eval(double x, double t) const {
        ContactPoint c;
        const double s = 1.0 / std::sqrt(1.0 + t);
        const double xi = x * s;
        const ProfileValue pv = profile_at(xi);
        const double a = prof_.a_coef;
        const double Rp = tp_.R / prof_.p_plus;
        const double k = tp_.delta() / (tp_.gamma * tp_.R);

        c.Theta = pv.th;
        c.Theta_x = s * pv.d1;
        c.Theta_xx = s * s * pv.d2;
        c.Theta_xxx = s * s * s * pv.d3;
        c.Theta_t = -0.5 * xi * pv.d1 * s * s;
        c.V = Rp * c.Theta;
        c.V_x = Rp * c.Theta_x;
        c.V_xx = Rp * c.Theta_xx;
        c.V_xxx = Rp * c.Theta_xxx;
        c.V_t = Rp * c.Theta_t;

        // q = beta(Theta) Theta', and the ODE gives q' = -xi Theta' / (2a).
        const double q = pv.d1 == 0.0 ? 0.0 : cd_.beta(pv.th) * pv.d1;
        const double q1 = -xi * pv.d1 / (2.0 * a);
        const double q2 = -(pv.d1 + xi * pv.d2) / (2.0 * a);
        c.U = u_anchor_ + k * q * s;
        c.U_x = k * q1 * s * s;
        c.U_xx = k * q2 * s * s * s;
        c.U_t = -0.5 * k * s * s * s * (q + xi * q1);
        return c;
    }

private:
    std::pair<double, double> hermite(double xi) const {
        const auto& X = prof_.xi;
        const double h = prof_.spacing();
        const std::size_t n = X.size();
        auto i = static_cast<std::size_t>(std::clamp((xi - X.front()) / h, 0.0, static_cast<double>(n - 2)));
        if (i > n - 2) i = n - 2;
        const double t = (xi - X[i]) / h;
        const double y0 = prof_.Theta[i], y1 = prof_.Theta[i + 1];
        const double m0 = prof_.dTheta[i] * h, m1 = prof_.dTheta[i + 1] * h;
        const double t2 = t * t, t3 = t2 * t;
        const double val = (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + t) * m0 + (-2 * t3 + 3 * t2) * y1 + (t3 - t2) * m1;
        const double der = ((6 * t2 - 6 * t) * y0 + (3 * t2 - 4 * t + 1) * m0 + (-6 * t2 + 6 * t) * y1 + (3 * t2 - 2 * t) * m1) / h;
        return {val, der};
    }

    ThermoParams tp_;
    M model_;
    SelfSimilarProfile prof_;
    double u_anchor_;
    ContactDiffusivity<M> cd_;
};

} // namespace nsk
