#pragma once

// Composite wave: 1-rarefaction + viscous contact + 3-rarefaction minus the
// shared middle states.

#include <cmath>
#include <optional>
#include <string>

#include "nsk/coefficients.hpp"
#include "nsk/contact.hpp"
#include "nsk/middle_states.hpp"
#include "nsk/rarefaction.hpp"
#include "nsk/selfsimilar.hpp"
#include "nsk/states.hpp"

namespace nsk {

enum class WaveMode { contact_only, rarefaction_minus, rarefaction_plus, full_composite };

inline std::string to_string(WaveMode m) {
    switch (m) {
    case WaveMode::contact_only: return "contact-only";
    case WaveMode::rarefaction_minus: return "rarefaction-only-minus";
    case WaveMode::rarefaction_plus: return "rarefaction-only-plus";
    case WaveMode::full_composite: return "full-composite";
    }
    return "?";
}

struct ProfileOptions {
    double half_width = 0.0; ///< 0 selects the default Xi
    std::size_t n_points = 2001;
};

template <CoefficientModel M>
class CompositeWave {
public:
    /// contact_only requires u- == u+ and p- == p+ and anchors U at u-.
    /// The rarefaction-only modes require the end states to lie on one
    /// rarefaction curve. full_composite solves the middle states and anchors
    /// the contact velocity at u_mid.
    CompositeWave(const ThermoParams& tp, const M& model, const EndStates& ends, WaveMode mode,
                  ProfileOptions popt = {})
        : tp_(tp), model_(model), ends_(ends), mode_(mode), middle_(build_middle(tp, ends, mode)),
          contact_(build_contact(tp, model, ends, mode, middle_, popt)) {
        if (mode == WaveMode::full_composite || mode == WaveMode::rarefaction_minus)
            minus_.emplace(tp, Family::minus, StatePoint{ends.v_minus, ends.u_minus, ends.theta_minus},
                           middle_.v_m_minus);
        if (mode == WaveMode::full_composite || mode == WaveMode::rarefaction_plus)
            plus_.emplace(tp, Family::plus, StatePoint{ends.v_plus, ends.u_plus, ends.theta_plus}, middle_.v_m_plus);
    }

    WaveMode mode() const noexcept { return mode_; }
    const MiddleStates& middle() const noexcept { return middle_; }
    const EndStates& ends() const noexcept { return ends_; }
    const ThermoParams& thermo() const noexcept { return tp_; }
    const M& model() const noexcept { return model_; }
    const ContactWave<M>& contact() const noexcept { return contact_; }
    const std::optional<RarefactionWave>& rarefaction_minus() const noexcept { return minus_; }
    const std::optional<RarefactionWave>& rarefaction_plus() const noexcept { return plus_; }

    WavePoint eval(double x, double t) const {
        switch (mode_) {
        case WaveMode::contact_only: return static_cast<WavePoint>(contact_.eval(x, t));
        case WaveMode::rarefaction_minus: return minus_->eval(x, t);
        case WaveMode::rarefaction_plus: return plus_->eval(x, t);
        case WaveMode::full_composite: break;
        }
        WavePoint p = minus_->eval(x, t);
        p += static_cast<WavePoint>(contact_.eval(x, t));
        p += plus_->eval(x, t);
        p.V -= middle_.v_m_minus + middle_.v_m_plus;
        p.U -= 2.0 * middle_.u_mid;
        p.Theta -= middle_.theta_m_minus + middle_.theta_m_plus;
        return p;
    }

    /// Inviscid Riemann solution with the rarefaction fans exact and the
    /// contact kept as the viscous profile.
    StatePoint eval_fan(double x, double t) const {
        const ContactPoint c = contact_.eval(x, t);
        StatePoint out{c.V, c.U, c.Theta};
        if (mode_ == WaveMode::contact_only) return out;
        if (mode_ == WaveMode::rarefaction_minus) return minus_->eval_fan(x, t);
        if (mode_ == WaveMode::rarefaction_plus) return plus_->eval_fan(x, t);
        const StatePoint a = minus_->eval_fan(x, t), b = plus_->eval_fan(x, t);
        return {a.v + c.V + b.v - middle_.v_m_minus - middle_.v_m_plus, a.u + c.U + b.u - 2.0 * middle_.u_mid,
                a.theta + c.Theta + b.theta - middle_.theta_m_minus - middle_.theta_m_plus};
    }

private:
    static MiddleStates build_middle(const ThermoParams& tp, const EndStates& e, WaveMode mode) {
        e.validate();
        MiddleStates m;
        m.s_minus = entropy(tp, e.v_minus, e.theta_minus);
        m.s_plus = entropy(tp, e.v_plus, e.theta_plus);
        switch (mode) {
        case WaveMode::contact_only: {
            const double pm = e.p_minus(tp), pp = e.p_plus(tp);
            if (e.u_minus != e.u_plus) throw ValidationError("contact wave requires u_minus == u_plus");
            if (std::abs(pm - pp) > 1e-12 * pp) throw ValidationError("contact wave requires p_minus == p_plus");
            m.v_m_minus = e.v_minus;
            m.theta_m_minus = e.theta_minus;
            m.v_m_plus = e.v_plus;
            m.theta_m_plus = e.theta_plus;
            m.u_mid = e.u_minus;
            m.p_mid = pp;
            return m;
        }
        case WaveMode::rarefaction_minus:
        case WaveMode::rarefaction_plus: {
            const bool minus = mode == WaveMode::rarefaction_minus;
            if (std::abs(m.s_minus - m.s_plus) > 1e-10 * std::max(1.0, std::abs(m.s_minus)))
                throw ValidationError("single rarefaction requires equal entropies");
            const StatePoint anchor = minus ? StatePoint{e.v_minus, e.u_minus, e.theta_minus}
                                            : StatePoint{e.v_plus, e.u_plus, e.theta_plus};
            const StatePoint other = minus ? StatePoint{e.v_plus, e.u_plus, e.theta_plus}
                                           : StatePoint{e.v_minus, e.u_minus, e.theta_minus};
            const double u_on_curve =
                detail::curve_velocity(tp, anchor.v, anchor.u, anchor.theta, minus ? Family::minus : Family::plus,
                                       pressure(tp, other.v, other.theta));
            if (std::abs(u_on_curve - other.u) > 1e-10 * std::max(1.0, std::abs(other.u)))
                throw ValidationError("end states do not lie on one rarefaction curve");
            if (!(other.v >= anchor.v)) throw ValidationError("end states are joined by a shock, not a rarefaction");
            m.v_m_minus = m.v_m_plus = other.v;
            m.theta_m_minus = m.theta_m_plus = other.theta;
            m.u_mid = other.u;
            m.p_mid = pressure(tp, other.v, other.theta);
            return m;
        }
        case WaveMode::full_composite: {
            MiddleStates s = solve_middle_states(e, tp);
            if (!s.in_rarefaction_region(tp, e))
                throw BracketError("end states lie outside the rarefaction/contact/rarefaction region");
            return s;
        }
        }
        return m;
    }

    static ContactWave<M> build_contact(const ThermoParams& tp, const M& model, const EndStates&, WaveMode mode,
                                        const MiddleStates& m, ProfileOptions popt) {
        double tl = m.theta_m_minus, tr = m.theta_m_plus;
        if (mode == WaveMode::rarefaction_minus || mode == WaveMode::rarefaction_plus) tl = tr;
        auto prof = solve_selfsimilar(tp, model, tl, tr, m.p_mid, popt.half_width, popt.n_points);
        return ContactWave<M>(tp, model, std::move(prof), m.u_mid);
    }

    ThermoParams tp_;
    M model_;
    EndStates ends_;
    WaveMode mode_;
    MiddleStates middle_;
    ContactWave<M> contact_;
    std::optional<RarefactionWave> minus_;
    std::optional<RarefactionWave> plus_;
};

} // namespace nsk
