#pragma once

// Method-of-lines solver for the Korteweg-type system in Lagrangian
// coordinates:
//     v_t = u_x
//     u_t + p_x = (mu u_x / v)_x + K_x
//     C_eff theta_t + p u_x = (alpha theta_x / v)_x + mu u_x^2 / v + F
// Central differences in space, classical RK4 in time.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "nsk/coefficients.hpp"
#include "nsk/error.hpp"
#include "nsk/grid.hpp"
#include "nsk/thermo.hpp"

namespace nsk {

struct State {
    double t = 0.0;
    Field v, u, theta;

    std::size_t size() const noexcept { return v.size(); }
};

inline State constant_state(const Grid& g, double v, double u, double theta, double t = 0.0) {
    return {t, Field(g.size(), v), Field(g.size(), u), Field(g.size(), theta)};
}

/// Boundary values (v, u, theta) at x = -L and x = +L.
struct BoundaryValues {
    double v_left, u_left, theta_left;
    double v_right, u_right, theta_right;
};

using BoundaryFn = std::function<BoundaryValues(double t)>;

struct Box {
    double v_min = 0.0, v_max = std::numeric_limits<double>::infinity();
    double theta_min = 0.0, theta_max = std::numeric_limits<double>::infinity();

    bool contains(double v, double th) const noexcept {
        return v >= v_min && v <= v_max && th >= theta_min && th <= theta_max;
    }
};

struct SolverSettings {
    double cfl = 0.1;
    double t_final = 1.0;
    std::size_t cadence = 10; ///< diagnostics every this many accepted steps
    int max_halvings = 10;
    Box abort_box{};

    void validate() const {
        if (!(cfl > 0.0 && cfl <= 1.0)) throw ValidationError("solver: cfl coefficient must lie in (0, 1]");
        if (!(t_final >= 0.0)) throw ValidationError("solver: t_final must be nonnegative");
        if (cadence == 0) throw ValidationError("solver: cadence must be at least 1");
        if (max_halvings < 0) throw ValidationError("solver: max_halvings must be nonnegative");
    }
};

namespace detail {

inline void check_state(const Grid& g, const State& s) {
    check_length(g, s.v);
    check_length(g, s.u);
    check_length(g, s.theta);
}

} // namespace detail

/// K = -kappa v_xx / v^5 + (5 kappa - v kappa_v) v_x^2 / (2 v^6) - kappa_theta v_x theta_x / v^5
template <CoefficientModel M>
Field korteweg_stress(const State& s, const M& m, const Grid& g) {
    detail::check_state(g, s);
    const Field vx = d1(g, s.v), vxx = d2(g, s.v), tx = d1(g, s.theta);
    Field K(s.size());
    for (std::size_t i = 0; i < K.size(); ++i) {
        const double v = s.v[i], th = s.theta[i];
        if (!(v > 0 && th > 0)) throw PositivityError("korteweg_stress: nonpositive v or theta at node " + std::to_string(i));
        const double v5 = v * v * v * v * v;
        const double k = m.kappa(v, th);
        K[i] = -k * vxx[i] / v5 + (5.0 * k - v * m.kappa_v(v, th)) * vx[i] * vx[i] / (2.0 * v5 * v) -
               m.kappa_theta(v, th) * vx[i] * tx[i] / v5;
    }
    return K;
}

/// F = theta kappa_theta v_x u_xx / v^5 + (v kappa_vtheta - kappa_theta) theta u_x v_x^2 / (2 v^6)
template <CoefficientModel M>
Field capillary_work(const State& s, const M& m, const Grid& g) {
    detail::check_state(g, s);
    const Field vx = d1(g, s.v), ux = d1(g, s.u), uxx = d2(g, s.u);
    Field F(s.size());
    for (std::size_t i = 0; i < F.size(); ++i) {
        const double v = s.v[i], th = s.theta[i];
        if (!(v > 0 && th > 0)) throw PositivityError("capillary_work: nonpositive v or theta at node " + std::to_string(i));
        const double v5 = v * v * v * v * v;
        const double kt = m.kappa_theta(v, th);
        F[i] = th * kt * vx[i] * uxx[i] / v5 + (v * m.kappa_vtheta(v, th) - kt) * th * ux[i] * vx[i] * vx[i] / (2.0 * v5 * v);
    }
    return F;
}

struct Rates {
    Field v, u, theta;
};

template <CoefficientModel M>
class Solver {
public:
    using Sink = std::function<void(const State&)>;

    Solver(const ThermoParams& tp, const M& model, const Grid& grid, SolverSettings settings, BoundaryFn bc = {})
        : tp_(tp), model_(model), grid_(grid), set_(settings), bc_(std::move(bc)) {
        tp_.validate();
        set_.validate();
        const std::size_t n = grid_.size();
        for (Field* f : {&p_, &K_, &mv_, &av_, &ux_, &vx_, &ceff_}) f->assign(n, 0.0);
    }

    const Grid& grid() const noexcept { return grid_; }
    const SolverSettings& settings() const noexcept { return set_; }
    std::size_t steps_taken() const noexcept { return steps_; }
    std::size_t halvings() const noexcept { return halvings_; }
    double last_dt() const noexcept { return last_dt_; }

    /// Semi-discrete right-hand side. The viscous and heat fluxes are
    /// differenced compactly between neighbouring half nodes; pressure and K
    /// use the central first difference. Boundary rates are zero (the nodes
    /// are clamped by the boundary function).
    void rhs(const State& s, Rates& out) {
        const std::size_t n = grid_.size();
        detail::check_state(grid_, s);
        out.v.assign(n, 0.0);
        out.u.assign(n, 0.0);
        out.theta.assign(n, 0.0);
        const double h = grid_.dx(), i2h = 0.5 / h, ih2 = 1.0 / (h * h);
        const double cv = tp_.cv();
        const auto N = static_cast<std::ptrdiff_t>(n);
        auto V = [&](std::ptrdiff_t i) { return detail::at(s.v, i); };
        auto Uf = [&](std::ptrdiff_t i) { return detail::at(s.u, i); };
        auto T = [&](std::ptrdiff_t i) { return detail::at(s.theta, i); };

        for (std::ptrdiff_t i = 0; i < N; ++i) {
            const double v = s.v[i], th = s.theta[i];
            if (!(v > 0 && th > 0) || !std::isfinite(v) || !std::isfinite(th) || !std::isfinite(s.u[i]))
                throw PositivityError("rhs: inadmissible state at node " + std::to_string(i));
            const double vx = (V(i + 1) - V(i - 1)) * i2h;
            const double vxx = (V(i + 1) - 2.0 * v + V(i - 1)) * ih2;
            const double ux = (Uf(i + 1) - Uf(i - 1)) * i2h;
            const double tx = (T(i + 1) - T(i - 1)) * i2h;
            const double v5 = v * v * v * v * v;
            const double k = model_.kappa(v, th);
            const double kt = model_.kappa_theta(v, th);
            const double mu = model_.mu(v, th);
            p_[i] = tp_.R * th / v;
            K_[i] = -k * vxx / v5 + (5.0 * k - v * model_.kappa_v(v, th)) * vx * vx / (2.0 * v5 * v) - kt * vx * tx / v5;
            mv_[i] = mu / v;
            av_[i] = model_.alpha(v, th) / v;
            ux_[i] = ux;
            vx_[i] = vx;
            const double ce = cv - 0.5 * th * model_.kappa_thetatheta(v, th) * vx * vx / v5;
            if (!(ce > 0.0)) throw ModelViolation("effective heat capacity is not positive at node " + std::to_string(i));
            ceff_[i] = ce;
        }
        for (std::ptrdiff_t i = 1; i + 1 < N; ++i) {
            const double v = s.v[i], th = s.theta[i];
            const double v5 = v * v * v * v * v;
            const double ux = ux_[i];
            const double uxx = (s.u[i + 1] - 2.0 * s.u[i] + s.u[i - 1]) * ih2;
            const double visc = (0.5 * (mv_[i] + mv_[i + 1]) * (s.u[i + 1] - s.u[i]) -
                                 0.5 * (mv_[i] + mv_[i - 1]) * (s.u[i] - s.u[i - 1])) *
                                ih2;
            const double heat = (0.5 * (av_[i] + av_[i + 1]) * (s.theta[i + 1] - s.theta[i]) -
                                 0.5 * (av_[i] + av_[i - 1]) * (s.theta[i] - s.theta[i - 1])) *
                                ih2;
            const double kt = model_.kappa_theta(v, th);
            const double F = th * kt * vx_[i] * uxx / v5 +
                             (v * model_.kappa_vtheta(v, th) - kt) * th * ux * vx_[i] * vx_[i] / (2.0 * v5 * v);
            out.v[i] = ux;
            out.u[i] = -(p_[i + 1] - p_[i - 1]) * i2h + visc + (K_[i + 1] - K_[i - 1]) * i2h;
            out.theta[i] = (-p_[i] * ux + heat + mv_[i] * ux * ux + F) / ceff_[i];
        }
    }

    /// dt = c dx^2 / (max mu/v + max alpha/(v C_eff) + max sqrt(kappa/v^5)).
    double stable_dt(const State& s) const {
        const double cv = tp_.cv();
        const double h = grid_.dx();
        double a = 0.0, b = 0.0, c = 0.0;
        const Field vx = d1(grid_, s.v);
        for (std::size_t i = 0; i < s.size(); ++i) {
            const double v = s.v[i], th = s.theta[i];
            const double v5 = v * v * v * v * v;
            const double ce = cv - 0.5 * th * model_.kappa_thetatheta(v, th) * vx[i] * vx[i] / v5;
            a = std::max(a, model_.mu(v, th) / v);
            b = std::max(b, model_.alpha(v, th) / (v * ce));
            c = std::max(c, std::sqrt(std::max(0.0, model_.kappa(v, th)) / v5));
        }
        const double D = a + b + c;
        if (!(D > 0.0)) return set_.cfl * h; // hyperbolic-only limit for the degenerate test mode
        return set_.cfl * h * h / D;
    }

    /// One RK4 step; returns false (leaving s untouched) if any stage
    /// produced an inadmissible state.
    bool try_step(State& s, double dt) {
        const std::size_t n = s.size();
        auto axpy = [&](const State& base, const Rates& k, double a, State& out) {
            out.t = base.t + a;
            for (std::size_t i = 0; i < n; ++i) {
                out.v[i] = base.v[i] + a * k.v[i];
                out.u[i] = base.u[i] + a * k.u[i];
                out.theta[i] = base.theta[i] + a * k.theta[i];
            }
            clamp(out);
        };
        tmp_ = s;
        try {
            rhs(s, k1_);
            axpy(s, k1_, 0.5 * dt, tmp_);
            rhs(tmp_, k2_);
            axpy(s, k2_, 0.5 * dt, tmp_);
            rhs(tmp_, k3_);
            axpy(s, k3_, dt, tmp_);
            rhs(tmp_, k4_);
        } catch (const PositivityError&) {
            return false;
        }
        const double w = dt / 6.0;
        tmp_.t = s.t + dt;
        for (std::size_t i = 0; i < n; ++i) {
            tmp_.v[i] = s.v[i] + w * (k1_.v[i] + 2.0 * (k2_.v[i] + k3_.v[i]) + k4_.v[i]);
            tmp_.u[i] = s.u[i] + w * (k1_.u[i] + 2.0 * (k2_.u[i] + k3_.u[i]) + k4_.u[i]);
            tmp_.theta[i] = s.theta[i] + w * (k1_.theta[i] + 2.0 * (k2_.theta[i] + k3_.theta[i]) + k4_.theta[i]);
        }
        clamp(tmp_);
        for (std::size_t i = 0; i < n; ++i)
            if (!(tmp_.v[i] > 0 && tmp_.theta[i] > 0) || !std::isfinite(tmp_.v[i]) || !std::isfinite(tmp_.u[i]) ||
                !std::isfinite(tmp_.theta[i]))
                return false;
        std::swap(s, tmp_);
        return true;
    }

    /// Step with the retry ladder: halve dt on failure, at most max_halvings times.
    void step(State& s, double dt) {
        for (int k = 0; k <= set_.max_halvings; ++k) {
            if (try_step(s, dt)) {
                last_dt_ = dt;
                return;
            }
            dt *= 0.5;
            ++halvings_;
        }
        throw BlowUpError("solver: step failed after " + std::to_string(set_.max_halvings) + " halvings at t = " +
                          std::to_string(s.t));
    }

    /// Advances to t_end exactly. The sink sees the state every `cadence`
    /// accepted steps (counted across calls) and once at t_end.
    void advance_to(State& s, double t_end, const Sink& sink = {}) {
        detail::check_state(grid_, s);
        while (s.t < t_end) {
            double dt = stable_dt(s);
            const double remaining = t_end - s.t;
            bool last = false;
            if (dt >= remaining * (1.0 - 1e-12)) {
                dt = remaining;
                last = true;
            }
            step(s, dt);
            if (last) s.t = t_end;
            ++steps_;
            check_box(s);
            if (sink && !last && steps_ % set_.cadence == 0) sink(s);
        }
        if (sink) sink(s);
    }

    /// Runs from s.t to settings().t_final, emitting the initial state first.
    State run(State s, const Sink& sink = {}) {
        clamp(s);
        if (sink) sink(s);
        advance_to(s, set_.t_final, sink);
        return s;
    }

    void clamp(State& s) const {
        if (!bc_) return;
        const BoundaryValues b = bc_(s.t);
        s.v.front() = b.v_left;
        s.u.front() = b.u_left;
        s.theta.front() = b.theta_left;
        s.v.back() = b.v_right;
        s.u.back() = b.u_right;
        s.theta.back() = b.theta_right;
    }

private:
    void check_box(const State& s) const {
        for (std::size_t i = 0; i < s.size(); ++i)
            if (!set_.abort_box.contains(s.v[i], s.theta[i]))
                throw PositivityError("solver: state left the admissible box at t = " + std::to_string(s.t) +
                                      ", x = " + std::to_string(grid_.x(i)) + " (v = " + std::to_string(s.v[i]) +
                                      ", theta = " + std::to_string(s.theta[i]) + ")");
    }

    ThermoParams tp_;
    M model_;
    Grid grid_;
    SolverSettings set_;
    BoundaryFn bc_;
    Field p_, K_, mv_, av_, ux_, vx_, ceff_;
    Rates k1_, k2_, k3_, k4_;
    State tmp_;
    std::size_t steps_ = 0;
    std::size_t halvings_ = 0;
    double last_dt_ = 0.0;
};

} // namespace nsk
