#pragma once

// Self-similar temperature profile Theta(xi), xi = x / sqrt(1+t), of the
// contact-wave diffusion equation
//     Theta_t = a (alpha_hat(Theta) Theta_x / Theta)_x,   a = p (gamma-1) / (gamma R^2),
// i.e. the two-point problem a (beta(Theta) Theta')' + (xi/2) Theta' = 0 with
// beta = alpha_hat / Theta and Theta(+-Xi) = theta_+-.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "nsk/coefficients.hpp"
#include "nsk/error.hpp"
#include "nsk/thermo.hpp"

namespace nsk {

/// beta(Theta) = alpha_hat(Theta) / Theta with alpha_hat(Theta) = alpha(R Theta / p, Theta).
template <CoefficientModel M>
struct ContactDiffusivity {
    const M* model;
    double R;
    double p;

    double alpha_hat(double th) const { return model->alpha(R * th / p, th); }
    double alpha_hat_prime(double th) const {
        const double v = R * th / p;
        return model->alpha_v(v, th) * R / p + model->alpha_theta(v, th);
    }
    double beta(double th) const { return alpha_hat(th) / th; }
    double beta_prime(double th) const { return (alpha_hat_prime(th) * th - alpha_hat(th)) / (th * th); }
};

struct SelfSimilarProfile {
    std::vector<double> xi;
    std::vector<double> Theta;
    std::vector<double> dTheta;
    std::vector<double> d2Theta;
    double theta_minus = 1.0;
    double theta_plus = 1.0;
    double a_coef = 0.0;
    double p_plus = 1.0;
    double half_width = 1.0;   ///< Xi
    double ode_residual = 0.0; ///< sup norm of the discrete residual at convergence
    int newton_iterations = 0;

    double spacing() const { return xi.size() > 1 ? xi[1] - xi[0] : 0.0; }
};

/// a = p (gamma-1) / (gamma R^2)
inline double contact_diffusion_coefficient(const ThermoParams& tp, double p) {
    return p * tp.delta() / (tp.gamma * tp.R * tp.R);
}

/// Xi = max(1, 12 sqrt(a max alpha_hat / min Theta)) over the temperature range.
template <CoefficientModel M>
double default_half_width(const ThermoParams& tp, const M& m, double theta_minus, double theta_plus, double p) {
    const double a = contact_diffusion_coefficient(tp, p);
    ContactDiffusivity<M> cd{&m, tp.R, p};
    const double lo = std::min(theta_minus, theta_plus), hi = std::max(theta_minus, theta_plus);
    double amax = 0.0;
    for (int j = 0; j <= 32; ++j) amax = std::max(amax, cd.alpha_hat(lo + (hi - lo) * j / 32.0));
    return std::max(1.0, 12.0 * std::sqrt(a * amax / lo));
}

namespace detail {

/// Thomas algorithm; sub[i] couples i to i-1, sup[i] couples i to i+1.
inline void solve_tridiagonal(std::vector<double> sub, std::vector<double> diag, std::vector<double> sup,
                              std::vector<double>& rhs) {
    const std::size_t n = diag.size();
    for (std::size_t i = 1; i < n; ++i) {
        const double w = sub[i] / diag[i - 1];
        diag[i] -= w * sup[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    rhs[n - 1] /= diag[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) rhs[i] = (rhs[i] - sup[i] * rhs[i + 1]) / diag[i];
}

template <CoefficientModel M>
double bvp_residual(const ContactDiffusivity<M>& cd, double a, const std::vector<double>& xi,
                    const std::vector<double>& th, std::vector<double>& out) {
    const std::size_t n = th.size();
    const double h = xi[1] - xi[0];
    out.assign(n, 0.0);
    double sup = 0.0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double qr = cd.beta(0.5 * (th[i] + th[i + 1])) * (th[i + 1] - th[i]) / h;
        const double ql = cd.beta(0.5 * (th[i] + th[i - 1])) * (th[i] - th[i - 1]) / h;
        out[i] = a * (qr - ql) / h + 0.25 * xi[i] * (th[i + 1] - th[i - 1]) / h;
        sup = std::max(sup, std::abs(out[i]));
    }
    return sup;
}

} // namespace detail

/// Theta'' from the ODE given Theta and Theta': the profile satisfies the
/// differential equation pointwise through this relation.
template <CoefficientModel M>
double profile_second_derivative(const ContactDiffusivity<M>& cd, double a, double xi, double th, double dth) {
    return (-xi * dth / (2.0 * a) - cd.beta_prime(th) * dth * dth) / cd.beta(th);
}

/// Damped Newton on the conservative second-order central discretization,
/// started from the erf profile of the linearized (constant beta) problem.
template <CoefficientModel M>
SelfSimilarProfile solve_selfsimilar(const ThermoParams& tp, const M& m, double theta_minus, double theta_plus,
                                     double p_plus, double Xi = 0.0, std::size_t N = 2001) {
    if (!(theta_minus > 0 && theta_plus > 0)) throw DomainError("selfsimilar: temperatures must be positive");
    if (!(p_plus > 0)) throw DomainError("selfsimilar: pressure must be positive");
    if (N < 101 || N % 2 == 0) throw DomainError("selfsimilar: N must be odd and at least 101");
    if (Xi <= 0.0) Xi = default_half_width(tp, m, theta_minus, theta_plus, p_plus);

    SelfSimilarProfile prof;
    prof.theta_minus = theta_minus;
    prof.theta_plus = theta_plus;
    prof.p_plus = p_plus;
    prof.half_width = Xi;
    prof.a_coef = contact_diffusion_coefficient(tp, p_plus);
    const double a = prof.a_coef;
    ContactDiffusivity<M> cd{&m, tp.R, p_plus};

    prof.xi.resize(N);
    const double h = 2.0 * Xi / static_cast<double>(N - 1);
    for (std::size_t i = 0; i < N; ++i) prof.xi[i] = -Xi + h * static_cast<double>(i);
    prof.xi[N - 1] = Xi;
    prof.xi[(N - 1) / 2] = 0.0;

    auto& th = prof.Theta;
    th.assign(N, theta_minus);
    if (theta_plus == theta_minus) {
        prof.dTheta.assign(N, 0.0);
        prof.d2Theta.assign(N, 0.0);
        return prof;
    }

    const double dlt = theta_plus - theta_minus;
    const double beta_bar = cd.beta(0.5 * (theta_minus + theta_plus));
    for (std::size_t i = 0; i < N; ++i)
        th[i] = theta_minus + 0.5 * dlt * (1.0 + std::erf(prof.xi[i] / (2.0 * std::sqrt(a * beta_bar))));
    th.front() = theta_minus;
    th.back() = theta_plus;

    std::vector<double> F, trial(N), Ftrial;
    double res = detail::bvp_residual(cd, a, prof.xi, th, F);
    const std::size_t n_in = N - 2;
    int it = 0;
    for (; it < 100 && res > 1e-13; ++it) {
        std::vector<double> sub(n_in, 0.0), diag(n_in, 0.0), sup(n_in, 0.0), rhs(n_in);
        for (std::size_t k = 0; k < n_in; ++k) {
            const std::size_t i = k + 1;
            const double mr = 0.5 * (th[i] + th[i + 1]), ml = 0.5 * (th[i] + th[i - 1]);
            const double Dr = (th[i + 1] - th[i]) / h, Dl = (th[i] - th[i - 1]) / h;
            const double br = cd.beta(mr), bl = cd.beta(ml);
            const double bpr = cd.beta_prime(mr), bpl = cd.beta_prime(ml);
            // dq_r/dth[i+1], dq_r/dth[i], dq_l/dth[i], dq_l/dth[i-1]
            const double qr_ip1 = 0.5 * bpr * Dr + br / h;
            const double qr_i = 0.5 * bpr * Dr - br / h;
            const double ql_i = 0.5 * bpl * Dl + bl / h;
            const double ql_im1 = 0.5 * bpl * Dl - bl / h;
            diag[k] = a * (qr_i - ql_i) / h;
            if (k + 1 < n_in) sup[k] = a * qr_ip1 / h + 0.25 * prof.xi[i] / h;
            if (k > 0) sub[k] = -a * ql_im1 / h - 0.25 * prof.xi[i] / h;
            rhs[k] = -F[i];
        }
        detail::solve_tridiagonal(sub, diag, sup, rhs);
        double lambda = 1.0;
        bool accepted = false;
        for (int ls = 0; ls < 30; ++ls) {
            trial = th;
            for (std::size_t k = 0; k < n_in; ++k) trial[k + 1] += lambda * rhs[k];
            const double r = detail::bvp_residual(cd, a, prof.xi, trial, Ftrial);
            if (r < res || r <= 1e-13) {
                th.swap(trial);
                F.swap(Ftrial);
                accepted = r < res || r <= 1e-13;
                res = r;
                break;
            }
            lambda *= 0.5;
        }
        if (!accepted) break;
    }
    prof.newton_iterations = it;
    prof.ode_residual = res;
    if (!(res < 1e-8))
        throw ConvergenceError("selfsimilar: damped Newton did not converge (residual " + std::to_string(res) +
                               "); increase Xi or N");

    // Theta' by fourth-order central differences, second order next to the ends.
    auto& d = prof.dTheta;
    d.assign(N, 0.0);
    for (std::size_t i = 2; i + 2 < N; ++i)
        d[i] = (th[i - 2] - 8.0 * th[i - 1] + 8.0 * th[i + 1] - th[i + 2]) / (12.0 * h);
    d[1] = (th[2] - th[0]) / (2.0 * h);
    d[N - 2] = (th[N - 1] - th[N - 3]) / (2.0 * h);
    d[0] = (-3.0 * th[0] + 4.0 * th[1] - th[2]) / (2.0 * h);
    d[N - 1] = (3.0 * th[N - 1] - 4.0 * th[N - 2] + th[N - 3]) / (2.0 * h);
    prof.d2Theta.assign(N, 0.0);
    for (std::size_t i = 0; i < N; ++i)
        prof.d2Theta[i] = profile_second_derivative(cd, a, prof.xi[i], th[i], d[i]);
    return prof;
}

} // namespace nsk
