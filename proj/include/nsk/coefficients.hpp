#pragma once

// Viscosity mu(v,theta), capillarity kappa(v,theta) and heat conductivity
// alpha(v,theta) together with the partials the PDE and the structural
// assumptions need.

#include <algorithm>
#include <cmath>
#include <concepts>
#include <limits>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "nsk/error.hpp"
#include "nsk/thermo.hpp"

namespace nsk {

template <class M>
concept CoefficientModel = requires(const M& m, double v, double th) {
    { m.mu(v, th) } -> std::convertible_to<double>;
    { m.mu_v(v, th) } -> std::convertible_to<double>;
    { m.mu_theta(v, th) } -> std::convertible_to<double>;
    { m.kappa(v, th) } -> std::convertible_to<double>;
    { m.kappa_v(v, th) } -> std::convertible_to<double>;
    { m.kappa_theta(v, th) } -> std::convertible_to<double>;
    { m.kappa_thetatheta(v, th) } -> std::convertible_to<double>;
    { m.kappa_vtheta(v, th) } -> std::convertible_to<double>;
    { m.alpha(v, th) } -> std::convertible_to<double>;
    { m.alpha_v(v, th) } -> std::convertible_to<double>;
    { m.alpha_theta(v, th) } -> std::convertible_to<double>;
};

/// Everything the right-hand side needs at one node, in one call.
struct CoeffValues {
    double mu;
    double kappa;
    double kappa_v;
    double kappa_theta;
    double kappa_thetatheta;
    double kappa_vtheta;
    double alpha;
};

namespace detail {

/// x^e, with a multiply-only path for small integer exponents.
inline double fast_pow(double x, double e) noexcept {
    if (e == 0.0) return 1.0;
    if (e == 1.0) return x;
    if (e == 2.0) return x * x;
    if (e == 3.0) return x * x * x;
    if (e == -1.0) return 1.0 / x;
    if (e == -2.0) return 1.0 / (x * x);
    return std::pow(x, e);
}

} // namespace detail

/// mu = mu0 v^m, kappa = kappa0 v^k (K1 - eps theta^2), alpha = alpha0 theta^a.
///
/// The "default" family (m = 0, k = 3, a = 1) satisfies g(v,theta) = 0
/// identically, has kappa_thetatheta = -2 eps kappa0 v^3 < 0, and makes the
/// contact-wave diffusion equation linear (alpha_hat(Theta) = alpha0 Theta).
struct PowerLawModel {
    std::string name = "default";
    double mu0 = 1.0;
    double mu_exp = 0.0;
    double kappa0 = 0.1;
    double kappa_exp = 3.0;
    double K1 = 1.0;
    double eps = 0.01;
    double alpha0 = 1.0;
    double alpha_exp = 1.0;
    /// Permits zero mu0 / kappa0 / alpha0 so that Euler and Navier-Stokes
    /// reductions can be exercised.
    bool test_mode = false;

    static PowerLawModel default_model(double mu0 = 1.0, double kappa0 = 0.1, double alpha0 = 1.0,
                                       double eps = 0.01, double K1 = 1.0) {
        PowerLawModel m;
        m.name = "default";
        m.mu0 = mu0;
        m.kappa0 = kappa0;
        m.alpha0 = alpha0;
        m.eps = eps;
        m.K1 = K1;
        return m;
    }

    static PowerLawModel constant(double mu0, double kappa0, double alpha0) {
        PowerLawModel m;
        m.name = "constant";
        m.mu0 = mu0;
        m.kappa0 = kappa0;
        m.alpha0 = alpha0;
        m.mu_exp = m.kappa_exp = m.alpha_exp = 0.0;
        m.eps = 0.0;
        m.K1 = 1.0;
        return m;
    }

    /// Throws unless the model is strictly positive for theta <= theta_max.
    void validate(double theta_max) const {
        const bool allow_zero = test_mode;
        auto check = [&](double x, const char* what) {
            if (allow_zero ? !(x >= 0.0) : !(x > 0.0))
                throw ModelViolation(std::string("coefficient model: ") + what +
                                     (allow_zero ? " must be nonnegative" : " must be positive"));
        };
        check(mu0, "mu0");
        check(kappa0, "kappa0");
        check(alpha0, "alpha0");
        if (eps < 0.0) throw ModelViolation("coefficient model: eps must be nonnegative");
        if (kappa0 > 0.0 && !(K1 > eps * theta_max * theta_max))
            throw ModelViolation("coefficient model: K1 must exceed eps*(theta_max)^2 so that kappa > 0");
    }

    double mu(double v, double) const noexcept { return mu0 * detail::fast_pow(v, mu_exp); }
    double mu_v(double v, double) const noexcept {
        return mu_exp == 0.0 ? 0.0 : mu0 * mu_exp * detail::fast_pow(v, mu_exp - 1.0);
    }
    double mu_theta(double, double) const noexcept { return 0.0; }

    double kappa(double v, double th) const noexcept {
        return kappa0 * detail::fast_pow(v, kappa_exp) * (K1 - eps * th * th);
    }
    double kappa_v(double v, double th) const noexcept {
        return kappa_exp == 0.0 ? 0.0
                                : kappa0 * kappa_exp * detail::fast_pow(v, kappa_exp - 1.0) * (K1 - eps * th * th);
    }
    double kappa_theta(double v, double th) const noexcept {
        return -2.0 * eps * th * kappa0 * detail::fast_pow(v, kappa_exp);
    }
    double kappa_thetatheta(double v, double) const noexcept {
        return -2.0 * eps * kappa0 * detail::fast_pow(v, kappa_exp);
    }
    double kappa_vtheta(double v, double th) const noexcept {
        return kappa_exp == 0.0 ? 0.0 : -2.0 * eps * th * kappa0 * kappa_exp * detail::fast_pow(v, kappa_exp - 1.0);
    }

    double alpha(double, double th) const noexcept { return alpha0 * detail::fast_pow(th, alpha_exp); }
    double alpha_v(double, double) const noexcept { return 0.0; }
    double alpha_theta(double, double th) const noexcept {
        return alpha_exp == 0.0 ? 0.0 : alpha0 * alpha_exp * detail::fast_pow(th, alpha_exp - 1.0);
    }

    CoeffValues eval(double v, double th) const noexcept {
        const double vk = detail::fast_pow(v, kappa_exp);
        const double vk1 = kappa_exp == 0.0 ? 0.0 : vk / v;
        const double bracket = K1 - eps * th * th;
        CoeffValues c;
        c.mu = mu(v, th);
        c.kappa = kappa0 * vk * bracket;
        c.kappa_v = kappa0 * kappa_exp * vk1 * bracket;
        c.kappa_theta = -2.0 * eps * th * kappa0 * vk;
        c.kappa_thetatheta = -2.0 * eps * kappa0 * vk;
        c.kappa_vtheta = -2.0 * eps * th * kappa0 * kappa_exp * vk1;
        c.alpha = alpha(v, th);
        return c;
    }

    std::map<std::string, double> parameters() const {
        return {{"mu0", mu0},     {"mu_exp", mu_exp}, {"kappa0", kappa0},       {"kappa_exp", kappa_exp},
                {"K1", K1},       {"eps", eps},       {"alpha0", alpha0},       {"alpha_exp", alpha_exp}};
    }
};

static_assert(CoefficientModel<PowerLawModel>);

/// C_v - (theta/2) kappa_thetatheta v_x^2 / v^5, the coefficient of theta_t.
inline double effective_heat_capacity(double cv, double theta, double v, double v_x, double kappa_tt) {
    const double v2 = v * v;
    const double c = cv - 0.5 * theta * kappa_tt * v_x * v_x / (v2 * v2 * v);
    if (!(c > 0.0)) throw ModelViolation("effective heat capacity is not positive");
    return c;
}

template <CoefficientModel M>
double effective_heat_capacity(const ThermoParams& tp, const M& m, double v, double theta, double v_x) {
    detail::require_positive(v, "specific volume");
    detail::require_positive(theta, "temperature");
    return effective_heat_capacity(tp.cv(), theta, v, v_x, m.kappa_thetatheta(v, theta));
}

/// g(v,theta) = 3 kappa mu + 2 v kappa mu_v - v mu kappa_v.
template <CoefficientModel M>
double coupling_g(const M& m, double v, double th) {
    const double mu = m.mu(v, th), ka = m.kappa(v, th);
    return 3.0 * ka * mu + 2.0 * v * ka * m.mu_v(v, th) - v * mu * m.kappa_v(v, th);
}

/// f(v,theta) of the viscosity/capillarity coupling condition. The outer
/// v-derivatives are central differences of analytic inner expressions.
template <CoefficientModel M>
double coupling_f(const M& m, double v, double th) {
    auto S = [&](double x) { return std::sqrt(m.mu(x, th) * m.kappa(x, th)) / (x * x * x); };
    auto S_v = [&](double x) {
        const double mu = m.mu(x, th), ka = m.kappa(x, th);
        const double root = std::sqrt(mu * ka);
        if (root == 0.0) return 0.0;
        return (m.mu_v(x, th) * ka + mu * m.kappa_v(x, th)) / (2.0 * root * x * x * x) - 3.0 * root / (x * x * x * x);
    };
    auto mu_over_v_v = [&](double x) { return m.mu_v(x, th) / x - m.mu(x, th) / (x * x); };
    auto capillary = [&](double x) { return 5.0 * m.kappa(x, th) - x * m.kappa_v(x, th); };
    auto p1 = [&](double x) { return S(x) * S_v(x); };
    auto p2 = [&](double x) { return m.kappa(x, th) / std::pow(x, 5) * mu_over_v_v(x); };
    auto p3 = [&](double x) { return m.mu(x, th) / (2.0 * std::pow(x, 7)) * capillary(x); };
    const double h = 1e-4 * v;
    auto dv = [&](auto&& fn) { return (fn(v + h) - fn(v - h)) / (2.0 * h); };
    const double sv = S_v(v);
    return -2.0 / 3.0 * dv(p1) + sv * sv + dv(p2) / 3.0 + mu_over_v_v(v) * capillary(v) / (2.0 * std::pow(v, 6)) -
           dv(p3) / 3.0;
}

struct Range {
    double lo;
    double hi;
};

/// Sampled verification of the structural assumptions on (mu, kappa, alpha).
struct AssumptionReport {
    double mu_min = 0, mu_max = 0;
    double kappa_min = 0, kappa_max = 0;
    double alpha_min = 0, alpha_max = 0;
    double mu_over_alpha_sup = 0;   ///< sampled M0
    double kappa_theta_sup = 0;     ///< sampled sup |kappa_theta|, compared against a configured eps
    double kappa_tt_max = 0;        ///< max of kappa_thetatheta
    bool kappa_tt_nonpositive = false;
    bool kappa_tt_strict = false;   ///< kappa_thetatheta < 0 at every sample
    double g_abs_max = 0;           ///< max |g|
    double g_rel_max = 0;           ///< max |g| / (3 kappa mu)
    double f_max = 0;               ///< max of f over samples
    bool coefficients_positive = false;
    double exp_a = 0, exp_b = 0;    ///< mu_1 ~ v^-a (v->0), v^-b (v->inf)
    double exp_c = 0, exp_d = 0;    ///< kappa_1 ~ v^-c, v^-d
    bool growth_b1 = false;         ///< a >= 0 and b <= 1/2
    bool growth_b2 = false;         ///< c <= 3 and d >= 2
    bool coupling_f_ok = false;     ///< f <= 0 at every sample
    bool coupling_g_ok = false;     ///< g == 0 to 1e-12 (relative)
    bool kappa_theta_small(double eps_threshold) const { return kappa_theta_sup < eps_threshold; }
    std::vector<std::string> violations;
};

namespace detail {

template <CoefficientModel M, class F>
double min_over_theta(const M&, Range theta, F&& fn, double v) {
    constexpr int n = 65;
    double best = std::numeric_limits<double>::infinity();
    for (int j = 0; j < n; ++j) {
        const double th = theta.lo + (theta.hi - theta.lo) * j / (n - 1);
        best = std::min(best, fn(v, th));
    }
    return best;
}

/// Least-squares slope of log y against log x.
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double den = n * sxx - sx * sx;
    return den == 0.0 ? 0.0 : (n * sxy - sx * sy) / den;
}

} // namespace detail

/// mu_1(v) = min over the temperature box of mu(v, theta).
template <CoefficientModel M>
double mu_min_over_theta(const M& m, Range theta, double v) {
    return detail::min_over_theta(m, theta, [&](double x, double th) { return m.mu(x, th); }, v);
}

template <CoefficientModel M>
double kappa_min_over_theta(const M& m, Range theta, double v) {
    return detail::min_over_theta(m, theta, [&](double x, double th) { return m.kappa(x, th); }, v);
}

/// Samples a log-spaced v grid crossed with a uniform theta grid plus uniform
/// random points. theta_range is the temperature box [Theta_lo/2, 2 Theta_hi].
/// Growth exponents are slopes on the outer decade at each end of v_range.
template <CoefficientModel M>
AssumptionReport check_assumptions(const ThermoParams&, const M& m, Range v_range, Range theta_range,
                                   int n_samples) {
    if (!(v_range.lo > 0 && v_range.hi > v_range.lo && theta_range.lo > 0 && theta_range.hi >= theta_range.lo))
        throw DomainError("check_assumptions: ranges must be positive and ordered");
    if (n_samples < 2) throw DomainError("check_assumptions: need at least two samples");

    std::vector<std::pair<double, double>> pts;
    const double lv0 = std::log(v_range.lo), lv1 = std::log(v_range.hi);
    for (int i = 0; i < n_samples; ++i) {
        const double v = std::exp(lv0 + (lv1 - lv0) * i / (n_samples - 1));
        for (int j = 0; j < n_samples; ++j) {
            const double th = theta_range.lo + (theta_range.hi - theta_range.lo) * j / (n_samples - 1);
            pts.emplace_back(v, th);
        }
    }
    std::mt19937_64 rng(20240611ULL);
    std::uniform_real_distribution<double> uv(v_range.lo, v_range.hi), ut(theta_range.lo, theta_range.hi);
    for (int i = 0; i < n_samples * n_samples; ++i) pts.emplace_back(uv(rng), ut(rng));

    AssumptionReport r;
    const double inf = std::numeric_limits<double>::infinity();
    r.mu_min = r.kappa_min = r.alpha_min = inf;
    r.mu_max = r.kappa_max = r.alpha_max = -inf;
    r.kappa_tt_max = r.f_max = -inf;
    for (auto [v, th] : pts) {
        const double mu = m.mu(v, th), ka = m.kappa(v, th), al = m.alpha(v, th);
        r.mu_min = std::min(r.mu_min, mu);
        r.mu_max = std::max(r.mu_max, mu);
        r.kappa_min = std::min(r.kappa_min, ka);
        r.kappa_max = std::max(r.kappa_max, ka);
        r.alpha_min = std::min(r.alpha_min, al);
        r.alpha_max = std::max(r.alpha_max, al);
        if (al > 0) r.mu_over_alpha_sup = std::max(r.mu_over_alpha_sup, mu / al);
        else r.mu_over_alpha_sup = inf;
        r.kappa_theta_sup = std::max(r.kappa_theta_sup, std::abs(m.kappa_theta(v, th)));
        r.kappa_tt_max = std::max(r.kappa_tt_max, m.kappa_thetatheta(v, th));
        const double g = coupling_g(m, v, th);
        r.g_abs_max = std::max(r.g_abs_max, std::abs(g));
        const double scale = 3.0 * std::abs(ka * mu);
        r.g_rel_max = std::max(r.g_rel_max, scale > 0 ? std::abs(g) / scale : (g == 0 ? 0.0 : inf));
        if (mu > 0 && ka > 0) r.f_max = std::max(r.f_max, coupling_f(m, v, th));
    }
    r.coefficients_positive = r.mu_min > 0 && r.kappa_min > 0 && r.alpha_min > 0;
    r.kappa_tt_nonpositive = r.kappa_tt_max <= 0.0;
    r.kappa_tt_strict = r.kappa_tt_max < 0.0;
    r.coupling_f_ok = r.f_max <= 1e-10 * std::max(1.0, r.mu_max * r.kappa_max);
    r.coupling_g_ok = r.g_rel_max <= 1e-12;

    auto decade_fit = [&](bool low, auto&& fn) {
        const double a = low ? v_range.lo : std::max(v_range.lo, v_range.hi / 10.0);
        const double b = low ? std::min(v_range.hi, 10.0 * v_range.lo) : v_range.hi;
        std::vector<double> xs, ys;
        for (int i = 0; i < 16; ++i) {
            const double x = std::exp(std::log(a) + (std::log(b) - std::log(a)) * i / 15.0);
            const double y = fn(x);
            if (!(y > 0)) return std::numeric_limits<double>::quiet_NaN();
            xs.push_back(x);
            ys.push_back(y);
        }
        return detail::loglog_slope(xs, ys);
    };
    auto mu1 = [&](double v) { return mu_min_over_theta(m, theta_range, v); };
    auto ka1 = [&](double v) { return kappa_min_over_theta(m, theta_range, v); };
    r.exp_a = -decade_fit(true, mu1);
    r.exp_b = -decade_fit(false, mu1);
    r.exp_c = -decade_fit(true, ka1);
    r.exp_d = -decade_fit(false, ka1);
    constexpr double tol = 0.05;
    r.growth_b1 = r.exp_a >= -tol && r.exp_b <= 0.5 + tol;
    r.growth_b2 = r.exp_c <= 3.0 + tol && r.exp_d >= 2.0 - tol;

    if (!r.coefficients_positive) r.violations.emplace_back("coefficients not strictly positive");
    if (!r.kappa_tt_nonpositive) r.violations.emplace_back("kappa_thetatheta > 0 somewhere");
    else if (!r.kappa_tt_strict) r.violations.emplace_back("kappa_thetatheta < 0 holds only non-strictly");
    if (!r.growth_b1 && !r.growth_b2) r.violations.emplace_back("neither the viscosity nor the capillarity growth condition holds");
    if (!r.coupling_f_ok && !r.coupling_g_ok) r.violations.emplace_back("neither f <= 0 nor g == 0 holds");
    return r;
}

} // namespace nsk
