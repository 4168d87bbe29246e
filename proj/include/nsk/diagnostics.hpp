#pragma once

// Perturbation norms, energy functionals, Kanel functionals, ansatz
// residuals, the Gaussian heat-kernel weight pair and decay fits.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "nsk/coefficients.hpp"
#include "nsk/composite.hpp"
#include "nsk/contact.hpp"
#include "nsk/error.hpp"
#include "nsk/grid.hpp"
#include "nsk/solver.hpp"
#include "nsk/states.hpp"
#include "nsk/thermo.hpp"

namespace nsk {

// ---------------------------------------------------------------------------
// ansatz sampling and perturbations

struct AnsatzFields {
    Field V, U, Theta;
};

template <class Wave>
std::vector<WavePoint> sample_wave(const Wave& w, const Grid& g, double t) {
    std::vector<WavePoint> out(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) out[i] = static_cast<WavePoint>(w.eval(g.x(i), t));
    return out;
}

inline AnsatzFields to_fields(const std::vector<WavePoint>& pts) {
    AnsatzFields a{Field(pts.size()), Field(pts.size()), Field(pts.size())};
    for (std::size_t i = 0; i < pts.size(); ++i) {
        a.V[i] = pts[i].V;
        a.U[i] = pts[i].U;
        a.Theta[i] = pts[i].Theta;
    }
    return a;
}

template <class Wave>
AnsatzFields sample_ansatz(const Wave& w, const Grid& g, double t) {
    return to_fields(sample_wave(w, g, t));
}

/// Ansatz values at the domain ends, as a boundary function for the solver.
template <class Wave>
BoundaryFn ansatz_boundary(const Wave& w, double L) {
    return [&w, L](double t) {
        const WavePoint a = w.eval(-L, t), b = w.eval(L, t);
        return BoundaryValues{a.V, a.U, a.Theta, b.V, b.U, b.Theta};
    };
}

struct PerturbationFields {
    Field phi, psi, zeta;
};

inline PerturbationFields perturbation(const State& s, const AnsatzFields& a) {
    const std::size_t n = s.size();
    if (a.V.size() != n || a.U.size() != n || a.Theta.size() != n)
        throw LengthError("perturbation: state and ansatz sizes differ");
    PerturbationFields p{Field(n), Field(n), Field(n)};
    for (std::size_t i = 0; i < n; ++i) {
        p.phi[i] = s.v[i] - a.V[i];
        p.psi[i] = s.u[i] - a.U[i];
        p.zeta[i] = s.theta[i] - a.Theta[i];
    }
    return p;
}

// ---------------------------------------------------------------------------
// energy and dissipation

template <CoefficientModel M>
double capillary_energy(const State& s, const M& m, const Grid& g) {
    detail::check_state(g, s);
    const Field vx = d1(g, s.v);
    Field e(s.size());
    for (std::size_t i = 0; i < e.size(); ++i) {
        const double v = s.v[i];
        e[i] = m.kappa(v, s.theta[i]) * vx[i] * vx[i] / (2.0 * v * v * v * v * v);
    }
    return integrate(g, e);
}

/// E = int [R Theta Phi(v/V) + psi^2/2 + (R/delta) Theta Phi(theta/Theta) + kappa v_x^2/(2 v^5)] dx
template <CoefficientModel M>
double basic_energy(const State& s, const AnsatzFields& a, const ThermoParams& tp, const M& m, const Grid& g) {
    detail::check_state(g, s);
    const Field vx = d1(g, s.v);
    Field e(s.size());
    for (std::size_t i = 0; i < e.size(); ++i) {
        const double rv = s.v[i] / a.V[i], rt = s.theta[i] / a.Theta[i];
        if (!(rv > 0 && rt > 0)) throw DomainError("basic_energy: nonpositive ratio v/V or theta/Theta");
        const double psi = s.u[i] - a.U[i];
        const double v = s.v[i];
        e[i] = tp.R * a.Theta[i] * phi_entropy(rv) + 0.5 * psi * psi +
               tp.R / tp.delta() * a.Theta[i] * phi_entropy(rt) +
               m.kappa(v, s.theta[i]) * vx[i] * vx[i] / (2.0 * v * v * v * v * v);
    }
    return integrate(g, e);
}

/// D = int [mu Theta psi_x^2 / (theta v) + alpha Theta zeta_x^2 / (v theta^2)] dx
template <CoefficientModel M>
double dissipation(const State& s, const AnsatzFields& a, const M& m, const Grid& g) {
    detail::check_state(g, s);
    const PerturbationFields p = perturbation(s, a);
    const Field px = d1(g, p.psi), zx = d1(g, p.zeta);
    Field d(s.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
        const double v = s.v[i], th = s.theta[i];
        if (!(v > 0 && th > 0)) throw DomainError("dissipation: nonpositive v or theta");
        d[i] = m.mu(v, th) * a.Theta[i] * px[i] * px[i] / (th * v) +
               m.alpha(v, th) * a.Theta[i] * zx[i] * zx[i] / (v * th * th);
    }
    return integrate(g, d);
}

// ---------------------------------------------------------------------------
// Kanel functionals

/// Adaptive Simpson quadrature with Richardson correction.
template <class F>
double adaptive_simpson(F&& f, double a, double b, double tol = 1e-12, int max_depth = 50) {
    if (a == b) return 0.0;
    const std::function<double(double, double, double, double, double, double, double, int)> rec =
        [&](double lo, double hi, double flo, double fmid, double fhi, double whole, double eps, int depth) {
            const double mid = 0.5 * (lo + hi);
            const double lm = 0.5 * (lo + mid), rm = 0.5 * (mid + hi);
            const double flm = f(lm), frm = f(rm);
            const double left = (mid - lo) / 6.0 * (flo + 4.0 * flm + fmid);
            const double right = (hi - mid) / 6.0 * (fmid + 4.0 * frm + fhi);
            const double diff = left + right - whole;
            if (depth <= 0 || std::abs(diff) <= 15.0 * eps) return left + right + diff / 15.0;
            return rec(lo, mid, flo, flm, fmid, left, 0.5 * eps, depth - 1) +
                   rec(mid, hi, fmid, frm, fhi, right, 0.5 * eps, depth - 1);
        };
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return rec(a, b, fa, fm, fb, whole, tol, max_depth);
}

/// Phi_bar(v~) = int_1^v~ sqrt(Phi(eta)) / eta * mu1(eta) d eta
template <class Mu1>
double kanel_phi_bar(double vt, Mu1&& mu1, double tol = 1e-12) {
    if (!(vt > 0)) throw PositivityError("kanel: ratio v/V must be positive");
    return adaptive_simpson([&](double eta) { return std::sqrt(phi_entropy(eta)) / eta * mu1(eta); }, 1.0, vt, tol);
}

/// Psi(v~) = int_1^v~ sqrt(Phi(eta)) / eta^(5/2) * sqrt(kappa1(eta)) d eta
template <class Kappa1>
double kanel_psi(double vt, Kappa1&& kappa1, double tol = 1e-12) {
    if (!(vt > 0)) throw PositivityError("kanel: ratio v/V must be positive");
    return adaptive_simpson(
        [&](double eta) { return std::sqrt(phi_entropy(eta)) * std::sqrt(kappa1(eta)) / (eta * eta * std::sqrt(eta)); },
        1.0, vt, tol);
}

struct KanelReport {
    Field phi_bar, psi;
    double phi_bar_max = 0.0;
    double phi_bar_l1 = 0.0;    ///< int |sqrt(Phi) mu1 v~_x / v~| dx
    double phi_bar_bound = 0.0; ///< ||sqrt(Phi(v~))|| * ||mu1(v~) v~_x / v~||
    double psi_max = 0.0;
    double psi_l1 = 0.0;
    double psi_bound = 0.0;

    /// The Cauchy-Schwarz chain up to a relative quadrature slack.
    bool holds(double rel_slack = 1e-6) const {
        return phi_bar_max <= phi_bar_bound * (1.0 + rel_slack) + 1e-14 &&
               psi_max <= psi_bound * (1.0 + rel_slack) + 1e-14;
    }
};

template <class Mu1, class Kappa1>
KanelReport kanel_functionals(std::span<const double> v, std::span<const double> V, Mu1&& mu1, Kappa1&& kappa1,
                              const Grid& g) {
    detail::check_length(g, v);
    detail::check_length(g, V);
    const std::size_t n = v.size();
    Field vt(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(v[i] > 0 && V[i] > 0)) throw PositivityError("kanel: fields must be positive");
        vt[i] = v[i] / V[i];
    }
    const Field vtx = d1(g, vt);
    KanelReport r;
    r.phi_bar.resize(n);
    r.psi.resize(n);
    Field sp(n), a(n), b(n), ia(n), ib(n);
    for (std::size_t i = 0; i < n; ++i) {
        r.phi_bar[i] = kanel_phi_bar(vt[i], mu1);
        r.psi[i] = kanel_psi(vt[i], kappa1);
        r.phi_bar_max = std::max(r.phi_bar_max, std::abs(r.phi_bar[i]));
        r.psi_max = std::max(r.psi_max, std::abs(r.psi[i]));
        sp[i] = std::sqrt(phi_entropy(vt[i]));
        a[i] = mu1(vt[i]) * vtx[i] / vt[i];
        b[i] = std::sqrt(kappa1(vt[i])) * vtx[i] / (vt[i] * vt[i] * std::sqrt(vt[i]));
        ia[i] = std::abs(sp[i] * a[i]);
        ib[i] = std::abs(sp[i] * b[i]);
    }
    r.phi_bar_l1 = integrate(g, ia);
    r.psi_l1 = integrate(g, ib);
    r.phi_bar_bound = l2_norm(g, sp) * l2_norm(g, a);
    r.psi_bound = l2_norm(g, sp) * l2_norm(g, b);
    return r;
}

// ---------------------------------------------------------------------------
// ansatz residuals

/// (mu U_x / V)_x evaluated with analytic derivatives of the ansatz.
template <CoefficientModel M>
double viscous_flux_x(const M& m, const WavePoint& p) {
    const double mu = m.mu(p.V, p.Theta);
    const double mux = m.mu_v(p.V, p.Theta) * p.V_x + m.mu_theta(p.V, p.Theta) * p.Theta_x;
    return mux * p.U_x / p.V + mu * p.U_xx / p.V - mu * p.U_x * p.V_x / (p.V * p.V);
}

/// (alpha Theta_x / V)_x
template <CoefficientModel M>
double heat_flux_x(const M& m, const WavePoint& p) {
    const double al = m.alpha(p.V, p.Theta);
    const double alx = m.alpha_v(p.V, p.Theta) * p.V_x + m.alpha_theta(p.V, p.Theta) * p.Theta_x;
    return alx * p.Theta_x / p.V + al * p.Theta_xx / p.V - al * p.Theta_x * p.V_x / (p.V * p.V);
}

/// G = U_t + P_x - (mu U_x / V)_x
template <CoefficientModel M>
double residual_G(const ThermoParams& tp, const M& m, const WavePoint& p) {
    const double Px = tp.R * (p.Theta_x / p.V - p.Theta * p.V_x / (p.V * p.V));
    return p.U_t + Px - viscous_flux_x(m, p);
}

/// H = (R/delta) Theta_t + P U_x - (alpha Theta_x / V)_x - mu U_x^2 / V
template <CoefficientModel M>
double residual_H(const ThermoParams& tp, const M& m, const WavePoint& p) {
    const double P = tp.R * p.Theta / p.V;
    return tp.R / tp.delta() * p.Theta_t + P * p.U_x - heat_flux_x(m, p) - m.mu(p.V, p.Theta) * p.U_x * p.U_x / p.V;
}

struct ContactResiduals {
    Field R1, R2;
};

/// R1 = U_t - (mu U_x / V)_x,  R2 = -mu U_x^2 / V  for the contact wave.
template <CoefficientModel M>
ContactResiduals contact_residuals(const ContactWave<M>& c, const Grid& g, double t) {
    ContactResiduals r{Field(g.size()), Field(g.size())};
    const M& m = c.model();
    for (std::size_t i = 0; i < g.size(); ++i) {
        const ContactPoint p = c.eval(g.x(i), t);
        r.R1[i] = p.U_t - viscous_flux_x(m, p);
        r.R2[i] = -m.mu(p.V, p.Theta) * p.U_x * p.U_x / p.V;
    }
    return r;
}

struct CompositeResiduals {
    Field G, H;
    double G_l1 = 0.0, H_l1 = 0.0;
    double l1() const noexcept { return G_l1 + H_l1; }
};

template <CoefficientModel M>
CompositeResiduals composite_residuals(const CompositeWave<M>& w, const Grid& g, double t) {
    CompositeResiduals r{Field(g.size()), Field(g.size())};
    for (std::size_t i = 0; i < g.size(); ++i) {
        const WavePoint p = w.eval(g.x(i), t);
        r.G[i] = residual_G(w.thermo(), w.model(), p);
        r.H[i] = residual_H(w.thermo(), w.model(), p);
    }
    r.G_l1 = l1_norm(g, r.G);
    r.H_l1 = l1_norm(g, r.H);
    return r;
}

// ---------------------------------------------------------------------------
// heat-kernel weight pair

struct HeatKernelPair {
    double alpha;
    double delta;

    HeatKernelPair(double alpha_, double delta_) : alpha(alpha_), delta(delta_) {
        if (!(alpha > 0 && delta > 0)) throw DomainError("heat kernel pair: alpha and delta must be positive");
    }

    double w(double t, double x) const {
        return std::exp(-alpha * x * x / (delta * (1.0 + t))) / std::sqrt(1.0 + t);
    }
    double w_x(double t, double x) const { return -2.0 * alpha * x / (delta * (1.0 + t)) * w(t, x); }
    /// g = int_{-inf}^x w dy
    double g(double t, double x) const {
        return 0.5 * std::sqrt(std::numbers::pi * delta / alpha) *
               (1.0 + std::erf(x * std::sqrt(alpha / (delta * (1.0 + t)))));
    }
    double g_t(double t, double x) const {
        const double z2 = alpha * x * x / (delta * (1.0 + t));
        return -0.5 * x * std::pow(1.0 + t, -1.5) * std::exp(-z2);
    }
    double g_sup() const { return std::sqrt(std::numbers::pi * delta / alpha); }
};

struct HuangTerms {
    double lhs = 0.0;     ///< int int h^2 w^2
    double initial = 0.0; ///< 4 pi ||h(0)||^2
    double gradient = 0.0; ///< 4 pi delta / alpha int ||h_x||^2
    double pairing = 0.0; ///< 8 alpha / delta int <h_t, h g^2>

    double rhs() const noexcept { return initial + gradient + pairing; }
    double slack() const noexcept { return rhs() - lhs; }
    bool holds() const noexcept { return lhs <= rhs(); }
};

/// Streaming accumulator: feed snapshots in increasing time, time integrals by
/// the trapezoid rule.
class HuangAccumulator {
public:
    HuangAccumulator(HeatKernelPair pair, Grid grid) : pair_(pair), grid_(grid) {}

    void add(double t, std::span<const double> h, std::span<const double> h_x, std::span<const double> h_t) {
        detail::check_length(grid_, h);
        detail::check_length(grid_, h_x);
        detail::check_length(grid_, h_t);
        if (count_ > 0 && !(t > t_prev_)) throw LengthError("huang estimate: times must increase");
        Field a(h.size()), b(h.size()), c(h.size());
        for (std::size_t i = 0; i < h.size(); ++i) {
            const double x = grid_.x(i);
            const double w = pair_.w(t, x), g = pair_.g(t, x);
            a[i] = h[i] * h[i] * w * w;
            b[i] = h_x[i] * h_x[i];
            c[i] = h_t[i] * h[i] * g * g;
        }
        const double ia = integrate(grid_, a), ib = integrate(grid_, b), ic = integrate(grid_, c);
        if (count_ == 0) {
            terms_.initial = 4.0 * std::numbers::pi * integrate(grid_, sq(h));
        } else {
            const double dt = t - t_prev_;
            lhs_ += 0.5 * dt * (ia + a_prev_);
            grad_ += 0.5 * dt * (ib + b_prev_);
            pair_int_ += 0.5 * dt * (ic + c_prev_);
        }
        a_prev_ = ia;
        b_prev_ = ib;
        c_prev_ = ic;
        t_prev_ = t;
        ++count_;
        terms_.lhs = lhs_;
        terms_.gradient = 4.0 * std::numbers::pi * pair_.delta / pair_.alpha * grad_;
        terms_.pairing = 8.0 * pair_.alpha / pair_.delta * pair_int_;
    }

    const HuangTerms& terms() const noexcept { return terms_; }
    std::size_t samples() const noexcept { return count_; }

private:
    static Field sq(std::span<const double> h) {
        Field out(h.size());
        for (std::size_t i = 0; i < h.size(); ++i) out[i] = h[i] * h[i];
        return out;
    }

    HeatKernelPair pair_;
    Grid grid_;
    HuangTerms terms_;
    double lhs_ = 0, grad_ = 0, pair_int_ = 0;
    double a_prev_ = 0, b_prev_ = 0, c_prev_ = 0, t_prev_ = 0;
    std::size_t count_ = 0;
};

/// Batch form over equally indexed series of snapshots.
inline HuangTerms huang_estimate_terms(const std::vector<double>& times, const std::vector<Field>& h,
                                       const std::vector<Field>& h_x, const std::vector<Field>& h_t,
                                       const HeatKernelPair& pair, const Grid& g) {
    if (times.size() != h.size() || times.size() != h_x.size() || times.size() != h_t.size())
        throw LengthError("huang estimate: series lengths differ");
    HuangAccumulator acc(pair, g);
    for (std::size_t k = 0; k < times.size(); ++k) acc.add(times[k], h[k], h_x[k], h_t[k]);
    return acc.terms();
}

// ---------------------------------------------------------------------------
// decay fits

struct DecayFit {
    double slope = 0.0;
    double intercept = 0.0;
    double residual = 0.0; ///< rms deviation in log space
};

/// Least squares line through (log(1+t), log y).
inline DecayFit fit_decay(const std::vector<double>& t, const std::vector<double>& y) {
    if (t.size() != y.size()) throw LengthError("fit_decay: series lengths differ");
    if (t.size() < 5) throw DomainError("fit_decay: need at least 5 samples");
    const std::size_t n = t.size();
    std::vector<double> X(n), Y(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(t[i] >= 1.0)) throw DomainError("fit_decay: times must be at least 1");
        if (!(y[i] > 0.0)) throw DomainError("fit_decay: values must be positive");
        X[i] = std::log1p(t[i]);
        Y[i] = std::log(y[i]);
    }
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += X[i];
        my += Y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (X[i] - mx) * (X[i] - mx);
        sxy += (X[i] - mx) * (Y[i] - my);
    }
    if (!(sxx > 0)) throw DomainError("fit_decay: times must not all coincide");
    DecayFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double ss = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double e = Y[i] - (f.intercept + f.slope * X[i]);
        ss += e * e;
    }
    f.residual = std::sqrt(ss / static_cast<double>(n));
    if (f.residual < 1e-15) f.residual = 0.0;
    return f;
}

// ---------------------------------------------------------------------------
// contact-wave envelope |V - v_+-| + |Theta - theta_+-| <= c1 delta exp(-c0 x^2 / (delta (1+t)))

struct EnvelopeFit {
    double c0 = 0.0;
    double c1 = 0.0;
};

template <CoefficientModel M>
double contact_deviation(const ContactWave<M>& c, double x, double t) {
    const ContactPoint p = c.eval(x, t);
    const double R = c.thermo().R, P = c.p();
    const double th = x < 0 ? c.profile().theta_minus : c.profile().theta_plus;
    return std::abs(p.V - R * th / P) + std::abs(p.Theta - th);
}

/// Fits the Gaussian rate from the tails at time t and halves it, then takes
/// the smallest c1 that bounds the deviation at every sample.
template <CoefficientModel M>
EnvelopeFit fit_contact_envelope(const ContactWave<M>& c, const std::vector<double>& xs, double t = 0.0) {
    const double d = c.thermo().delta();
    std::vector<double> X, Y;
    for (double x : xs) {
        const double dev = contact_deviation(c, x, t);
        if (dev > 1e-12 && std::abs(x) > 0.0) {
            X.push_back(x * x / (d * (1.0 + t)));
            Y.push_back(std::log(dev));
        }
    }
    EnvelopeFit f;
    if (X.size() >= 2) {
        double mx = 0, my = 0;
        for (std::size_t i = 0; i < X.size(); ++i) mx += X[i], my += Y[i];
        mx /= static_cast<double>(X.size());
        my /= static_cast<double>(X.size());
        double sxx = 0, sxy = 0;
        for (std::size_t i = 0; i < X.size(); ++i) sxx += (X[i] - mx) * (X[i] - mx), sxy += (X[i] - mx) * (Y[i] - my);
        f.c0 = sxx > 0 ? std::max(0.0, -0.5 * sxy / sxx) : 0.0;
    }
    for (double x : xs) {
        const double dev = contact_deviation(c, x, t);
        f.c1 = std::max(f.c1, dev / (d * std::exp(-f.c0 * x * x / (d * (1.0 + t)))));
    }
    f.c1 *= 1.0 + 1e-9;
    return f;
}

/// max over samples of deviation / envelope; <= 1 means the envelope holds.
template <CoefficientModel M>
double envelope_ratio(const ContactWave<M>& c, const EnvelopeFit& f, const std::vector<double>& xs, double t) {
    const double d = c.thermo().delta();
    double worst = 0.0;
    for (double x : xs) {
        const double env = f.c1 * d * std::exp(-f.c0 * x * x / (d * (1.0 + t)));
        const double dev = contact_deviation(c, x, t);
        if (env > 0) worst = std::max(worst, dev / env);
        else if (dev > 0) worst = std::numeric_limits<double>::infinity();
    }
    return worst;
}

// ---------------------------------------------------------------------------
// per-tick record

struct DiagnosticsRecord {
    double t = 0;
    double sup_phi = 0, sup_psi = 0, sup_zeta = 0;
    double l2_phi = 0, l2_psi = 0, l2_zeta = 0;
    double l2_phi_x = 0, l2_psi_x = 0, l2_zeta_x = 0;
    double energy = 0, dissipation = 0, capillary_energy = 0;
    double v_min = 0, v_max = 0, theta_min = 0, theta_max = 0;
    double mass_drift = 0;
    double r1_sup = 0, r2_sup = 0, gh_l1 = 0;

    static constexpr const char* header =
        "t,sup_phi,sup_psi,sup_zeta,l2_phi,l2_psi,l2_zeta,l2_phi_x,l2_psi_x,l2_zeta_x,energy,dissipation,"
        "capillary_energy,v_min,v_max,theta_min,theta_max,mass_drift,r1_sup,r2_sup,gh_l1";

    std::vector<double> values() const {
        return {t,        sup_phi,     sup_psi,          sup_zeta, l2_phi, l2_psi,    l2_zeta,
                l2_phi_x, l2_psi_x,    l2_zeta_x,        energy,   dissipation, capillary_energy, v_min,
                v_max,    theta_min,   theta_max,        mass_drift, r1_sup, r2_sup, gh_l1};
    }

    double sup_perturbation() const noexcept { return std::max({sup_phi, sup_psi, sup_zeta}); }
};

/// int (v - V) dx
inline double perturbation_mass(const State& s, const AnsatzFields& a, const Grid& g) {
    Field d(s.size());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = s.v[i] - a.V[i];
    return integrate(g, d);
}

template <CoefficientModel M>
DiagnosticsRecord make_record(const State& s, const CompositeWave<M>& w, const Grid& g, double initial_mass,
                              bool with_residuals = true) {
    const auto pts = sample_wave(w, g, s.t);
    const AnsatzFields a = to_fields(pts);
    const PerturbationFields p = perturbation(s, a);
    DiagnosticsRecord r;
    r.t = s.t;
    r.sup_phi = sup_norm(g, p.phi);
    r.sup_psi = sup_norm(g, p.psi);
    r.sup_zeta = sup_norm(g, p.zeta);
    r.l2_phi = l2_norm(g, p.phi);
    r.l2_psi = l2_norm(g, p.psi);
    r.l2_zeta = l2_norm(g, p.zeta);
    r.l2_phi_x = l2_norm(g, d1(g, p.phi));
    r.l2_psi_x = l2_norm(g, d1(g, p.psi));
    r.l2_zeta_x = l2_norm(g, d1(g, p.zeta));
    r.energy = basic_energy(s, a, w.thermo(), w.model(), g);
    r.dissipation = dissipation(s, a, w.model(), g);
    r.capillary_energy = capillary_energy(s, w.model(), g);
    const auto [vlo, vhi] = std::minmax_element(s.v.begin(), s.v.end());
    const auto [tlo, thi] = std::minmax_element(s.theta.begin(), s.theta.end());
    r.v_min = *vlo;
    r.v_max = *vhi;
    r.theta_min = *tlo;
    r.theta_max = *thi;
    r.mass_drift = perturbation_mass(s, a, g) - initial_mass;
    if (with_residuals) {
        const ContactResiduals cr = contact_residuals(w.contact(), g, s.t);
        r.r1_sup = sup_norm(g, cr.R1);
        r.r2_sup = sup_norm(g, cr.R2);
        Field G(g.size()), H(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) {
            G[i] = residual_G(w.thermo(), w.model(), pts[i]);
            H[i] = residual_H(w.thermo(), w.model(), pts[i]);
        }
        r.gh_l1 = l1_norm(g, G) + l1_norm(g, H);
    }
    return r;
}

// ---------------------------------------------------------------------------
// trajectory summary

struct DecaySummary {
    double initial_sup = 0, final_sup = 0, ratio = 0;
    double initial_sup_phi = 0, initial_sup_psi = 0, initial_sup_zeta = 0;
    double final_sup_phi = 0, final_sup_psi = 0, final_sup_zeta = 0;
    double v_min = 0, v_max = 0, theta_min = 0, theta_max = 0;
    double energy_ratio_max = 0; ///< max_t (E(t) + int_0^t D) / E(0)
    bool sup_monotone_after_transient = true;
    bool energy_monotone_after_transient = true;
};

inline DecaySummary decay_report(const std::vector<DiagnosticsRecord>& rec, double transient = 0.0) {
    if (rec.size() < 2) throw DomainError("decay_report: need at least two records");
    DecaySummary s;
    const auto& a = rec.front();
    const auto& b = rec.back();
    s.initial_sup = a.sup_perturbation();
    s.final_sup = b.sup_perturbation();
    s.ratio = s.initial_sup > 0 ? s.final_sup / s.initial_sup : 0.0;
    s.initial_sup_phi = a.sup_phi;
    s.initial_sup_psi = a.sup_psi;
    s.initial_sup_zeta = a.sup_zeta;
    s.final_sup_phi = b.sup_phi;
    s.final_sup_psi = b.sup_psi;
    s.final_sup_zeta = b.sup_zeta;
    s.v_min = s.theta_min = std::numeric_limits<double>::infinity();
    s.v_max = s.theta_max = -std::numeric_limits<double>::infinity();
    double diss = 0.0;
    for (std::size_t k = 0; k < rec.size(); ++k) {
        const auto& r = rec[k];
        s.v_min = std::min(s.v_min, r.v_min);
        s.v_max = std::max(s.v_max, r.v_max);
        s.theta_min = std::min(s.theta_min, r.theta_min);
        s.theta_max = std::max(s.theta_max, r.theta_max);
        if (k > 0) {
            diss += 0.5 * (r.t - rec[k - 1].t) * (r.dissipation + rec[k - 1].dissipation);
            if (rec[k - 1].t >= transient) {
                if (r.sup_perturbation() > rec[k - 1].sup_perturbation()) s.sup_monotone_after_transient = false;
                if (r.energy > rec[k - 1].energy) s.energy_monotone_after_transient = false;
            }
        }
        if (a.energy > 0) s.energy_ratio_max = std::max(s.energy_ratio_max, (r.energy + diss) / a.energy);
    }
    return s;
}

} // namespace nsk
