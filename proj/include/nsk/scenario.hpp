#pragma once

// Scenario orchestration and file output:
//   diagnostics.csv     one DiagnosticsRecord per cadence tick
//   profile_tNNN.csv    x, v, u, theta, V, U, Theta at each snapshot time
//   wave_tNNN.csv       x, V, U, Theta, V_x, U_x, Theta_x of the ansatz
//   meta.txt            resolved configuration, outcome and fitted constants

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "nsk/composite.hpp"
#include "nsk/config.hpp"
#include "nsk/diagnostics.hpp"
#include "nsk/error.hpp"
#include "nsk/grid.hpp"
#include "nsk/solver.hpp"

namespace nsk {

namespace detail {

inline std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline void write_row(std::ostream& os, const std::vector<double>& row) {
    for (std::size_t k = 0; k < row.size(); ++k) {
        if (!std::isfinite(row[k])) throw BlowUpError("non-finite value in output row");
        if (k) os << ',';
        os << fmt(row[k]);
    }
    os << '\n';
}

inline std::string snapshot_name(const char* stem, double t) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s_t%03ld.csv", stem, std::lround(t));
    return buf;
}

inline std::ofstream open_out(const std::filesystem::path& p) {
    std::ofstream os(p);
    if (!os) throw Error("cannot open " + p.string() + " for writing");
    return os;
}

/// Ordered key = value lines appended after the resolved configuration.
class Meta {
public:
    void add(const std::string& k, const std::string& v) { lines_.emplace_back(k, v); }
    void add(const std::string& k, double v) { add(k, fmt(v)); }
    void write(const std::filesystem::path& p, const RunConfig& c) const {
        auto os = open_out(p);
        os << resolved_text(c);
        for (const auto& [k, v] : lines_) os << k << " = " << v << '\n';
    }

private:
    std::vector<std::pair<std::string, std::string>> lines_;
};

inline std::optional<DecayFit> try_fit(const std::vector<double>& t, const std::vector<double>& y) {
    std::vector<double> ts, ys;
    for (std::size_t i = 0; i < t.size(); ++i)
        if (t[i] >= 1.0 && y[i] > 0.0) {
            ts.push_back(t[i]);
            ys.push_back(y[i]);
        }
    if (ts.size() < 5) return std::nullopt;
    try {
        return fit_decay(ts, ys);
    } catch (const Error&) {
        return std::nullopt;
    }
}

} // namespace detail

/// Ansatz at t = 0 plus the configured perturbation. The zeta amplitude is
/// given relative to sqrt(gamma - 1).
template <class Wave>
State initial_state(const RunConfig& c, const Wave& w, const Grid& g) {
    State s;
    s.t = 0.0;
    s.v.resize(g.size());
    s.u.resize(g.size());
    s.theta.resize(g.size());
    const double zs = std::sqrt(c.thermo.delta());
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double x = g.x(i);
        const WavePoint p = w.eval(x, 0.0);
        const double b = c.perturbation.shape_at(x);
        s.v[i] = p.V + c.perturbation.amp_phi * b;
        s.u[i] = p.U + c.perturbation.amp_psi * b;
        s.theta[i] = p.Theta + c.perturbation.amp_zeta * zs * b;
    }
    // boundary nodes carry the ansatz exactly
    const WavePoint a = w.eval(-g.half_width(), 0.0), z = w.eval(g.half_width(), 0.0);
    s.v.front() = a.V;
    s.u.front() = a.U;
    s.theta.front() = a.Theta;
    s.v.back() = z.V;
    s.u.back() = z.U;
    s.theta.back() = z.Theta;
    for (std::size_t i = 0; i < g.size(); ++i)
        if (!(s.v[i] > 0 && s.theta[i] > 0))
            throw ValidationError("perturbation makes v or theta nonpositive at x = " + std::to_string(g.x(i)));
    return s;
}

inline CompositeWave<PowerLawModel> build_wave(const RunConfig& c) {
    return CompositeWave<PowerLawModel>(c.thermo, c.model, c.ends, c.wave_mode(), c.profile);
}

struct RunResult {
    int exit_code = 0;
    std::string status = "ok";
    std::string reason;
    std::vector<DiagnosticsRecord> records;
    std::optional<DecaySummary> summary;
    std::optional<DecayFit> r1_fit, gh_fit, sup_fit;
    std::size_t steps = 0, halvings = 0;
    double observed_order = 0.0;
    std::vector<double> level_errors;
    bool checks_passed = true;
    std::vector<std::string> report; ///< profile validation lines
};

/// Evolution scenarios (contact, composite, rarefaction).
inline RunResult run_evolution(const RunConfig& c, const std::filesystem::path& out) {
    std::filesystem::create_directories(out);
    RunResult res;
    detail::Meta meta;
    const auto wave = build_wave(c);
    const Grid g(c.L, c.N);
    const MiddleStates& ms = wave.middle();
    meta.add("result.mode", to_string(wave.mode()));
    meta.add("result.p_mid", ms.p_mid);
    meta.add("result.u_mid", ms.u_mid);
    meta.add("result.v_m_minus", ms.v_m_minus);
    meta.add("result.theta_m_minus", ms.theta_m_minus);
    meta.add("result.v_m_plus", ms.v_m_plus);
    meta.add("result.theta_m_plus", ms.theta_m_plus);
    meta.add("result.profile_half_width", wave.contact().profile().half_width);
    meta.add("result.profile_ode_residual", wave.contact().profile().ode_residual);
    {
        // structural assumptions, sampled over the range the waves span
        const auto [vlo, vhi] = std::minmax({c.ends.v_minus, c.ends.v_plus, ms.v_m_minus, ms.v_m_plus});
        const auto [tlo, thi] = std::minmax({c.ends.theta_minus, c.ends.theta_plus, ms.theta_m_minus, ms.theta_m_plus});
        const AssumptionReport ar = check_assumptions(c.thermo, c.model, {0.5 * vlo, 2.0 * vhi}, {0.5 * tlo, 2.0 * thi}, 32);
        meta.add("assumptions.kappa_theta_sup", ar.kappa_theta_sup);
        meta.add("assumptions.kappa_theta_small", ar.kappa_theta_small(c.kappa_theta_threshold) ? "yes" : "no");
        meta.add("assumptions.coupling_g_zero", ar.coupling_g_ok ? "yes" : "no");
        meta.add("assumptions.coupling_f_nonpositive", ar.coupling_f_ok ? "yes" : "no");
        meta.add("assumptions.mu_over_alpha_sup", ar.mu_over_alpha_sup);
        meta.add("assumptions.violations", std::to_string(ar.violations.size()));
    }

    auto csv = detail::open_out(out / "diagnostics.csv");
    csv << DiagnosticsRecord::header << '\n';

    Solver<PowerLawModel> solver(c.thermo, c.model, g, c.solver, ansatz_boundary(wave, c.L));
    State s = initial_state(c, wave, g);
    const double mass0 = perturbation_mass(s, sample_ansatz(wave, g, 0.0), g);

    auto emit = [&](const State& st) {
        if (!res.records.empty() && st.t <= res.records.back().t) return;
        const DiagnosticsRecord r = make_record(st, wave, g, mass0, c.residuals);
        detail::write_row(csv, r.values());
        res.records.push_back(r);
    };
    auto snapshot = [&](const State& st) {
        const AnsatzFields a = sample_ansatz(wave, g, st.t);
        auto os = detail::open_out(out / detail::snapshot_name("profile", st.t));
        os << "x,v,u,theta,V,U,Theta\n";
        for (std::size_t i = 0; i < g.size(); ++i)
            detail::write_row(os, {g.x(i), st.v[i], st.u[i], st.theta[i], a.V[i], a.U[i], a.Theta[i]});
        auto ws = detail::open_out(out / detail::snapshot_name("wave", st.t));
        ws << "x,V,U,Theta,V_x,U_x,Theta_x\n";
        const auto pts = sample_wave(wave, g, st.t);
        for (std::size_t i = 0; i < pts.size(); ++i) {
            const WavePoint& p = pts[i];
            detail::write_row(ws, {g.x(i), p.V, p.U, p.Theta, p.V_x, p.U_x, p.Theta_x});
        }
    };

    std::vector<double> targets = c.snapshots;
    targets.push_back(c.solver.t_final);
    try {
        emit(s);
        if (!c.snapshots.empty() && c.snapshots.front() == 0.0) snapshot(s);
        for (double te : targets) {
            if (te <= s.t) continue;
            solver.advance_to(s, te, emit);
            if (std::find(c.snapshots.begin(), c.snapshots.end(), te) != c.snapshots.end()) snapshot(s);
        }
    } catch (const Error& e) {
        res.exit_code = 2;
        res.status = "aborted";
        res.reason = e.what();
        csv.flush();
    }
    res.steps = solver.steps_taken();
    res.halvings = solver.halvings();

    meta.add("result.status", res.status);
    if (!res.reason.empty()) meta.add("result.abort_reason", res.reason);
    meta.add("result.final_time", s.t);
    meta.add("result.steps", std::to_string(res.steps));
    meta.add("result.halvings", std::to_string(res.halvings));
    meta.add("result.records", std::to_string(res.records.size()));
    if (res.records.size() >= 2) {
        res.summary = decay_report(res.records);
        const auto& d = *res.summary;
        meta.add("decay.initial_sup", d.initial_sup);
        meta.add("decay.final_sup", d.final_sup);
        meta.add("decay.sup_ratio", d.ratio);
        meta.add("decay.energy_ratio_max", d.energy_ratio_max);
        meta.add("bounds.v_min", d.v_min);
        meta.add("bounds.v_max", d.v_max);
        meta.add("bounds.theta_min", d.theta_min);
        meta.add("bounds.theta_max", d.theta_max);
        std::vector<double> t, r1, gh, sup;
        for (const auto& r : res.records) {
            t.push_back(r.t);
            r1.push_back(r.r1_sup);
            gh.push_back(r.gh_l1);
            sup.push_back(r.sup_perturbation());
        }
        res.r1_fit = detail::try_fit(t, r1);
        res.gh_fit = detail::try_fit(t, gh);
        res.sup_fit = detail::try_fit(t, sup);
        auto put = [&](const char* name, const std::optional<DecayFit>& f) {
            if (!f) return;
            meta.add(std::string("fit.") + name + "_slope", f->slope);
            meta.add(std::string("fit.") + name + "_intercept", f->intercept);
            meta.add(std::string("fit.") + name + "_residual", f->residual);
        };
        put("r1_sup", res.r1_fit);
        put("gh_l1", res.gh_fit);
        put("sup_perturbation", res.sup_fit);
    }
    meta.write(out / "meta.txt", c);
    return res;
}

/// Same initial data on N, 2N, 4N, ... points; differences of successive
/// levels are measured at the coarse nodes by cubic interpolation.
inline RunResult run_convergence(const RunConfig& c, const std::filesystem::path& out) {
    std::filesystem::create_directories(out);
    RunResult res;
    detail::Meta meta;
    const auto wave = build_wave(c);
    std::vector<Grid> grids;
    std::vector<State> finals;
    try {
        for (std::size_t k = 0; k < c.convergence_levels; ++k) {
            const Grid g(c.L, c.N << k);
            Solver<PowerLawModel> solver(c.thermo, c.model, g, c.solver, ansatz_boundary(wave, c.L));
            State s = solver.run(initial_state(c, wave, g));
            res.steps += solver.steps_taken();
            res.halvings += solver.halvings();
            grids.push_back(g);
            finals.push_back(std::move(s));
        }
    } catch (const Error& e) {
        res.exit_code = 2;
        res.status = "aborted";
        res.reason = e.what();
    }
    auto csv = detail::open_out(out / "convergence.csv");
    csv << "N,dx,difference_to_next\n";
    if (res.exit_code == 0) {
        const Grid& g0 = grids.front();
        // skip a margin near the clamped ends
        const double margin = 0.05 * c.L;
        for (std::size_t k = 0; k + 1 < finals.size(); ++k) {
            double ss = 0.0;
            for (std::size_t i = 0; i < g0.size(); ++i) {
                const double x = g0.x(i);
                if (std::abs(x) > c.L - margin) continue;
                const double dv = interpolate(grids[k], finals[k].v, x) - interpolate(grids[k + 1], finals[k + 1].v, x);
                const double du = interpolate(grids[k], finals[k].u, x) - interpolate(grids[k + 1], finals[k + 1].u, x);
                const double dt = interpolate(grids[k], finals[k].theta, x) -
                                  interpolate(grids[k + 1], finals[k + 1].theta, x);
                ss += dv * dv + du * du + dt * dt;
            }
            res.level_errors.push_back(std::sqrt(ss * g0.dx()));
            detail::write_row(csv, {static_cast<double>(grids[k].size()), grids[k].dx(), res.level_errors.back()});
        }
        const std::size_t m = res.level_errors.size();
        res.observed_order = std::log2(res.level_errors[m - 2] / res.level_errors[m - 1]);
        meta.add("result.observed_order", res.observed_order);
        for (std::size_t k = 0; k < m; ++k)
            meta.add("result.difference_" + std::to_string(k), res.level_errors[k]);
    }
    meta.add("result.status", res.status);
    if (!res.reason.empty()) meta.add("result.abort_reason", res.reason);
    meta.add("result.steps", std::to_string(res.steps));
    meta.write(out / "meta.txt", c);
    return res;
}

/// Checks on the self-similar profile and the contact wave built from it.
inline RunResult run_profile_validation(const RunConfig& c, const std::filesystem::path& out) {
    std::filesystem::create_directories(out);
    RunResult res;
    detail::Meta meta;
    auto check = [&](const std::string& name, double value, double limit, bool ok) {
        res.report.push_back(name + " = " + detail::fmt(value) + " (limit " + detail::fmt(limit) + ") " +
                             (ok ? "ok" : "FAILED"));
        meta.add("check." + name, detail::fmt(value) + (ok ? " ok" : " FAILED"));
        res.checks_passed = res.checks_passed && ok;
    };
    try {
        const auto wave = build_wave(c);
        const auto& cw = wave.contact();
        const auto& P = cw.profile();
        check("ode_residual", P.ode_residual, 1e-8, P.ode_residual < 1e-8);
        const double be = std::max(std::abs(P.Theta.front() - P.theta_minus), std::abs(P.Theta.back() - P.theta_plus));
        check("boundary_error", be, 1e-8, be < 1e-8);
        bool mono = true;
        const double sgn = P.theta_plus >= P.theta_minus ? 1.0 : -1.0;
        for (std::size_t i = 1; i < P.Theta.size(); ++i) mono = mono && sgn * (P.Theta[i] - P.Theta[i - 1]) >= 0.0;
        check("monotone", mono ? 1.0 : 0.0, 1.0, mono);
        if (c.model.alpha_exp == 1.0) {
            const double a = P.a_coef * c.model.alpha0;
            double err = 0.0;
            for (std::size_t i = 0; i < P.xi.size(); ++i) {
                const double o = P.theta_minus +
                                 0.5 * (P.theta_plus - P.theta_minus) * (1.0 + std::erf(P.xi[i] / (2.0 * std::sqrt(a))));
                err = std::max(err, std::abs(o - P.Theta[i]));
            }
            check("erf_oracle_error", err, 1e-6, err < 1e-6);
        }
        double mass = 0.0, pres = 0.0;
        const double W = P.half_width * std::sqrt(101.0);
        for (double t : {0.0, 1.0, 10.0, 100.0})
            for (int j = 0; j <= 400; ++j) {
                const ContactPoint p = cw.eval(-W + 2.0 * W * j / 400.0, t);
                mass = std::max(mass, std::abs(p.V_t - p.U_x));
                pres = std::max(pres, std::abs(c.thermo.R * p.Theta / p.V - cw.p()));
            }
        check("mass_identity", mass, 1e-8, mass < 1e-8);
        check("pressure_identity", pres, 1e-12 * cw.p(), pres <= 1e-12 * cw.p());

        std::vector<double> xs;
        for (int j = 0; j <= 800; ++j) xs.push_back(-W + 2.0 * W * j / 800.0);
        const EnvelopeFit ef = fit_contact_envelope(cw, xs, 0.0);
        meta.add("fit.envelope_c0", ef.c0);
        meta.add("fit.envelope_c1", ef.c1);
        for (double t : {1.0, 10.0, 100.0}) {
            const double r = envelope_ratio(cw, ef, xs, t);
            check("envelope_ratio_t" + std::to_string(static_cast<int>(t)), r, 1.0, r <= 1.0);
        }
        if (!cw.degenerate()) {
            std::vector<double> ts, r1;
            const Grid g(W, 2001);
            for (int k = 0; k <= 20; ++k) {
                const double t = std::pow(100.0, k / 20.0);
                ts.push_back(t);
                r1.push_back(sup_norm(g, contact_residuals(cw, g, t).R1));
            }
            const DecayFit f = fit_decay(ts, r1);
            meta.add("fit.r1_sup_slope", f.slope);
            check("r1_slope", f.slope, -1.5, f.slope >= -1.8 && f.slope <= -1.2);
        }
    } catch (const Error& e) {
        res.status = "aborted";
        res.reason = e.what();
        res.exit_code = 2;
        res.checks_passed = false;
    }
    {
        auto os = detail::open_out(out / "profile_validation.txt");
        for (const auto& line : res.report) os << line << '\n';
    }
    if (res.exit_code == 0 && !res.checks_passed) {
        res.exit_code = 3;
        res.status = "checks-failed";
    }
    meta.add("result.status", res.status);
    if (!res.reason.empty()) meta.add("result.abort_reason", res.reason);
    meta.write(out / "meta.txt", c);
    return res;
}

inline RunResult run_scenario(const RunConfig& c, const std::filesystem::path& out) {
    switch (c.kind) {
    case ScenarioKind::convergence: return run_convergence(c, out);
    case ScenarioKind::profile_validation: return run_profile_validation(c, out);
    default: return run_evolution(c, out);
    }
}

inline RunResult run_scenario(const RunConfig& c) { return run_scenario(c, c.out_dir); }

} // namespace nsk
