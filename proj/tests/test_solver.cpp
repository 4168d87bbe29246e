#include <catch_amalgamated.hpp>

#include <cmath>

#include "nsk/composite.hpp"
#include "nsk/diagnostics.hpp"
#include "nsk/solver.hpp"

using namespace nsk;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

const ThermoParams tp(1, 1.1, 1);

/// mu = alpha = 1, kappa = v theta.
struct LinearCapillarity {
    double mu(double, double) const { return 1.0; }
    double mu_v(double, double) const { return 0.0; }
    double mu_theta(double, double) const { return 0.0; }
    double kappa(double v, double th) const { return v * th; }
    double kappa_v(double, double th) const { return th; }
    double kappa_theta(double v, double) const { return v; }
    double kappa_thetatheta(double, double) const { return 0.0; }
    double kappa_vtheta(double, double) const { return 1.0; }
    double alpha(double, double) const { return 1.0; }
    double alpha_v(double, double) const { return 0.0; }
    double alpha_theta(double, double) const { return 0.0; }
};

/// kappa = 1 + v theta / 10 with kappa_theta replaced by sign * v / 10.
struct SignedKappa : LinearCapillarity {
    double sign;
    explicit SignedKappa(double s) : sign(s) {}
    double kappa(double v, double th) const { return 1.0 + 0.1 * v * th; }
    double kappa_v(double, double th) const { return 0.1 * th; }
    double kappa_theta(double v, double) const { return sign * 0.1 * v; }
};

State sampled(const Grid& g, double (*v)(double), double (*u)(double), double (*th)(double)) {
    State s{0.0, g.sample(v), g.sample(u), g.sample(th)};
    return s;
}

} // namespace

TEST_CASE("Korteweg stress") {
    const Grid g(4.0, 81);
    const auto m = PowerLawModel::default_model();
    for (double k : korteweg_stress(constant_state(g, 1.2, 0.3, 1.1), m, g)) CHECK(k == 0.0);

    // kappa = 1 exactly: K(0) = 5/2 (0.1)^2
    const auto one = PowerLawModel::constant(1.0, 1.0, 1.0);
    auto K_at_zero = [&](std::size_t n) {
        const Grid gg(M_PI, n);
        const State s = sampled(gg, [](double x) { return 1 + 0.1 * std::sin(x); }, [](double) { return 0.0; },
                                [](double) { return 1.0; });
        return korteweg_stress(s, one, gg)[(n - 1) / 2];
    };
    CHECK_THAT(K_at_zero(201), WithinAbs(0.025, 1e-4));
    CHECK(std::abs(K_at_zero(401) - 0.025) < std::abs(K_at_zero(201) - 0.025) / 3.5);

    // flipping the sign of kappa_theta flips only the third term
    const State s = sampled(g, [](double x) { return 1 + 0.1 * std::sin(x); }, [](double) { return 0.0; },
                            [](double x) { return 1 + 0.05 * std::cos(x); });
    const Field Kp = korteweg_stress(s, SignedKappa{1.0}, g), Km = korteweg_stress(s, SignedKappa{-1.0}, g);
    const Field K0 = korteweg_stress(s, SignedKappa{0.0}, g);
    for (std::size_t i = 0; i < g.size(); ++i) {
        CHECK_THAT(Kp[i] + Km[i], WithinAbs(2.0 * K0[i], 1e-14));
        CHECK_THAT(Kp[i] - K0[i], WithinAbs(K0[i] - Km[i], 1e-14));
    }
}

TEST_CASE("capillary work") {
    const Grid g(M_PI, 201);
    const State s = sampled(g, [](double x) { return 1 + 0.1 * std::sin(x); }, [](double x) { return 0.1 * std::cos(x); },
                            [](double) { return 1.0; });
    for (double f : capillary_work(s, PowerLawModel::constant(1, 1, 1), g)) CHECK(f == 0.0);
    State flat_u = s;
    flat_u.u.assign(g.size(), 0.4);
    for (double f : capillary_work(flat_u, LinearCapillarity{}, g)) CHECK(f == 0.0);

    // manufactured oracle with analytic derivatives
    auto err = [&](std::size_t n) {
        const Grid gg(M_PI, n);
        const State ss = sampled(gg, [](double x) { return 1 + 0.1 * std::sin(x); },
                                 [](double x) { return 0.1 * std::cos(x); }, [](double) { return 1.0; });
        const Field F = capillary_work(ss, LinearCapillarity{}, gg);
        double e = 0;
        for (std::size_t i = 1; i + 1 < n; ++i) {
            const double x = gg.x(i);
            const double v = 1 + 0.1 * std::sin(x), vx = 0.1 * std::cos(x);
            const double ux = -0.1 * std::sin(x), uxx = -0.1 * std::cos(x);
            const double exact = v * vx * uxx / std::pow(v, 5) + (v * 1.0 - v) * ux * vx * vx / (2 * std::pow(v, 6));
            e = std::max(e, std::abs(F[i] - exact));
        }
        return e;
    };
    const double e1 = err(101), e2 = err(201);
    CHECK(e1 < 1e-3);
    CHECK(std::log2(e1 / e2) > 1.8);
}

TEST_CASE("constant state is a fixed point") {
    const Grid g(20.0, 400);
    SolverSettings set;
    set.t_final = 1.0;
    set.cfl = 0.5;
    Solver<PowerLawModel> solver(tp, PowerLawModel::default_model(), g, set);
    Rates r;
    const State s0 = constant_state(g, 1.3, -0.2, 0.9);
    solver.rhs(s0, r);
    for (std::size_t i = 0; i < g.size(); ++i) {
        CHECK(r.v[i] == 0.0);
        CHECK(r.u[i] == 0.0);
        CHECK(r.theta[i] == 0.0);
    }
    const State s = solver.run(s0);
    CHECK(s.t == 1.0);
    double d = 0;
    for (std::size_t i = 0; i < g.size(); ++i)
        d = std::max({d, std::abs(s.v[i] - 1.3), std::abs(s.u[i] + 0.2), std::abs(s.theta[i] - 0.9)});
    CHECK(d < 1e-13);
}

TEST_CASE("inviscid test mode reduces to the Euler energy balance") {
    PowerLawModel m = PowerLawModel::constant(0, 0, 0);
    m.test_mode = true;
    const Grid g(M_PI, 101);
    Solver<PowerLawModel> solver(tp, m, g, SolverSettings{});
    const State s = sampled(g, [](double x) { return 1 + 0.2 * std::sin(x); }, [](double x) { return 0.3 * std::cos(x); },
                            [](double x) { return 1 + 0.1 * std::sin(2 * x); });
    Rates r;
    solver.rhs(s, r);
    const Field ux = d1(g, s.u);
    for (std::size_t i = 1; i + 1 < g.size(); ++i) {
        const double p = tp.R * s.theta[i] / s.v[i];
        CHECK_THAT(r.theta[i], WithinAbs(-p * ux[i] / tp.cv(), 1e-14));
        CHECK_THAT(r.v[i], WithinAbs(ux[i], 1e-15));
    }
}

TEST_CASE("contact ansatz substituted into the right-hand side") {
    // kappa = 0 so the momentum defect is exactly R1 and the energy defect R2 / C_v
    PowerLawModel m = PowerLawModel::default_model();
    m.kappa0 = 0.0;
    m.test_mode = true;
    EndStates e;
    e.v_minus = 1.0;
    e.theta_minus = 1.0;
    e.v_plus = 1.05;
    e.theta_plus = 1.05;
    const CompositeWave<PowerLawModel> w(tp, m, e, WaveMode::contact_only);
    auto defect = [&](std::size_t n) {
        const Grid g(6.0, n);
        const double t = 0.5;
        const AnsatzFields a = sample_ansatz(w, g, t);
        State s{t, a.V, a.U, a.Theta};
        Solver<PowerLawModel> solver(tp, m, g, SolverSettings{});
        Rates r;
        solver.rhs(s, r);
        const ContactResiduals cr = contact_residuals(w.contact(), g, t);
        double eu = 0, et = 0;
        for (std::size_t i = 1; i + 1 < n; ++i) {
            const ContactPoint p = w.contact().eval(g.x(i), t);
            eu = std::max(eu, std::abs((p.U_t - r.u[i]) - cr.R1[i]));
            et = std::max(et, std::abs((p.Theta_t - r.theta[i]) - cr.R2[i] / tp.cv()));
        }
        return std::pair{eu, et};
    };
    const auto [u1, t1] = defect(241);
    const auto [u2, t2] = defect(481);
    CHECK(u1 < 1e-3);
    CHECK(t1 < 1e-3);
    CHECK(std::log2(u1 / u2) > 1.7);
    CHECK(std::log2(t1 / t2) > 1.7);
}

TEST_CASE("mass drift with a compact perturbation") {
    const auto m = PowerLawModel::default_model();
    EndStates e;
    e.v_minus = 1.0;
    e.theta_minus = 1.0;
    e.v_plus = 1.05;
    e.theta_plus = 1.05;
    const CompositeWave<PowerLawModel> w(tp, m, e, WaveMode::contact_only);
    const Grid g(20.0, 401);
    State s{0.0, {}, {}, {}};
    const AnsatzFields a = sample_ansatz(w, g, 0.0);
    s.v = a.V;
    s.u = a.U;
    s.theta = a.Theta;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double b = std::exp(-g.x(i) * g.x(i));
        s.v[i] += 0.05 * b;
        s.u[i] += 0.05 * b;
        s.theta[i] += 0.05 * b;
    }
    SolverSettings set;
    set.cfl = 0.5;
    set.t_final = 1.0;
    Solver<PowerLawModel> solver(tp, m, g, set, ansatz_boundary(w, g.half_width()));
    const double m0 = perturbation_mass(s, a, g);
    double worst = 0;
    solver.run(s, [&](const State& st) {
        worst = std::max(worst, std::abs(perturbation_mass(st, sample_ansatz(w, g, st.t), g) - m0));
    });
    CHECK(worst < 1e-8);
}

TEST_CASE("stepping is deterministic and lands on t_end") {
    const auto m = PowerLawModel::default_model();
    const Grid g(10.0, 201);
    SolverSettings set;
    set.cfl = 0.5;
    set.t_final = 0.3;
    set.cadence = 7;
    auto once = [&] {
        Solver<PowerLawModel> solver(tp, m, g, set);
        State s = constant_state(g, 1.0, 0.0, 1.0);
        for (std::size_t i = 0; i < g.size(); ++i) s.u[i] += 0.1 * std::exp(-g.x(i) * g.x(i));
        std::vector<double> times;
        s = solver.run(s, [&](const State& st) { times.push_back(st.t); });
        CHECK(times.front() == 0.0);
        CHECK(times.back() == 0.3);
        CHECK(solver.steps_taken() > 0);
        return s;
    };
    const State a = once(), b = once();
    CHECK(a.t == 0.3);
    CHECK(a.v == b.v);
    CHECK(a.u == b.u);
    CHECK(a.theta == b.theta);
}

TEST_CASE("leaving the admissible box aborts") {
    const Grid g(10.0, 201);
    SolverSettings set;
    set.cfl = 0.5;
    set.t_final = 2.0;
    set.abort_box.v_max = 1.01;
    Solver<PowerLawModel> solver(tp, PowerLawModel::default_model(), g, set);
    State s = constant_state(g, 1.0, 0.0, 1.0);
    for (std::size_t i = 0; i < g.size(); ++i) s.u[i] += 0.2 * std::tanh(g.x(i)) * std::exp(-g.x(i) * g.x(i));
    CHECK_THROWS_AS(solver.run(s), PositivityError);
}

TEST_CASE("retry ladder") {
    const Grid g(10.0, 201);
    SolverSettings set;
    set.max_halvings = 3;
    Solver<PowerLawModel> solver(tp, PowerLawModel::default_model(), g, set);
    State s = constant_state(g, 1.0, 0.0, 1.0);
    for (std::size_t i = 0; i < g.size(); ++i) s.u[i] += 0.5 * std::sin(3 * g.x(i));
    const State before = s;
    // far too large a step: every rung fails and the state is untouched
    CHECK_THROWS_AS(solver.step(s, 50.0), BlowUpError);
    CHECK(solver.halvings() == 4);
    CHECK(s.v == before.v);
    // a stable step goes through without halving
    State t = before;
    solver.step(t, solver.stable_dt(t));
    CHECK(solver.halvings() == 4);
    CHECK(t.t > 0.0);
}

TEST_CASE("a non-positive heat capacity aborts instead of retrying") {
    PowerLawModel m = PowerLawModel::default_model();
    m.eps = -50.0; // kappa_thetatheta > 0
    const Grid g(5.0, 101);
    Solver<PowerLawModel> solver(tp, m, g, SolverSettings{});
    State s = constant_state(g, 1.0, 0.0, 1.0);
    for (std::size_t i = 0; i < g.size(); ++i) s.v[i] += 0.5 * std::sin(4 * g.x(i));
    CHECK_THROWS_AS(solver.step(s, 1e-6), ModelViolation);
    CHECK(solver.halvings() == 0);
}

TEST_CASE("settings validation") {
    SolverSettings s;
    s.cfl = 0.0;
    CHECK_THROWS_AS(s.validate(), ValidationError);
    s = {};
    s.cadence = 0;
    CHECK_THROWS_AS(s.validate(), ValidationError);
    const Grid g(1.0, 11);
    CHECK_THROWS_AS(korteweg_stress(State{0, Field(10), Field(10), Field(10)}, PowerLawModel{}, g), LengthError);
}
