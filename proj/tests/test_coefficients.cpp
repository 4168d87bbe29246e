#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "nsk/coefficients.hpp"

using namespace nsk;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

PowerLawModel odd_model() {
    PowerLawModel m;
    m.name = "power-law";
    m.mu0 = 1.3;
    m.mu_exp = -0.4;
    m.kappa0 = 0.2;
    m.kappa_exp = 2.5;
    m.K1 = 2.0;
    m.eps = 0.03;
    m.alpha0 = 0.7;
    m.alpha_exp = 1.6;
    return m;
}

template <class F>
double central(F&& f, double x, double h) {
    return (f(x + h) - f(x - h)) / (2 * h);
}

} // namespace

TEST_CASE("effective heat capacity") {
    CHECK(effective_heat_capacity(2.5, 1.0, 1.0, 0.0, -2.0) == 2.5);
    CHECK_THAT(effective_heat_capacity(2.5, 1.0, 1.0, 1.0, -2.0), WithinAbs(3.5, 1e-15));
    CHECK_THROWS_AS(effective_heat_capacity(1.0, 1.0, 1.0, 2.0, 4.0), ModelViolation);

    const ThermoParams tp(1, 1.1, 1);
    const auto m = PowerLawModel::default_model();
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> uv(0.3, 3), ut(0.5, 2), ux(-5, 5);
    for (int i = 0; i < 200; ++i)
        CHECK(effective_heat_capacity(tp, m, uv(rng), ut(rng), ux(rng)) >= tp.cv());
}

TEST_CASE("analytic partials match finite differences") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> uv(0.4, 3), ut(0.5, 2.5);
    for (const PowerLawModel& m : {PowerLawModel::default_model(), odd_model()}) {
        for (int i = 0; i < 50; ++i) {
            const double v = uv(rng), th = ut(rng), h = 1e-6;
            CHECK_THAT(m.mu_v(v, th), WithinAbs(central([&](double x) { return m.mu(x, th); }, v, h), 1e-7));
            CHECK_THAT(m.mu_theta(v, th), WithinAbs(central([&](double y) { return m.mu(v, y); }, th, h), 1e-7));
            CHECK_THAT(m.kappa_v(v, th), WithinAbs(central([&](double x) { return m.kappa(x, th); }, v, h), 1e-7));
            CHECK_THAT(m.kappa_theta(v, th),
                       WithinAbs(central([&](double y) { return m.kappa(v, y); }, th, h), 1e-7));
            CHECK_THAT(m.kappa_thetatheta(v, th),
                       WithinAbs(central([&](double y) { return m.kappa_theta(v, y); }, th, h), 1e-7));
            CHECK_THAT(m.kappa_vtheta(v, th),
                       WithinAbs(central([&](double x) { return m.kappa_theta(x, th); }, v, h), 1e-7));
            CHECK_THAT(m.alpha_theta(v, th),
                       WithinAbs(central([&](double y) { return m.alpha(v, y); }, th, h), 1e-7));
            CHECK(m.alpha_v(v, th) == 0.0);

            const CoeffValues c = m.eval(v, th);
            CHECK_THAT(c.mu, WithinRel(m.mu(v, th), 1e-14));
            CHECK_THAT(c.kappa, WithinRel(m.kappa(v, th), 1e-14));
            CHECK_THAT(c.kappa_v, WithinAbs(m.kappa_v(v, th), 1e-14));
            CHECK_THAT(c.kappa_theta, WithinAbs(m.kappa_theta(v, th), 1e-14));
            CHECK_THAT(c.kappa_thetatheta, WithinAbs(m.kappa_thetatheta(v, th), 1e-14));
            CHECK_THAT(c.kappa_vtheta, WithinAbs(m.kappa_vtheta(v, th), 1e-14));
            CHECK_THAT(c.alpha, WithinRel(m.alpha(v, th), 1e-14));
        }
    }
}

TEST_CASE("model validation") {
    auto m = PowerLawModel::default_model();
    CHECK_NOTHROW(m.validate(2.0));
    m.K1 = 0.04;
    CHECK_THROWS_AS(m.validate(2.0), ModelViolation);
    auto z = PowerLawModel::constant(0.0, 1.0, 1.0);
    CHECK_THROWS_AS(z.validate(1.0), ModelViolation);
    z.test_mode = true;
    CHECK_NOTHROW(z.validate(1.0));
}

TEST_CASE("coupling g vanishes for the default family") {
    const auto m = PowerLawModel::default_model(1.7, 0.3, 0.9, 0.02, 1.5);
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> uv(0.2, 5), ut(0.5, 3);
    for (int i = 0; i < 100; ++i) {
        const double v = uv(rng), th = ut(rng);
        CHECK(std::abs(coupling_g(m, v, th)) <= 1e-12 * 3 * m.kappa(v, th) * m.mu(v, th));
    }
    // a hand value away from the family: mu = 1, kappa = 1 constant -> g = 3
    CHECK_THAT(coupling_g(PowerLawModel::constant(1, 1, 1), 1.3, 1.0), WithinAbs(3.0, 1e-14));
}

TEST_CASE("assumption report for the default family") {
    const ThermoParams tp(1, 1.1, 1);
    const auto r = check_assumptions(tp, PowerLawModel::default_model(), {0.2, 5.0}, {0.5, 2.2}, 24);
    CHECK(r.coefficients_positive);
    CHECK(r.coupling_g_ok);
    CHECK(r.g_rel_max <= 1e-12);
    CHECK(r.kappa_tt_strict);
    CHECK(std::isfinite(r.mu_over_alpha_sup));
    CHECK_THAT(r.mu_over_alpha_sup, WithinRel(2.0, 1e-12)); // mu0 / (alpha0 theta_lo)
    // |kappa_theta| = 2 eps theta kappa0 v^3 peaks at the far corner of the box
    CHECK_THAT(r.kappa_theta_sup, WithinRel(2 * 0.01 * 2.2 * 0.1 * 125.0, 1e-12));
    CHECK(r.kappa_theta_small(0.6));
    CHECK_FALSE(r.kappa_theta_small(0.5));
    CHECK(r.growth_b1);
    CHECK(r.violations.empty());
}

TEST_CASE("constant coefficients with eps = 0 are flagged as only non-strict") {
    const ThermoParams tp(1, 1.4, 1);
    const auto r = check_assumptions(tp, PowerLawModel::constant(1, 1, 1), {0.5, 2.0}, {0.5, 2.0}, 12);
    CHECK(r.kappa_theta_sup == 0.0);
    CHECK(r.kappa_theta_small(1e-300));
    CHECK(r.kappa_tt_nonpositive);
    CHECK_FALSE(r.kappa_tt_strict);
    REQUIRE_FALSE(r.violations.empty());
    CHECK(r.violations.front().find("non-strictly") != std::string::npos);
}

TEST_CASE("viscosity decaying like 1/v violates the viscosity growth condition") {
    const ThermoParams tp(1, 1.4, 1);
    auto m = PowerLawModel::default_model();
    m.mu_exp = -1.0;
    const auto r = check_assumptions(tp, m, {0.1, 10.0}, {0.5, 2.0}, 12);
    CHECK_THAT(r.exp_b, WithinAbs(1.0, 1e-9));
    CHECK_FALSE(r.growth_b1);
    // kappa_1 ~ v^3 everywhere, so c = d = -3 and the capillarity branch fails too
    CHECK_FALSE(r.growth_b2);
    CHECK(r.violations.size() >= 1);
}

TEST_CASE("assumption checker rejects bad ranges") {
    const ThermoParams tp{};
    const auto m = PowerLawModel::default_model();
    CHECK_THROWS_AS(check_assumptions(tp, m, {2.0, 1.0}, {0.5, 1.0}, 8), DomainError);
    CHECK_THROWS_AS(check_assumptions(tp, m, {0.5, 1.0}, {0.5, 1.0}, 1), DomainError);
}

TEST_CASE("min over the temperature box") {
    const auto m = PowerLawModel::default_model();
    // kappa decreases in theta, so the minimum sits at the top of the box
    CHECK_THAT(kappa_min_over_theta(m, {0.5, 2.0}, 1.5), WithinRel(m.kappa(1.5, 2.0), 1e-14));
    CHECK_THAT(mu_min_over_theta(m, {0.5, 2.0}, 1.5), WithinRel(1.0, 1e-14));
}
