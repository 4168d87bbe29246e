#include <catch_amalgamated.hpp>

#include <cmath>

#include "nsk/selfsimilar.hpp"

using namespace nsk;
using Catch::Matchers::WithinAbs;

namespace {
const ThermoParams tp(1, 1.1, 1);
}

TEST_CASE("equal temperatures give the constant profile") {
    const auto P = solve_selfsimilar(tp, PowerLawModel::default_model(), 1.3, 1.3, 1.0);
    for (std::size_t i = 0; i < P.xi.size(); ++i) {
        CHECK(P.Theta[i] == 1.3);
        CHECK(P.dTheta[i] == 0.0);
    }
}

TEST_CASE("default family reduces to the erf profile") {
    const auto m = PowerLawModel::default_model();
    const double p = 1.0;
    const auto P = solve_selfsimilar(tp, m, 1.0, 1.05, p, 0.0, 2001);
    const double a = p * tp.delta() / (tp.gamma * tp.R * tp.R);
    CHECK(P.a_coef == a);
    CHECK(P.ode_residual < 1e-8);
    CHECK_THAT(P.Theta[(P.xi.size() - 1) / 2], WithinAbs(1.025, 1e-9));
    double err = 0, derr = 0;
    for (std::size_t i = 0; i < P.xi.size(); ++i) {
        const double z = P.xi[i] / (2 * std::sqrt(a * m.alpha0));
        const double th = 1.0 + 0.025 * (1 + std::erf(z));
        const double dth = 0.025 * 2 / std::sqrt(M_PI) * std::exp(-z * z) / (2 * std::sqrt(a * m.alpha0));
        err = std::max(err, std::abs(th - P.Theta[i]));
        derr = std::max(derr, std::abs(dth - P.dTheta[i]));
    }
    CHECK(err < 1e-6);
    CHECK(derr < 1e-4);
}

TEST_CASE("profile is monotone in the direction of the jump") {
    for (auto [lo, hi] : {std::pair{1.0, 1.3}, std::pair{1.2, 0.8}}) {
        const auto P = solve_selfsimilar(tp, PowerLawModel::default_model(), lo, hi, 1.0);
        const double sg = hi > lo ? 1.0 : -1.0;
        for (std::size_t i = 1; i < P.Theta.size(); ++i) CHECK(sg * (P.Theta[i] - P.Theta[i - 1]) >= 0.0);
        CHECK(P.Theta.front() == lo);
        CHECK(P.Theta.back() == hi);
    }
}

TEST_CASE("nonlinear conductivity: converges and refines at second order") {
    auto m = PowerLawModel::default_model();
    m.alpha_exp = 2.5;
    m.mu_exp = 0.5;
    const double Xi = default_half_width(tp, m, 1.0, 1.4, 1.0);
    const auto c = solve_selfsimilar(tp, m, 1.0, 1.4, 1.0, Xi, 401);
    const auto f = solve_selfsimilar(tp, m, 1.0, 1.4, 1.0, Xi, 801);
    const auto ff = solve_selfsimilar(tp, m, 1.0, 1.4, 1.0, Xi, 1601);
    CHECK(ff.ode_residual < 1e-8);
    double e1 = 0, e2 = 0;
    for (std::size_t i = 0; i < c.xi.size(); ++i) {
        e1 = std::max(e1, std::abs(c.Theta[i] - f.Theta[2 * i]));
        e2 = std::max(e2, std::abs(f.Theta[2 * i] - ff.Theta[4 * i]));
    }
    CHECK(std::log2(e1 / e2) > 1.8);
    // the stored second derivative satisfies the differential equation
    ContactDiffusivity<PowerLawModel> cd{&m, tp.R, 1.0};
    for (std::size_t i = 100; i + 100 < ff.xi.size(); i += 50) {
        const double lhs = ff.a_coef * (cd.beta_prime(ff.Theta[i]) * ff.dTheta[i] * ff.dTheta[i] +
                                        cd.beta(ff.Theta[i]) * ff.d2Theta[i]);
        CHECK_THAT(lhs + 0.5 * ff.xi[i] * ff.dTheta[i], WithinAbs(0.0, 1e-12));
        const double h = ff.spacing();
        CHECK_THAT(ff.d2Theta[i], WithinAbs((ff.dTheta[i + 1] - ff.dTheta[i - 1]) / (2 * h), 1e-4));
    }
}

TEST_CASE("profile solver input checks") {
    const auto m = PowerLawModel::default_model();
    CHECK_THROWS_AS(solve_selfsimilar(tp, m, 1.0, 1.05, 1.0, 0.0, 2000), DomainError);
    CHECK_THROWS_AS(solve_selfsimilar(tp, m, 1.0, 1.05, 1.0, 0.0, 51), DomainError);
    CHECK_THROWS_AS(solve_selfsimilar(tp, m, -1.0, 1.05, 1.0), DomainError);
    CHECK_THROWS_AS(solve_selfsimilar(tp, m, 1.0, 1.05, 0.0), DomainError);
}

TEST_CASE("default half width covers the boundary layers") {
    const auto m = PowerLawModel::default_model();
    const double Xi = default_half_width(tp, m, 1.0, 1.05, 1.0);
    CHECK(Xi >= 1.0);
    const auto P = solve_selfsimilar(tp, m, 1.0, 1.05, 1.0, Xi);
    CHECK(std::abs(P.dTheta.front()) < 1e-10);
    CHECK(std::abs(P.dTheta.back()) < 1e-10);
}
