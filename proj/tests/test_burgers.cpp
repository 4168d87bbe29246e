#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "nsk/burgers.hpp"
#include "support.hpp"

using namespace nsk;
using Catch::Matchers::WithinAbs;

TEST_CASE("Burgers reference values") {
    const BurgersWave b(-1, 1);
    CHECK(b.solve(0, 0) == 0.0);
    for (double t : {0.0, 1.0, 5.0, 10.0}) CHECK_THAT(b.solve(1e3, t), WithinAbs(1.0, 1e-6));
    const double ref = oracle::bisect([](double w) { return w - std::tanh(0.7 - 2.0 * w); }, -1, 1);
    CHECK_THAT(b.solve(0.7, 2.0), WithinAbs(ref, 1e-12));
}

TEST_CASE("implicit relation holds at random points") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> ux(-200, 200), ut(0, 100);
    const BurgersWave b(-0.3, 1.7);
    double worst = 0;
    for (int i = 0; i < 10000; ++i) {
        const double x = ux(rng), t = ut(rng);
        worst = std::max(worst, std::abs(b.residual(b.solve(x, t), x, t)));
    }
    CHECK(worst < 1e-12);
}

TEST_CASE("solution is nondecreasing in x and derivatives are consistent") {
    const BurgersWave b(-1, 2);
    for (double t : {0.0, 0.5, 3.0, 40.0}) {
        double prev = -10;
        for (int i = -400; i <= 400; ++i) {
            const double w = b.solve(0.25 * i, t);
            CHECK(w >= prev);
            prev = w;
        }
        for (double x : {-3.0, -0.4, 0.0, 1.1, 6.0}) {
            const BurgersPoint p = b.eval(x, t);
            const double h = 1e-5;
            CHECK_THAT(p.w_x, WithinAbs((b.solve(x + h, t) - b.solve(x - h, t)) / (2 * h), 1e-7));
            const double wxp = b.eval(x + h, t).w_x, wxm = b.eval(x - h, t).w_x;
            CHECK_THAT(p.w_xx, WithinAbs((wxp - wxm) / (2 * h), 1e-6));
            CHECK(p.w_x >= 0.0);
            if (t > 1e-3) {
                const double dt = 1e-5;
                CHECK_THAT(p.w_t, WithinAbs((b.solve(x, t + dt) - b.solve(x, t - dt)) / (2 * dt), 1e-7));
            }
        }
    }
}

TEST_CASE("smooth wave approaches the centred fan") {
    const BurgersWave b(-1, 1);
    const double t = 100;
    double worst = 0;
    for (int i = -99; i <= 99; ++i) {
        const double x = i * t / 100.0;
        worst = std::max(worst, std::abs(b.solve(x, t) - burgers_fan(-1, 1, x, t)));
    }
    CHECK(worst < 0.05);
    CHECK(burgers_fan(-1, 1, -500, 100) == -1);
    CHECK(burgers_fan(-1, 1, 500, 100) == 1);
    CHECK(burgers_fan(-1, 1, -1, 0) == -1);
}

TEST_CASE("degenerate and invalid Burgers data") {
    const BurgersWave flat(0.4, 0.4);
    CHECK(flat.solve(3.0, 7.0) == 0.4);
    CHECK(flat.eval(3.0, 7.0).w_x == 0.0);
    CHECK_THROWS_AS(BurgersWave(1, -1), DomainError);
    CHECK_THROWS_AS(BurgersWave(-1, 1).solve(0, -1), DomainError);
}
