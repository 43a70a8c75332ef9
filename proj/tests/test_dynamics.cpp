#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "gvf/dynamics.hpp"
#include "oracles.hpp"

using gvf::Integrator;
using gvf::Vec2;
using gvf::VehicleState;

TEST_CASE("straight flight") {
    const VehicleState next = gvf::step(VehicleState{Vec2::Zero(), 0.0, 1.0}, 0.0, 1.0);
    CHECK(next.position.x() == doctest::Approx(1.0));
    CHECK(next.position.y() == doctest::Approx(0.0));
    CHECK(next.yaw == 0.0);
    CHECK(next.speed == 1.0);

    const VehicleState euler = gvf::step(VehicleState{Vec2(1.0, 1.0), gvf::kPi / 2, 3.0}, 0.0, 2.0,
                                         Integrator::forward_euler);
    CHECK(euler.position.x() == doctest::Approx(1.0));
    CHECK(euler.position.y() == doctest::Approx(7.0));
}

TEST_CASE("constant turn closes the circle") {
    const double w = 0.7;
    const double dt = 1e-3;
    VehicleState st{Vec2(2.0, -1.0), 0.4, 1.0};
    const Vec2 start = st.position;
    const double period = gvf::kTwoPi / w;
    const long steps = std::lround(period / dt);
    for (long k = 0; k < steps; ++k) {
        st = gvf::step(st, w, dt);
    }
    // The loop lands slightly off the exact period; compare with the closed form there.
    const Vec2 exact = oracle::constant_turn(start, 0.4, 1.0, w, steps * dt);
    CHECK((st.position - exact).norm() < 1e-6);
    CHECK((exact - start).norm() < 1e-3);
    // The radius is 1/w around the turn center.
    const Vec2 center = start + (1.0 / w) * Vec2(-std::sin(0.4), std::cos(0.4));
    CHECK((st.position - center).norm() == doctest::Approx(1.0 / w).epsilon(1e-9));
}

TEST_CASE("yaw wraps into (-pi, pi]") {
    const double eps = 1e-3;
    const VehicleState st = gvf::step(VehicleState{Vec2::Zero(), gvf::kPi - eps, 1.0}, 1.0, 0.01);
    CHECK(st.yaw > -gvf::kPi);
    CHECK(st.yaw <= gvf::kPi);
    CHECK(st.yaw == doctest::Approx(-gvf::kPi + 0.01 - eps));

    const VehicleState back = gvf::step(VehicleState{Vec2::Zero(), -gvf::kPi + eps, 1.0}, -1.0, 0.01);
    CHECK(back.yaw == doctest::Approx(gvf::kPi - 0.01 + eps));
}

TEST_CASE("wrap_angle is idempotent and lands in (-pi, pi]") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> any(-100.0, 100.0);
    for (int i = 0; i < 10000; ++i) {
        const double a = gvf::wrap_angle(any(rng));
        REQUIRE(a > -gvf::kPi);
        REQUIRE(a <= gvf::kPi);
        REQUIRE(gvf::wrap_angle(a) == a);
    }
    CHECK(gvf::wrap_angle(gvf::kPi) == gvf::kPi);
    CHECK(gvf::wrap_angle(-gvf::kPi) == gvf::kPi);
    CHECK(gvf::wrap_angle(3 * gvf::kPi) == doctest::Approx(gvf::kPi));
    CHECK(gvf::wrap_angle(0.0) == 0.0);
}

TEST_CASE("step error is fourth order in dt") {
    const double w = 0.9;
    const double s = 11.0;
    const double horizon = 4.0;
    auto error_for = [&](double dt) {
        VehicleState st{Vec2(5.0, 5.0), -1.2, s};
        const long steps = std::lround(horizon / dt);
        for (long k = 0; k < steps; ++k) {
            st = gvf::step(st, w, dt);
        }
        return (st.position - oracle::constant_turn(Vec2(5.0, 5.0), -1.2, s, w, horizon)).norm();
    };
    for (double dt : {0.2, 0.1, 0.05}) {
        const double coarse = error_for(dt);
        const double fine = error_for(dt / 2);
        CHECK(coarse / fine >= 8.0);
    }
}

TEST_CASE("forward Euler is first order") {
    const double w = 0.5;
    auto error_for = [&](double dt) {
        VehicleState st{Vec2::Zero(), 0.0, 2.0};
        const long steps = std::lround(2.0 / dt);
        for (long k = 0; k < steps; ++k) {
            st = gvf::step(st, w, dt, Integrator::forward_euler);
        }
        return (st.position - oracle::constant_turn(Vec2::Zero(), 0.0, 2.0, w, 2.0)).norm();
    };
    const double ratio = error_for(0.01) / error_for(0.005);
    CHECK(ratio == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("per-step displacement rate is the speed") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double dt = 0.01;
    for (int i = 0; i < 2000; ++i) {
        const double s = 1.0 + 20.0 * unit(rng);
        const double u = -1.0 + 2.0 * unit(rng);
        const VehicleState st{Vec2(unit(rng), unit(rng)) * 100.0, gvf::wrap_angle(7.0 * unit(rng)), s};
        const VehicleState next = gvf::step(st, u, dt);
        REQUIRE(next.speed == s);
        const double rate = (next.position - st.position).norm() / dt;
        // Chord of an exact arc is shorter by sinc(u dt / 2); within O(dt^2 u^2) of s.
        CHECK(std::abs(rate - s) / s <= (u * dt) * (u * dt) / 24.0 + 1e-12);
        const double half = 0.5 * u * dt;
        const double arc = half == 0.0 ? rate : rate * half / std::sin(half);
        CHECK(std::abs(arc - s) / s <= 1e-6);
    }
}

TEST_CASE("integration errors") {
    const VehicleState st{Vec2::Zero(), 0.0, 1.0};
    CHECK_THROWS_AS(gvf::step(st, 0.1, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(gvf::step(st, 0.1, -0.01), std::invalid_argument);
    CHECK_THROWS_AS(gvf::step(st, NAN, 0.01), gvf::IntegrationError);
    CHECK_THROWS_AS(gvf::step(st, INFINITY, 0.01), gvf::IntegrationError);
    CHECK_THROWS_AS(gvf::step(VehicleState{Vec2::Zero(), 0.0, 0.0}, 0.1, 0.01), gvf::IntegrationError);
    CHECK_THROWS_AS(gvf::step(VehicleState{Vec2(NAN, 0.0), 0.0, 1.0}, 0.1, 0.01), gvf::IntegrationError);
}

TEST_CASE("integrator names") {
    CHECK(gvf::integrator_from_string("rk4") == Integrator::rk4);
    CHECK(gvf::integrator_from_string("forward_euler") == Integrator::forward_euler);
    CHECK(gvf::to_string(Integrator::forward_euler) == "forward_euler");
    CHECK_THROWS_AS(gvf::integrator_from_string("rk45"), gvf::ScenarioError);
}
