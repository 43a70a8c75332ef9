#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "gvf/curve.hpp"
#include "oracles.hpp"

using gvf::ImplicitCurve;
using gvf::Mat2;
using gvf::Vec2;

TEST_CASE("circle level error") {
    const auto c = ImplicitCurve::circle(Vec2::Zero(), 30.0);
    CHECK(gvf::level_error(c, Vec2(30.0, 0.0)) == 0.0);
    CHECK(gvf::level_error(c, Vec2(0.0, 0.0)) == -900.0);
    CHECK(gvf::level_error(ImplicitCurve::circle(Vec2::Zero(), 2.0), Vec2(3.0, 4.0)) == 21.0);
    // Off-origin center shifts the argument.
    CHECK(gvf::level_error(ImplicitCurve::circle(Vec2(1.0, 1.0), 2.0), Vec2(4.0, 5.0)) == 21.0);
}

TEST_CASE("circle gradient and hessian examples") {
    const auto c = ImplicitCurve::circle(Vec2::Zero(), 7.0);
    CHECK(gvf::gradient(c, Vec2(1.0, 2.0)) == Vec2(2.0, 4.0));
    CHECK(gvf::gradient(c, Vec2(0.0, 0.0)) == Vec2(0.0, 0.0));
    CHECK(gvf::gradient(c, Vec2(-3.0, 0.0)) == Vec2(-6.0, 0.0));
    const Mat2 two = 2.0 * Mat2::Identity();
    CHECK(gvf::hessian(c, Vec2(5.0, -1.0)) == two);
    CHECK(gvf::hessian(c, Vec2(0.0, 0.0)) == two);
}

TEST_CASE("axis-aligned ellipse") {
    const double a = 4.0;
    const double b = 2.0;
    const auto e = ImplicitCurve::ellipse(Vec2::Zero(), a, b);
    CHECK(gvf::level_error(e, Vec2(a, 0.0)) == doctest::Approx(0.0));
    CHECK(gvf::level_error(e, Vec2(0.0, b)) == doctest::Approx(0.0));
    CHECK(gvf::level_error(e, Vec2::Zero()) == -1.0);
    const Mat2 h = gvf::hessian(e, Vec2(1.0, 1.0));
    CHECK(h(0, 0) == doctest::Approx(2.0 / (a * a)));
    CHECK(h(1, 1) == doctest::Approx(2.0 / (b * b)));
    CHECK(h(0, 1) == doctest::Approx(0.0));
    CHECK(h(1, 0) == doctest::Approx(0.0));
}

TEST_CASE("rotated ellipse passes through its rotated vertices") {
    const double th = 0.6;
    const auto e = ImplicitCurve::ellipse(Vec2(2.0, -1.0), 5.0, 3.0, th);
    const Vec2 major(std::cos(th), std::sin(th));
    const Vec2 minor(-std::sin(th), std::cos(th));
    CHECK(gvf::level_error(e, e.center() + 5.0 * major) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(gvf::level_error(e, e.center() - 3.0 * minor) == doctest::Approx(0.0).epsilon(1e-12));
    // Gradient on the major vertex points along the major axis.
    const Vec2 g = gvf::gradient(e, e.center() + 5.0 * major);
    CHECK(std::abs(gvf::cross2(g, major)) < 1e-12);
    CHECK(g.dot(major) > 0.0);
}

TEST_CASE("derivatives agree with finite differences of the level function") {
    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const ImplicitCurve curves[] = {ImplicitCurve::circle(Vec2(-4.0, 9.0), 30.0),
                                    ImplicitCurve::circle(Vec2::Zero(), 1.0),
                                    ImplicitCurve::ellipse(Vec2(1.0, 2.0), 40.0, 15.0, 1.1),
                                    ImplicitCurve::ellipse(Vec2::Zero(), 3.0, 3.0, 0.0)};
    for (const auto &c : curves) {
        const double scale = c.is_circle() ? c.radius() : std::min(c.semi_axis_a(), c.semi_axis_b());
        for (int i = 0; i < 1000; ++i) {
            const double rho = scale * (0.1 + 9.9 * unit(rng));
            const double ang = gvf::kTwoPi * unit(rng);
            const Vec2 p = c.center() + rho * Vec2(std::cos(ang), std::sin(ang));
            const double h = 1e-3 * scale;
            REQUIRE(oracle::relative_error(gvf::gradient(c, p), oracle::fd_gradient(c, p, h)) <= 1e-6);
            REQUIRE(oracle::relative_error(gvf::hessian(c, p), oracle::fd_hessian(c, p, h)) <= 1e-6);
            // Hessian as the finite difference of the analytic gradient, step 1e-4 m.
            const double s = 1e-4;
            Mat2 fd;
            fd.col(0) = (gvf::gradient(c, p + Vec2(s, 0)) - gvf::gradient(c, p - Vec2(s, 0))) / (2 * s);
            fd.col(1) = (gvf::gradient(c, p + Vec2(0, s)) - gvf::gradient(c, p - Vec2(0, s))) / (2 * s);
            REQUIRE(oracle::relative_error(gvf::hessian(c, p), fd) <= 1e-6);
        }
    }
}

TEST_CASE("gradient vanishes only at the center") {
    const auto e = ImplicitCurve::ellipse(Vec2(3.0, 3.0), 6.0, 2.0, 0.3);
    CHECK(gvf::gradient(e, e.center()).norm() == 0.0);
    CHECK(gvf::gradient(e, e.center() + Vec2(1e-6, 0.0)).norm() > 0.0);
}

TEST_CASE("invalid curve parameters") {
    CHECK_THROWS_AS(ImplicitCurve::circle(Vec2::Zero(), 0.0), std::invalid_argument);
    CHECK_THROWS_AS(ImplicitCurve::circle(Vec2::Zero(), -1.0), std::invalid_argument);
    CHECK_THROWS_AS(ImplicitCurve::circle(Vec2::Zero(), NAN), std::invalid_argument);
    CHECK_THROWS_AS(ImplicitCurve::circle(Vec2(NAN, 0.0), 1.0), std::invalid_argument);
    CHECK_THROWS_AS(ImplicitCurve::ellipse(Vec2::Zero(), 1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(ImplicitCurve::ellipse(Vec2::Zero(), -2.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(ImplicitCurve::ellipse(Vec2::Zero(), 2.0, 1.0, INFINITY), std::invalid_argument);
    CHECK_THROWS_AS(ImplicitCurve::ellipse(Vec2::Zero(), 2.0, 1.0).radius(), std::logic_error);
}
