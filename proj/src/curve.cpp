#include "gvf/curve.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace gvf {

namespace {

Mat2 rotation(double angle) {
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    Mat2 r;
    r << c, -s, s, c;
    return r;
}

bool positive_finite(double v) { return std::isfinite(v) && v > 0.0; }

} // namespace

ImplicitCurve::ImplicitCurve(CurveKind kind, const Vec2 &center, double a, double b,
                             double orientation)
    : kind_(kind), center_(center), a_(a), b_(b), orientation_(orientation) {}

ImplicitCurve ImplicitCurve::circle(const Vec2 &center, double radius) {
    if (!positive_finite(radius)) {
        throw std::invalid_argument("circle radius must be positive, got " + std::to_string(radius));
    }
    if (!center.allFinite()) {
        throw std::invalid_argument("circle center must be finite");
    }
    return ImplicitCurve(CurveKind::circle, center, radius, radius, 0.0);
}

ImplicitCurve ImplicitCurve::ellipse(const Vec2 &center, double semi_axis_a, double semi_axis_b,
                                     double orientation_rad) {
    if (!positive_finite(semi_axis_a) || !positive_finite(semi_axis_b)) {
        throw std::invalid_argument("ellipse semi-axes must be positive");
    }
    if (!center.allFinite() || !std::isfinite(orientation_rad)) {
        throw std::invalid_argument("ellipse center and orientation must be finite");
    }
    return ImplicitCurve(CurveKind::ellipse, center, semi_axis_a, semi_axis_b, orientation_rad);
}

double ImplicitCurve::radius() const {
    if (kind_ != CurveKind::circle) {
        throw std::logic_error("radius() requested on a non-circular curve");
    }
    return a_;
}

double level_error(const ImplicitCurve &curve, const Vec2 &p) {
    const Vec2 d = p - curve.center();
    if (curve.is_circle()) {
        const double r = curve.radius();
        return d.squaredNorm() - r * r;
    }
    const Vec2 q = rotation(curve.orientation()).transpose() * d;
    const double u = q.x() / curve.semi_axis_a();
    const double v = q.y() / curve.semi_axis_b();
    return u * u + v * v - 1.0;
}

Vec2 gradient(const ImplicitCurve &curve, const Vec2 &p) {
    const Vec2 d = p - curve.center();
    if (curve.is_circle()) {
        return 2.0 * d;
    }
    const Mat2 r = rotation(curve.orientation());
    const Vec2 q = r.transpose() * d;
    const Vec2 local(2.0 * q.x() / (curve.semi_axis_a() * curve.semi_axis_a()),
                     2.0 * q.y() / (curve.semi_axis_b() * curve.semi_axis_b()));
    return r * local;
}

Mat2 hessian(const ImplicitCurve &curve, const Vec2 & /*p*/) {
    if (curve.is_circle()) {
        return 2.0 * Mat2::Identity();
    }
    const Mat2 r = rotation(curve.orientation());
    Mat2 d = Mat2::Zero();
    d(0, 0) = 2.0 / (curve.semi_axis_a() * curve.semi_axis_a());
    d(1, 1) = 2.0 / (curve.semi_axis_b() * curve.semi_axis_b());
    return r * d * r.transpose();
}

} // namespace gvf
