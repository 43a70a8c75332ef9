// Implicit planar curves phi(p) = 0 used as guidance paths.
#pragma once

#include "gvf/types.hpp"

namespace gvf {

enum class CurveKind { circle, ellipse };

/**
 * @brief A C2 closed path given as the zero level set of a scalar function.
 *
 * Circle:  phi(p) = |p - c|^2 - r^2                      [m^2]
 * Ellipse: phi(p) = (x'/a)^2 + (y'/b)^2 - 1               [dimensionless]
 *          with (x', y') = R(-orientation) (p - c), the curve-local frame.
 *
 * The gradient of both functions vanishes only at the center.
 */
class ImplicitCurve {
public:
    /// @throws std::invalid_argument unless radius > 0 and finite
    static ImplicitCurve circle(const Vec2 &center, double radius);

    /// @throws std::invalid_argument unless both semi-axes > 0 and finite
    static ImplicitCurve ellipse(const Vec2 &center, double semi_axis_a, double semi_axis_b,
                                 double orientation_rad = 0.0);

    CurveKind kind() const { return kind_; }
    bool is_circle() const { return kind_ == CurveKind::circle; }
    const Vec2 &center() const { return center_; }

    /// Circle radius. Throws std::logic_error for an ellipse.
    double radius() const;

    double semi_axis_a() const { return a_; }
    double semi_axis_b() const { return b_; }
    double orientation() const { return orientation_; }

private:
    ImplicitCurve(CurveKind kind, const Vec2 &center, double a, double b, double orientation);

    CurveKind kind_;
    Vec2 center_;
    double a_;
    double b_;
    double orientation_;
};

/// Level-set value e(p) = phi(p). Zero on the path, positive outside.
double level_error(const ImplicitCurve &curve, const Vec2 &p);

/// Analytic gradient of phi. Zero at the center.
Vec2 gradient(const ImplicitCurve &curve, const Vec2 &p);

/// Analytic Hessian of phi (constant for both supported kinds).
Mat2 hessian(const ImplicitCurve &curve, const Vec2 &p);

} // namespace gvf
