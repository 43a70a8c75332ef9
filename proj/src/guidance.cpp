#include "gvf/guidance.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace gvf {

void validate(const GvfParams &params) {
    if (!(params.k_e > 0.0) || !std::isfinite(params.k_e)) {
        throw std::invalid_argument(fmt::format("k_e must be positive, got {}", params.k_e));
    }
    if (!(params.k_d > 0.0) || !std::isfinite(params.k_d)) {
        throw std::invalid_argument(fmt::format("k_d must be positive, got {}", params.k_d));
    }
}

Mat2 tangent_rotation(RotationSense sense) {
    Mat2 e;
    if (sense == RotationSense::clockwise) {
        e << 0.0, 1.0, -1.0, 0.0;
    } else {
        e << 0.0, -1.0, 1.0, 0.0;
    }
    return e;
}

FieldSample build_field(const ImplicitCurve &curve, const GvfParams &params, const Vec2 &p) {
    FieldSample out;
    out.normal = gradient(curve, p);
    if (out.normal.norm() < kSingularGradientNorm) {
        throw SingularPointError(
            fmt::format("guidance field undefined at ({}, {}): gradient vanishes", p.x(), p.y()));
    }
    out.error = level_error(curve, p);
    out.tangent = tangent_rotation(params.rotation_sense) * out.normal;
    out.desired = out.tangent - params.k_e * out.error * out.normal;
    out.desired_direction = out.desired.normalized();
    return out;
}

YawRateTerms yaw_rate_terms(const ImplicitCurve &curve, const GvfParams &params,
                            const VehicleState &state) {
    const FieldSample f = build_field(curve, params, state.position);
    const Vec2 m = heading_vector(state.yaw);
    const Vec2 velocity = state.speed * m;

    const Mat2 e_rot = tangent_rotation(params.rotation_sense);
    const Mat2 h = hessian(curve, state.position);
    const Mat2 shaped = e_rot - params.k_e * f.error * Mat2::Identity();
    const Vec2 field_rate =
        shaped * h * velocity - params.k_e * f.normal.dot(velocity) * f.normal;

    YawRateTerms terms;
    terms.feedforward = cross2(f.desired, field_rate) / f.desired.squaredNorm();
    terms.alignment = params.k_d * cross2(m, f.desired_direction);
    return terms;
}

double yaw_rate_command(const ImplicitCurve &curve, const GvfParams &params,
                        const VehicleState &state) {
    return yaw_rate_terms(curve, params, state).total();
}

double bank_angle(double u_psi, double speed, double g) {
    if (!(g > 0.0)) {
        throw std::invalid_argument("bank_angle: gravity must be positive");
    }
    return std::atan(u_psi * speed / g);
}

double max_yaw_rate(double max_bank_rad, double speed, double g) {
    if (!(speed > 0.0) || !(g > 0.0)) {
        throw std::invalid_argument("max_yaw_rate: speed and gravity must be positive");
    }
    return g * std::tan(max_bank_rad) / speed;
}

double saturate_yaw_rate(double u_psi, double max_bank_rad, double speed, double g) {
    const double limit = max_yaw_rate(max_bank_rad, speed, g);
    return std::clamp(u_psi, -limit, limit);
}

} // namespace gvf
