// Guidance vector field and the yaw-rate law that tracks it.
#pragma once

#include "gvf/curve.hpp"
#include "gvf/dynamics.hpp"
#include "gvf/types.hpp"

namespace gvf {

struct GvfParams {
    double k_e = 1.0; // field aggressiveness, > 0
    double k_d = 1.0; // heading alignment gain [1/s], > 0
    RotationSense rotation_sense = RotationSense::counterclockwise;
};

/// @throws std::invalid_argument unless both gains are positive and finite
void validate(const GvfParams &params);

struct FieldSample {
    double error = 0.0;                       // e = phi(p)
    Vec2 normal = Vec2::Zero();               // n = grad phi
    Vec2 tangent = Vec2::Zero();              // tau = E n
    Vec2 desired = Vec2::Zero();              // tau - k_e e n (unnormalized)
    Vec2 desired_direction = Vec2::Zero();    // unit vector along `desired`
};

/**
 * Rotation E with tau = E n. Clockwise is [[0, 1], [-1, 0]]; counterclockwise
 * is its transpose.
 */
Mat2 tangent_rotation(RotationSense sense);

/// Gradients with norm below this are treated as the curve's singular point.
inline constexpr double kSingularGradientNorm = 1e-9;

/// @throws SingularPointError when |grad phi(p)| < kSingularGradientNorm
FieldSample build_field(const ImplicitCurve &curve, const GvfParams &params, const Vec2 &p);

/// Two additive parts of the yaw-rate command [rad/s].
struct YawRateTerms {
    /// Turn rate of the field direction as seen by the moving vehicle.
    double feedforward = 0.0;
    /// k_d sin(angle from heading to field direction).
    double alignment = 0.0;

    double total() const { return feedforward + alignment; }
};

/**
 * @brief Yaw-rate command u_psi that makes a unicycle follow the field.
 *
 * With pd the field vector and p' = s m(psi) the vehicle velocity, the field
 * changes along the motion as
 *
 *   d(pd)/dt = (E - k_e e I) H p' - k_e (n . p') n
 *
 * and the feedforward term is the rate at which the direction of pd turns,
 * (pd x d(pd)/dt) / |pd|^2. The alignment term is k_d (m x pd_hat).
 *
 * @throws SingularPointError propagated from build_field
 */
YawRateTerms yaw_rate_terms(const ImplicitCurve &curve, const GvfParams &params,
                            const VehicleState &state);

double yaw_rate_command(const ImplicitCurve &curve, const GvfParams &params,
                        const VehicleState &state);

/// Coordinated-turn bank angle atan(u_psi * speed / g) [rad].
double bank_angle(double u_psi, double speed, double g = kStandardGravity);

/// Largest yaw rate reachable at the given bank limit: g tan(max_bank) / speed.
double max_yaw_rate(double max_bank_rad, double speed, double g = kStandardGravity);

/// Clamps u_psi to +-max_yaw_rate(max_bank_rad, speed, g).
double saturate_yaw_rate(double u_psi, double max_bank_rad, double speed,
                         double g = kStandardGravity);

} // namespace gvf
