// Planar constant-speed unicycle kinematics.
#pragma once

#include <string>

#include "gvf/types.hpp"

namespace gvf {

struct VehicleState {
    Vec2 position = Vec2::Zero(); // world frame [m]
    double yaw = 0.0;             // (-pi, pi] [rad]; equal to heading, no wind
    double speed = 1.0;           // ground speed [m/s], constant
};

enum class Integrator { rk4, forward_euler };

std::string to_string(Integrator integrator);
Integrator integrator_from_string(const std::string &text);

/**
 * @brief Advances p' = s (cos psi, sin psi), psi' = u_psi by one step of size dt.
 *
 * The yaw-rate command is held constant across the step. Speed is copied
 * through untouched and yaw is wrapped to (-pi, pi] afterwards.
 *
 * @throws std::invalid_argument if dt <= 0
 * @throws IntegrationError if u_psi is not finite or the state is invalid
 */
VehicleState step(const VehicleState &state, double u_psi, double dt,
                  Integrator integrator = Integrator::rk4);

} // namespace gvf
