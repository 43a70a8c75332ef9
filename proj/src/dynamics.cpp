#include "gvf/dynamics.hpp"

#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace gvf {

std::string to_string(Integrator integrator) {
    return integrator == Integrator::rk4 ? "rk4" : "forward_euler";
}

Integrator integrator_from_string(const std::string &text) {
    if (text == "rk4") {
        return Integrator::rk4;
    }
    if (text == "forward_euler" || text == "euler") {
        return Integrator::forward_euler;
    }
    throw ScenarioError(fmt::format("unknown integrator '{}'", text));
}

VehicleState step(const VehicleState &state, double u_psi, double dt, Integrator integrator) {
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw std::invalid_argument(fmt::format("step: dt must be positive, got {}", dt));
    }
    if (!std::isfinite(u_psi)) {
        throw IntegrationError(fmt::format("step: non-finite yaw-rate command {}", u_psi));
    }
    if (!(state.speed > 0.0) || !state.position.allFinite() || !std::isfinite(state.yaw)) {
        throw IntegrationError("step: invalid vehicle state");
    }

    const double s = state.speed;
    VehicleState next = state;

    if (integrator == Integrator::forward_euler) {
        next.position = state.position + dt * s * heading_vector(state.yaw);
        next.yaw = wrap_angle(state.yaw + dt * u_psi);
        return next;
    }

    // The yaw equation does not depend on position, so the stage headings
    // are exact: psi, psi + h/2 (twice), psi + h.
    const Vec2 k1 = s * heading_vector(state.yaw);
    const Vec2 k2 = s * heading_vector(state.yaw + 0.5 * dt * u_psi);
    const Vec2 k3 = k2;
    const Vec2 k4 = s * heading_vector(state.yaw + dt * u_psi);

    next.position = state.position + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    next.yaw = wrap_angle(state.yaw + dt * u_psi);
    return next;
}

} // namespace gvf
