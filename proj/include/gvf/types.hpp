// Common vocabulary types shared by every gvf module.
#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace gvf {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

/// Aircraft identifier. One byte, as carried on the air-to-air link.
using AircraftId = std::uint8_t;

/// Simulation time in integer milliseconds.
using TimeMs = std::uint64_t;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;
inline constexpr double kStandardGravity = 9.81;

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The vehicle sits where the level function's gradient vanishes.
class SingularPointError : public Error {
public:
    using Error::Error;
};

/// Phase requested exactly at the circle center.
class UndefinedPhaseError : public Error {
public:
    using Error::Error;
};

class MissingPhaseError : public Error {
public:
    using Error::Error;
};

class UnknownIdError : public Error {
public:
    using Error::Error;
};

class IntegrationError : public Error {
public:
    using Error::Error;
};

/// Invalid scenario or graph configuration. The CLI maps it to exit code 2.
class ScenarioError : public Error {
public:
    using Error::Error;
};

/// Direction in which a closed curve is circulated.
enum class RotationSense { clockwise, counterclockwise };

/// Wraps an angle into (-pi, pi].
inline double wrap_angle(double angle) {
    double r = std::remainder(angle, kTwoPi);
    if (r <= -kPi) {
        r += kTwoPi;
    }
    if (r > kPi) {
        r -= kTwoPi;
    }
    return r;
}

/// z-component of the planar cross product a x b.
inline double cross2(const Vec2 &a, const Vec2 &b) { return a.x() * b.y() - a.y() * b.x(); }

inline Vec2 heading_vector(double yaw) { return {std::cos(yaw), std::sin(yaw)}; }

std::string to_string(RotationSense sense);
RotationSense rotation_sense_from_string(const std::string &text);

} // namespace gvf
