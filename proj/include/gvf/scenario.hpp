// Scenario description and its YAML file format.
#pragma once

#include <filesystem>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "gvf/curve.hpp"
#include "gvf/dynamics.hpp"
#include "gvf/formation.hpp"
#include "gvf/netsim.hpp"
#include "gvf/types.hpp"

namespace gvf {

struct VehicleSpec {
    AircraftId id = 0;
    Vec2 position = Vec2::Zero(); // [m]
    double yaw = 0.0;             // [rad]
    double speed = 11.0;          // [m/s]
    TimeMs control_offset_ms = 0; // phase of this agent's 2 Hz schedule
};

/// GPS of `id` is unreliable during [start_ms, end_ms).
struct GpsOutage {
    AircraftId id = 0;
    TimeMs start_ms = 0;
    TimeMs end_ms = std::numeric_limits<TimeMs>::max();
};

/// Link from -> to (and back, if both_directions) is down during [start_ms, end_ms).
struct LinkOutage {
    AircraftId from = 0;
    AircraftId to = 0;
    TimeMs start_ms = 0;
    TimeMs end_ms = std::numeric_limits<TimeMs>::max();
    bool both_directions = true;
};

struct Scenario {
    std::string name;
    std::vector<VehicleSpec> vehicles;
    ImplicitCurve path = ImplicitCurve::circle(Vec2::Zero(), 30.0);
    std::vector<Edge> edges;

    double k_e = 1e-3;
    double k_d = 2.0;
    double k_r = 10.0;
    RadiusConvention convention = RadiusConvention::radius_shift;
    RotationSense rotation_sense = RotationSense::counterclockwise;
    double min_radius_factor = 0.2;
    double max_radius_factor = 5.0;

    double max_bank_rad = 45.0 * kPi / 180.0;
    double gravity = kStandardGravity;

    TimeMs control_period_ms = 500;
    TimeMs staleness_timeout_ms = 2000;

    LinkModel link;
    std::vector<GpsOutage> gps_outages;
    std::vector<LinkOutage> link_outages;

    double duration_s = 120.0;
    double physics_dt_s = 0.02;
    Integrator integrator = Integrator::rk4;
    std::size_t telemetry_decimation = 1;

    TimeMs duration_ms() const;
    TimeMs physics_dt_ms() const;
};

/**
 * Checks every scenario invariant: unique IDs, positive gains and speeds,
 * starts away from the path center, a circle whenever edges exist, integer
 * millisecond physics step, and a valid link model and graph.
 *
 * @throws ScenarioError describing the first violation
 */
void validate(const Scenario &scenario);

/// Non-fatal remarks, e.g. a cyclic formation graph.
std::vector<std::string> scenario_warnings(const Scenario &scenario);

/// @throws ScenarioError on malformed YAML, unknown enum values or failed validation
Scenario parse_scenario(const std::string &yaml_text);
Scenario load_scenario(const std::filesystem::path &file);

} // namespace gvf
