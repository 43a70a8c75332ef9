// Discrete-event scenario engine: physics, agents and network on one clock.
#pragma once

#include <map>
#include <optional>
#include <vector>

#include "gvf/formation.hpp"
#include "gvf/netsim.hpp"
#include "gvf/protocol.hpp"
#include "gvf/scenario.hpp"
#include "gvf/types.hpp"

namespace gvf {

struct VehicleSample {
    AircraftId id = 0;
    Vec2 position = Vec2::Zero();
    double yaw = 0.0;
    double phase = 0.0;      // true phase about the path center [rad]
    double error = 0.0;      // level error w.r.t. the curve being tracked
    double u_r = 0.0;
    double radius_eff = 0.0; // tracked radius (0 for an ellipse path)
    double bank = 0.0;       // bank for the last applied yaw rate [rad]
    double yaw_rate = 0.0;   // last applied (saturated) yaw rate [rad/s]
};

struct TelemetryFrame {
    TimeMs time_ms = 0;
    std::vector<VehicleSample> vehicles; // scenario vehicle order
    std::vector<double> z;               // wrapped phase error per edge
};

struct TelemetryLog {
    std::vector<AircraftId> ids;
    std::vector<Edge> edges;
    std::vector<TelemetryFrame> frames;

    // Protocol-level records; not part of the telemetry CSV.
    std::vector<AgentRecord> agent_records;
    std::vector<TraceEntry> net_trace;
    std::map<AircraftId, std::size_t> peak_table_rows;
    std::size_t messages_sent = 0;
    std::size_t messages_dropped = 0;
    std::size_t messages_delivered = 0;
};

/**
 * @brief Runs a scenario to completion.
 *
 * Each physics tick at time t performs, in order:
 *   1. deliver messages due at or before t into the recipients' tables;
 *   2. run every agent whose control tick is due (vehicle order), sending
 *      its phase to each registered neighbor;
 *   3. compute each vehicle's saturated yaw rate against its agent's current
 *      curve and integrate one physics step.
 * A frame is recorded at t = 0 and after every `telemetry_decimation` steps.
 * The result is a pure function of the scenario.
 *
 * @throws ScenarioError if the scenario is invalid
 * @throws SingularPointError / IntegrationError if the simulation breaks down
 */
TelemetryLog run(const Scenario &scenario);

/// max_k |z_k| of one frame (0 when there are no edges).
double max_abs_phase_error(const TelemetryFrame &frame);

/**
 * First time [s] after which max |z| stays below `threshold` for the rest of
 * the log; nullopt if the last frame is not below it.
 *
 * @throws std::invalid_argument unless threshold > 0
 */
std::optional<double> sync_time(const TelemetryLog &log, double threshold);

/// sync_time restricted to a single edge (index into log.edges).
std::optional<double> edge_sync_time(const TelemetryLog &log, std::size_t edge_index,
                                     double threshold);

} // namespace gvf
