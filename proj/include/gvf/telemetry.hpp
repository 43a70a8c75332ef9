// Telemetry CSV, agent dumps, field samples and SVG trajectory plots.
#pragma once

#include <istream>
#include <ostream>
#include <span>
#include <string>

#include "gvf/guidance.hpp"
#include "gvf/protocol.hpp"
#include "gvf/runner.hpp"

namespace gvf {

/**
 * Wide telemetry CSV, one row per frame:
 *
 *   time_ms, then per vehicle N
 *     x_N_m,y_N_m,psi_N_rad,theta_N_rad,e_N,u_r_N,radius_eff_N_m,bank_N_rad
 *   then per edge (T, H)
 *     z_T_H_rad
 *
 * Values use 17 significant digits so a round trip is lossless.
 */
void write_telemetry_csv(std::ostream &out, const TelemetryLog &log);

/// Reads frames, IDs and edges back from write_telemetry_csv output.
/// @throws Error on a malformed header or row
TelemetryLog read_telemetry_csv(std::istream &in);

/// `time_ms,id,x_m,y_m,psi_rad,theta_rad,u_r,radius_eff_m,n_live_neighbors`
void write_agent_dump(std::ostream &out, std::span<const AgentRecord> records);

struct FieldGrid {
    std::size_t columns = 21;
    std::size_t rows = 21;
    Vec2 min_corner = Vec2(-60.0, -60.0);
    Vec2 max_corner = Vec2(60.0, 60.0);
};

/// `x_m,y_m,e,dir_x,dir_y` on a regular grid; the singular point is skipped.
void write_field_samples(std::ostream &out, const ImplicitCurve &curve, const GvfParams &params,
                         const FieldGrid &grid);

/// Per-vehicle polylines plus the path and the final tracked circles.
void write_svg(std::ostream &out, const TelemetryLog &log, const ImplicitCurve &path);

} // namespace gvf
