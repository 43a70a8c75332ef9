// Per-aircraft formation agent: neighbor table, staleness filter, 2 Hz loop.
#pragma once

#include <map>
#include <optional>
#include <set>
#include <vector>

#include "gvf/curve.hpp"
#include "gvf/formation.hpp"
#include "gvf/guidance.hpp"
#include "gvf/netsim.hpp"
#include "gvf/types.hpp"

namespace gvf {

struct NeighborRow {
    double theta = 0.0;     // last received phase [rad]
    TimeMs last_update = 0; // local receive time [ms]
};

/**
 * @brief Neighbor membership plus the latest phase heard from each member.
 *
 * Only registered neighbors get rows; messages from anyone else are ignored.
 * Storage is O(number of registered neighbors) regardless of fleet size.
 */
class NeighborTable {
public:
    explicit NeighborTable(AircraftId owner) : owner_(owner) {}

    AircraftId owner() const { return owner_; }

    /// Idempotent. @throws std::invalid_argument for the owner's own id
    void register_neighbor(AircraftId id);
    /// Removes membership and any row.
    void delete_neighbor(AircraftId id);
    bool is_registered(AircraftId id) const { return members_.contains(id); }

    /// Upserts the sender's row. Returns false (table unchanged) for
    /// non-members and for the owner's own messages.
    bool on_message(const PhaseMessage &msg, TimeMs now);

    /// now - last_update for a row, nullopt if there is no row.
    std::optional<TimeMs> age(AircraftId id, TimeMs now) const;

    const std::set<AircraftId> &members() const { return members_; }
    const std::map<AircraftId, NeighborRow> &rows() const { return rows_; }
    std::size_t size() const { return rows_.size(); }

private:
    AircraftId owner_;
    std::set<AircraftId> members_;
    std::map<AircraftId, NeighborRow> rows_;
};

struct AgentConfig {
    AircraftId id = 0;
    TimeMs control_period_ms = 500;
    TimeMs staleness_timeout_ms = 2000;
    TimeMs control_offset_ms = 0; // first control tick
    ConsensusParams consensus;
    GvfParams gvf;
    ImplicitCurve base_circle = ImplicitCurve::circle(Vec2::Zero(), 1.0);
};

/// @throws std::invalid_argument on a zero period or timeout, or invalid gains
void validate(const AgentConfig &cfg);

struct GpsStatus {
    bool reliable = true; // "3D fix"
};

struct ControlOutput {
    ImplicitCurve circle;
    double u_r = 0.0;
    std::size_t live_neighbors = 0;
    std::optional<PhaseMessage> outgoing;
};

/// A row is live while now - last_update <= timeout (inclusive boundary).
bool is_live(const NeighborRow &row, TimeMs now, TimeMs timeout);

/**
 * One periodic step: u_r from live rows (wrapped phase differences, gain and
 * circulation sign from cfg.consensus), the modulated circle, and an outgoing
 * phase message iff the GPS is reliable. Cost is linear in the table size.
 */
ControlOutput control_step(const AgentConfig &cfg, const NeighborTable &table, double own_phase,
                           GpsStatus gps, TimeMs now);

/// Row of the per-control-tick agent dump.
struct AgentRecord {
    TimeMs time_ms = 0;
    AircraftId id = 0;
    Vec2 position = Vec2::Zero();
    double yaw = 0.0;
    double theta = 0.0;
    double u_r = 0.0;
    double radius_eff = 0.0;
    std::size_t live_neighbors = 0;
};

/**
 * @brief Stateful wrapper running control_step on its own schedule.
 *
 * The agent only sees its own position fix and whatever reached its table.
 * While the GPS is unreliable its own phase is frozen at the last good fix
 * and nothing is transmitted.
 */
class Agent {
public:
    explicit Agent(AgentConfig cfg);

    const AgentConfig &config() const { return cfg_; }
    AircraftId id() const { return cfg_.id; }

    NeighborTable &table() { return table_; }
    const NeighborTable &table() const { return table_; }

    bool control_due(TimeMs now) const { return now >= next_tick_ms_; }
    TimeMs next_tick() const { return next_tick_ms_; }

    /// Runs the step due at `now` and schedules the next one.
    ControlOutput tick(const Vec2 &position, GpsStatus gps, TimeMs now);

    const ImplicitCurve &effective_curve() const { return curve_; }
    double u_r() const { return u_r_; }
    std::optional<double> own_phase() const { return last_good_phase_; }
    std::size_t live_neighbors() const { return live_neighbors_; }
    std::size_t peak_table_rows() const { return peak_rows_; }

private:
    AgentConfig cfg_;
    NeighborTable table_;
    ImplicitCurve curve_;
    std::optional<double> last_good_phase_;
    double u_r_ = 0.0;
    std::size_t live_neighbors_ = 0;
    std::size_t peak_rows_ = 0;
    TimeMs next_tick_ms_;
};

} // namespace gvf
