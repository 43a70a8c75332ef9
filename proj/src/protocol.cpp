#include "gvf/protocol.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

#include <fmt/format.h>

namespace gvf {

void NeighborTable::register_neighbor(AircraftId id) {
    if (id == owner_) {
        throw std::invalid_argument(fmt::format("aircraft {} cannot register itself", id));
    }
    members_.insert(id);
}

void NeighborTable::delete_neighbor(AircraftId id) {
    members_.erase(id);
    rows_.erase(id);
}

bool NeighborTable::on_message(const PhaseMessage &msg, TimeMs now) {
    if (msg.sender == owner_ || !members_.contains(msg.sender)) {
        return false;
    }
    rows_[msg.sender] = NeighborRow{msg.theta, now};
    return true;
}

std::optional<TimeMs> NeighborTable::age(AircraftId id, TimeMs now) const {
    const auto it = rows_.find(id);
    if (it == rows_.end() || now < it->second.last_update) {
        return std::nullopt;
    }
    return now - it->second.last_update;
}

void validate(const AgentConfig &cfg) {
    if (cfg.control_period_ms == 0) {
        throw std::invalid_argument("control period must be positive");
    }
    if (cfg.staleness_timeout_ms == 0) {
        throw std::invalid_argument("staleness timeout must be positive");
    }
    if (!cfg.base_circle.is_circle()) {
        throw std::invalid_argument("formation agents track a circle");
    }
    validate(cfg.consensus);
    validate(cfg.gvf);
}

bool is_live(const NeighborRow &row, TimeMs now, TimeMs timeout) {
    return row.last_update <= now && now - row.last_update <= timeout;
}

ControlOutput control_step(const AgentConfig &cfg, const NeighborTable &table, double own_phase,
                           GpsStatus gps, TimeMs now) {
    double sum = 0.0;
    std::size_t live = 0;
    for (const auto &[id, row] : table.rows()) {
        if (!is_live(row, now, cfg.staleness_timeout_ms)) {
            continue;
        }
        sum += wrap_angle(own_phase - row.theta);
        ++live;
    }

    ControlOutput out{cfg.base_circle, 0.0, 0, std::nullopt};
    out.u_r = cfg.consensus.k_r * circulation_sign(cfg.consensus.circulation) * sum;
    out.live_neighbors = live;
    out.circle = modulated_curve(cfg.base_circle, out.u_r, cfg.consensus);
    if (gps.reliable) {
        out.outgoing = PhaseMessage{cfg.id, own_phase, now};
    }
    return out;
}

Agent::Agent(AgentConfig cfg)
    : cfg_(std::move(cfg)), table_(cfg_.id), curve_(cfg_.base_circle),
      next_tick_ms_(cfg_.control_offset_ms) {
    validate(cfg_);
}

ControlOutput Agent::tick(const Vec2 &position, GpsStatus gps, TimeMs now) {
    next_tick_ms_ = std::max(next_tick_ms_ + cfg_.control_period_ms, now + 1);
    if (gps.reliable) {
        try {
            last_good_phase_ = phase(position, cfg_.base_circle.center());
        } catch (const UndefinedPhaseError &) {
            gps.reliable = false; // no usable phase this tick; treat like a lost fix
        }
    }

    ControlOutput out{cfg_.base_circle, 0.0, 0, std::nullopt};
    if (last_good_phase_) {
        out = control_step(cfg_, table_, *last_good_phase_, gps, now);
    }
    curve_ = out.circle;
    u_r_ = out.u_r;
    live_neighbors_ = out.live_neighbors;
    peak_rows_ = std::max(peak_rows_, table_.size());
    return out;
}

} // namespace gvf
