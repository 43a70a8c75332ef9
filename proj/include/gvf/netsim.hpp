// Simulated air-to-air transport: per-link delay, loss, and a delivery queue.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gvf/types.hpp"

namespace gvf {

struct PhaseMessage {
    AircraftId sender = 0;
    double theta = 0.0; // [rad]
    TimeMs sent_at = 0;
};

/// Every link shares one model; delay is drawn uniformly from [min, max].
struct LinkModel {
    TimeMs delay_min_ms = 0;
    TimeMs delay_max_ms = 0;
    double drop_probability = 0.0; // [0, 1]
    std::uint64_t seed = 0;
};

/// @throws std::invalid_argument on an empty delay range or a probability outside [0, 1]
void validate(const LinkModel &link);

enum class LinkEvent { send, drop, deliver };

struct TraceEntry {
    TimeMs time = 0;
    LinkEvent event = LinkEvent::send;
    AircraftId from = 0;
    AircraftId to = 0;
    double theta = 0.0;
};

struct Delivery {
    AircraftId recipient = 0;
    PhaseMessage message;
};

/**
 * @brief Deterministic discrete-event message transport.
 *
 * Broadcasts are modeled by the caller as unicast fan-out. Each send draws
 * from one seeded generator in call order, so the whole delivery trace is a
 * function of (seed, sequence of sends). The transport never inspects the
 * payload beyond requiring a finite phase.
 */
class Network {
public:
    explicit Network(LinkModel link);

    void register_vehicle(AircraftId id);
    bool is_registered(AircraftId id) const { return registered_.contains(id); }

    /// Takes the directed link from -> to down (every send on it is dropped).
    void cut(AircraftId from, AircraftId to);
    void restore(AircraftId from, AircraftId to);
    bool is_cut(AircraftId from, AircraftId to) const;

    /**
     * Schedules delivery at now + sampled delay. Returns the delivery time,
     * or nullopt when the message is dropped.
     *
     * @throws UnknownIdError if either endpoint is not registered
     */
    std::optional<TimeMs> send(const PhaseMessage &msg, AircraftId from, AircraftId to, TimeMs now);

    /// Removes and returns every entry due at or before `now`, ordered by
    /// (delivery time, insertion order).
    std::vector<Delivery> deliver_due(TimeMs now);

    std::size_t sent() const { return sent_; }
    std::size_t dropped() const { return dropped_; }
    std::size_t delivered() const { return delivered_; }
    std::size_t pending() const { return queue_.size(); }

    void set_trace_enabled(bool enabled) { trace_enabled_ = enabled; }
    const std::vector<TraceEntry> &trace() const { return trace_; }

    const LinkModel &link() const { return link_; }

private:
    struct Pending {
        AircraftId from;
        AircraftId to;
        PhaseMessage message;
    };

    double uniform01();
    void record(TimeMs time, LinkEvent event, AircraftId from, AircraftId to, double theta);

    LinkModel link_;
    std::mt19937_64 rng_;
    std::set<AircraftId> registered_;
    std::set<std::pair<AircraftId, AircraftId>> cut_links_;
    std::map<std::pair<TimeMs, std::uint64_t>, Pending> queue_;
    std::uint64_t next_seq_ = 0;
    std::size_t sent_ = 0;
    std::size_t dropped_ = 0;
    std::size_t delivered_ = 0;
    bool trace_enabled_ = false;
    std::vector<TraceEntry> trace_;
};

std::string to_string(LinkEvent event);

/// `time_ms,event,from,to,theta_rad` with theta at 9 significant digits.
/// write_trace emits one such line per event and no header.
std::string format_trace_line(const TraceEntry &entry);

void write_trace(std::ostream &out, std::span<const TraceEntry> entries);

} // namespace gvf
