#include "gvf/netsim.hpp"

#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace gvf {

void validate(const LinkModel &link) {
    if (link.delay_max_ms < link.delay_min_ms) {
        throw std::invalid_argument("link delay range is empty (max < min)");
    }
    if (!(link.drop_probability >= 0.0) || !(link.drop_probability <= 1.0)) {
        throw std::invalid_argument(
            fmt::format("drop probability must lie in [0, 1], got {}", link.drop_probability));
    }
}

Network::Network(LinkModel link) : link_(link), rng_(link.seed) { validate(link_); }

void Network::register_vehicle(AircraftId id) { registered_.insert(id); }

void Network::cut(AircraftId from, AircraftId to) { cut_links_.insert({from, to}); }

void Network::restore(AircraftId from, AircraftId to) { cut_links_.erase({from, to}); }

bool Network::is_cut(AircraftId from, AircraftId to) const {
    return cut_links_.contains({from, to});
}

double Network::uniform01() {
    // Top 53 bits of the engine output; independent of the standard library's
    // distribution implementations so traces match across toolchains.
    return static_cast<double>(rng_() >> 11) * 0x1.0p-53;
}

void Network::record(TimeMs time, LinkEvent event, AircraftId from, AircraftId to, double theta) {
    if (trace_enabled_) {
        trace_.push_back({time, event, from, to, theta});
    }
}

std::optional<TimeMs> Network::send(const PhaseMessage &msg, AircraftId from, AircraftId to,
                                    TimeMs now) {
    if (!is_registered(from) || !is_registered(to)) {
        throw UnknownIdError(fmt::format("send {} -> {}: endpoint not registered", from, to));
    }
    if (!std::isfinite(msg.theta)) {
        throw std::invalid_argument("send: message phase must be finite");
    }
    ++sent_;
    record(now, LinkEvent::send, from, to, msg.theta);

    if (is_cut(from, to) || uniform01() < link_.drop_probability) {
        ++dropped_;
        record(now, LinkEvent::drop, from, to, msg.theta);
        return std::nullopt;
    }

    TimeMs delay = link_.delay_min_ms;
    if (link_.delay_max_ms > link_.delay_min_ms) {
        const TimeMs span = link_.delay_max_ms - link_.delay_min_ms + 1;
        delay += static_cast<TimeMs>(uniform01() * static_cast<double>(span));
    }
    const TimeMs due = now + delay;
    queue_.emplace(std::make_pair(due, next_seq_++), Pending{from, to, msg});
    return due;
}

std::vector<Delivery> Network::deliver_due(TimeMs now) {
    std::vector<Delivery> out;
    auto it = queue_.begin();
    while (it != queue_.end() && it->first.first <= now) {
        const Pending &p = it->second;
        out.push_back({p.to, p.message});
        ++delivered_;
        record(now, LinkEvent::deliver, p.from, p.to, p.message.theta);
        it = queue_.erase(it);
    }
    return out;
}

std::string to_string(LinkEvent event) {
    switch (event) {
    case LinkEvent::send:
        return "SEND";
    case LinkEvent::drop:
        return "DROP";
    case LinkEvent::deliver:
        return "DELIVER";
    }
    return "?";
}

std::string format_trace_line(const TraceEntry &entry) {
    return fmt::format("{},{},{},{},{:.9g}", entry.time, to_string(entry.event),
                       static_cast<int>(entry.from), static_cast<int>(entry.to), entry.theta);
}

void write_trace(std::ostream &out, std::span<const TraceEntry> entries) {
    for (const TraceEntry &e : entries) {
        out << format_trace_line(e) << '\n';
    }
}

} // namespace gvf
