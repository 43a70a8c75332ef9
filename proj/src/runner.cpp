#include "gvf/runner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <stdexcept>
#include <utility>

#include "gvf/dynamics.hpp"
#include "gvf/guidance.hpp"

namespace gvf {

namespace {

double safe_phase(const Vec2 &p, const Vec2 &center) {
    try {
        return phase(p, center);
    } catch (const UndefinedPhaseError &) {
        return 0.0;
    }
}

bool gps_reliable(const Scenario &sc, AircraftId id, TimeMs now) {
    return std::none_of(sc.gps_outages.begin(), sc.gps_outages.end(), [&](const GpsOutage &g) {
        return g.id == id && g.start_ms <= now && now < g.end_ms;
    });
}

std::set<std::pair<AircraftId, AircraftId>> links_down(const Scenario &sc, TimeMs now) {
    std::set<std::pair<AircraftId, AircraftId>> down;
    for (const LinkOutage &l : sc.link_outages) {
        if (l.start_ms <= now && now < l.end_ms) {
            down.insert({l.from, l.to});
            if (l.both_directions) {
                down.insert({l.to, l.from});
            }
        }
    }
    return down;
}

struct Engine {
    const Scenario &sc;
    FormationGraph graph;
    Network net;
    GvfParams gvf;
    std::vector<Agent> agents; // empty when the path is not a circle
    std::vector<VehicleState> states;
    std::vector<double> applied_yaw_rate;
    std::set<std::pair<AircraftId, AircraftId>> cut;
    TelemetryLog log;

    explicit Engine(const Scenario &scenario)
        : sc(scenario), graph(ids_of(scenario), scenario.edges), net(scenario.link),
          gvf{scenario.k_e, scenario.k_d, scenario.rotation_sense} {
        net.set_trace_enabled(true);
        for (const VehicleSpec &v : sc.vehicles) {
            net.register_vehicle(v.id);
            states.push_back({v.position, wrap_angle(v.yaw), v.speed});
        }
        applied_yaw_rate.assign(states.size(), 0.0);

        if (sc.path.is_circle()) {
            ConsensusParams consensus;
            consensus.k_r = sc.k_r;
            consensus.convention = sc.convention;
            consensus.circulation = sc.rotation_sense;
            consensus.min_radius_factor = sc.min_radius_factor;
            consensus.max_radius_factor = sc.max_radius_factor;
            for (const VehicleSpec &v : sc.vehicles) {
                AgentConfig cfg;
                cfg.id = v.id;
                cfg.control_period_ms = sc.control_period_ms;
                cfg.staleness_timeout_ms = sc.staleness_timeout_ms;
                cfg.control_offset_ms = v.control_offset_ms;
                cfg.consensus = consensus;
                cfg.gvf = gvf;
                cfg.base_circle = sc.path;
                Agent agent(cfg);
                for (AircraftId n : graph.neighbors(v.id)) {
                    agent.table().register_neighbor(n);
                }
                agents.push_back(std::move(agent));
            }
        }
        log.ids = graph.vertices();
        log.edges = graph.edges();
    }

    static std::vector<AircraftId> ids_of(const Scenario &scenario) {
        std::vector<AircraftId> ids;
        for (const VehicleSpec &v : scenario.vehicles) {
            ids.push_back(v.id);
        }
        return ids;
    }

    const ImplicitCurve &tracked_curve(std::size_t i) const {
        return agents.empty() ? sc.path : agents[i].effective_curve();
    }

    void apply_link_schedule(TimeMs now) {
        const auto down = links_down(sc, now);
        for (const auto &link : cut) {
            if (!down.contains(link)) {
                net.restore(link.first, link.second);
            }
        }
        for (const auto &link : down) {
            net.cut(link.first, link.second);
        }
        cut = down;
    }

    void deliver(TimeMs now) {
        for (const Delivery &d : net.deliver_due(now)) {
            agents[graph.index_of(d.recipient)].table().on_message(d.message, now);
        }
    }

    void run_agents(TimeMs now) {
        for (std::size_t i = 0; i < agents.size(); ++i) {
            Agent &agent = agents[i];
            if (!agent.control_due(now)) {
                continue;
            }
            const GpsStatus gps{gps_reliable(sc, agent.id(), now)};
            const ControlOutput out = agent.tick(states[i].position, gps, now);
            if (out.outgoing) {
                for (AircraftId to : agent.table().members()) {
                    net.send(*out.outgoing, agent.id(), to, now);
                }
            }
            AgentRecord rec;
            rec.time_ms = now;
            rec.id = agent.id();
            rec.position = states[i].position;
            rec.yaw = states[i].yaw;
            rec.theta = agent.own_phase().value_or(std::numeric_limits<double>::quiet_NaN());
            rec.u_r = out.u_r;
            rec.radius_eff = out.circle.radius();
            rec.live_neighbors = out.live_neighbors;
            log.agent_records.push_back(rec);
        }
    }

    void step_physics(double dt) {
        for (std::size_t i = 0; i < states.size(); ++i) {
            const double command = yaw_rate_command(tracked_curve(i), gvf, states[i]);
            const double u = saturate_yaw_rate(command, sc.max_bank_rad, states[i].speed, sc.gravity);
            states[i] = step(states[i], u, dt, sc.integrator);
            applied_yaw_rate[i] = u;
        }
    }

    void record_frame(TimeMs now) {
        TelemetryFrame frame;
        frame.time_ms = now;
        PhaseVector phases;
        for (std::size_t i = 0; i < states.size(); ++i) {
            const ImplicitCurve &curve = tracked_curve(i);
            VehicleSample s;
            s.id = sc.vehicles[i].id;
            s.position = states[i].position;
            s.yaw = states[i].yaw;
            s.phase = safe_phase(states[i].position, sc.path.center());
            s.error = level_error(curve, states[i].position);
            s.u_r = agents.empty() ? 0.0 : agents[i].u_r();
            s.radius_eff = curve.is_circle() ? curve.radius() : 0.0;
            s.yaw_rate = applied_yaw_rate[i];
            s.bank = bank_angle(applied_yaw_rate[i], states[i].speed, sc.gravity);
            phases[s.id] = s.phase;
            frame.vehicles.push_back(s);
        }
        const Eigen::VectorXd z = phase_errors(graph, phases);
        frame.z.assign(z.data(), z.data() + z.size());
        log.frames.push_back(std::move(frame));
    }
};

} // namespace

TelemetryLog run(const Scenario &scenario) {
    validate(scenario);
    Engine engine(scenario);

    const TimeMs dt_ms = scenario.physics_dt_ms();
    const double dt = static_cast<double>(dt_ms) / 1000.0;
    const TimeMs steps = scenario.duration_ms() / dt_ms;
    const std::size_t decimation = scenario.telemetry_decimation;

    engine.log.frames.reserve(static_cast<std::size_t>(steps / decimation) + 2);
    engine.record_frame(0);
    for (TimeMs k = 0; k < steps; ++k) {
        const TimeMs now = k * dt_ms;
        if (!engine.agents.empty()) {
            engine.apply_link_schedule(now);
            engine.deliver(now);
            engine.run_agents(now);
        }
        engine.step_physics(dt);
        if ((k + 1) % decimation == 0) {
            engine.record_frame(now + dt_ms);
        }
    }

    TelemetryLog log = std::move(engine.log);
    log.net_trace = engine.net.trace();
    log.messages_sent = engine.net.sent();
    log.messages_dropped = engine.net.dropped();
    log.messages_delivered = engine.net.delivered();
    for (const Agent &a : engine.agents) {
        log.peak_table_rows[a.id()] = a.peak_table_rows();
    }
    return log;
}

double max_abs_phase_error(const TelemetryFrame &frame) {
    double m = 0.0;
    for (double z : frame.z) {
        m = std::max(m, std::abs(z));
    }
    return m;
}

namespace {

template <typename Metric>
std::optional<double> first_time_staying_below(const TelemetryLog &log, double threshold,
                                               Metric metric) {
    if (!(threshold > 0.0)) {
        throw std::invalid_argument("sync threshold must be positive");
    }
    if (log.frames.empty()) {
        return std::nullopt;
    }
    std::size_t first_good = log.frames.size();
    for (std::size_t i = log.frames.size(); i-- > 0;) {
        if (!(metric(log.frames[i]) < threshold)) {
            break;
        }
        first_good = i;
    }
    if (first_good == log.frames.size()) {
        return std::nullopt;
    }
    return static_cast<double>(log.frames[first_good].time_ms) / 1000.0;
}

} // namespace

std::optional<double> sync_time(const TelemetryLog &log, double threshold) {
    return first_time_staying_below(log, threshold, max_abs_phase_error);
}

std::optional<double> edge_sync_time(const TelemetryLog &log, std::size_t edge_index,
                                     double threshold) {
    if (edge_index >= log.edges.size()) {
        throw std::out_of_range("edge index out of range");
    }
    return first_time_staying_below(log, threshold, [edge_index](const TelemetryFrame &f) {
        return std::abs(f.z.at(edge_index));
    });
}

} // namespace gvf
