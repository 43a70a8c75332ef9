#include "gvf/scenario.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

#include "gvf/guidance.hpp"

namespace gvf {

namespace {

constexpr double kDegToRad = kPi / 180.0;

TimeMs seconds_to_ms(double seconds, const char *what) {
    if (!std::isfinite(seconds) || seconds < 0.0) {
        throw ScenarioError(fmt::format("{} must be a nonnegative number of seconds", what));
    }
    return static_cast<TimeMs>(std::llround(seconds * 1000.0));
}

void check_keys(const YAML::Node &node, const std::set<std::string> &allowed, const char *where) {
    for (const auto &kv : node) {
        const auto key = kv.first.as<std::string>();
        if (!allowed.contains(key)) {
            throw ScenarioError(fmt::format("unknown key '{}' in {}", key, where));
        }
    }
}

template <typename T> T required(const YAML::Node &node, const char *key, const char *where) {
    if (!node[key]) {
        throw ScenarioError(fmt::format("missing key '{}' in {}", key, where));
    }
    return node[key].as<T>();
}

template <typename T> T optional_value(const YAML::Node &node, const char *key, T fallback) {
    return node[key] ? node[key].as<T>() : fallback;
}

AircraftId parse_id(const YAML::Node &node, const char *where) {
    const int raw = node.as<int>();
    if (raw < 0 || raw > 255) {
        throw ScenarioError(fmt::format("aircraft id {} in {} does not fit in 8 bits", raw, where));
    }
    return static_cast<AircraftId>(raw);
}

ImplicitCurve parse_path(const YAML::Node &root) {
    if (root["circle"] && root["ellipse"]) {
        throw ScenarioError("scenario may define either 'circle' or 'ellipse', not both");
    }
    try {
        if (const YAML::Node c = root["circle"]) {
            check_keys(c, {"center_x_m", "center_y_m", "radius_m"}, "circle");
            return ImplicitCurve::circle(
                {optional_value(c, "center_x_m", 0.0), optional_value(c, "center_y_m", 0.0)},
                required<double>(c, "radius_m", "circle"));
        }
        if (const YAML::Node e = root["ellipse"]) {
            check_keys(e,
                       {"center_x_m", "center_y_m", "semi_axis_a_m", "semi_axis_b_m",
                        "orientation_deg"},
                       "ellipse");
            return ImplicitCurve::ellipse(
                {optional_value(e, "center_x_m", 0.0), optional_value(e, "center_y_m", 0.0)},
                required<double>(e, "semi_axis_a_m", "ellipse"),
                required<double>(e, "semi_axis_b_m", "ellipse"),
                optional_value(e, "orientation_deg", 0.0) * kDegToRad);
        }
    } catch (const std::invalid_argument &ex) {
        throw ScenarioError(ex.what());
    }
    throw ScenarioError("scenario needs a 'circle' (or 'ellipse') path");
}

Scenario from_yaml(const YAML::Node &root) {
    if (!root.IsMap()) {
        throw ScenarioError("scenario file must be a mapping");
    }
    check_keys(root,
               {"name", "duration_s", "physics_dt_s", "integrator", "telemetry_decimation",
                "circle", "ellipse", "rotation_sense", "convention", "gains", "radius_clamp",
                "max_bank_deg", "gravity_mps2", "protocol", "link", "vehicles", "edges",
                "gps_outages", "link_outages"},
               "scenario");

    Scenario sc;
    sc.name = optional_value<std::string>(root, "name", "");
    sc.duration_s = optional_value(root, "duration_s", sc.duration_s);
    sc.physics_dt_s = optional_value(root, "physics_dt_s", sc.physics_dt_s);
    sc.integrator = integrator_from_string(optional_value<std::string>(root, "integrator", "rk4"));
    sc.telemetry_decimation = optional_value<std::size_t>(root, "telemetry_decimation", 1);
    sc.path = parse_path(root);
    sc.rotation_sense = rotation_sense_from_string(
        optional_value<std::string>(root, "rotation_sense", to_string(sc.rotation_sense)));
    sc.convention = radius_convention_from_string(
        optional_value<std::string>(root, "convention", to_string(sc.convention)));
    sc.max_bank_rad = optional_value(root, "max_bank_deg", 45.0) * kDegToRad;
    sc.gravity = optional_value(root, "gravity_mps2", sc.gravity);

    if (const YAML::Node g = root["gains"]) {
        check_keys(g, {"k_e", "k_d", "k_r"}, "gains");
        sc.k_e = optional_value(g, "k_e", sc.k_e);
        sc.k_d = optional_value(g, "k_d", sc.k_d);
        sc.k_r = optional_value(g, "k_r", sc.k_r);
    }
    if (const YAML::Node c = root["radius_clamp"]) {
        check_keys(c, {"min_factor", "max_factor"}, "radius_clamp");
        sc.min_radius_factor = optional_value(c, "min_factor", sc.min_radius_factor);
        sc.max_radius_factor = optional_value(c, "max_factor", sc.max_radius_factor);
    }
    if (const YAML::Node p = root["protocol"]) {
        check_keys(p, {"control_period_ms", "staleness_timeout_ms"}, "protocol");
        sc.control_period_ms = optional_value(p, "control_period_ms", sc.control_period_ms);
        sc.staleness_timeout_ms = optional_value(p, "staleness_timeout_ms", sc.staleness_timeout_ms);
    }
    if (const YAML::Node l = root["link"]) {
        check_keys(l, {"delay_min_ms", "delay_max_ms", "drop_probability", "seed"}, "link");
        sc.link.delay_min_ms = optional_value<TimeMs>(l, "delay_min_ms", 0);
        sc.link.delay_max_ms = optional_value<TimeMs>(l, "delay_max_ms", sc.link.delay_min_ms);
        sc.link.drop_probability = optional_value(l, "drop_probability", 0.0);
        sc.link.seed = optional_value<std::uint64_t>(l, "seed", 0);
    }

    const YAML::Node vehicles = root["vehicles"];
    if (!vehicles || !vehicles.IsSequence()) {
        throw ScenarioError("scenario needs a 'vehicles' list");
    }
    for (const auto &v : vehicles) {
        check_keys(v, {"id", "x_m", "y_m", "heading_deg", "speed_mps", "control_offset_ms"},
                   "vehicle");
        VehicleSpec spec;
        if (!v["id"]) {
            throw ScenarioError("vehicle without 'id'");
        }
        spec.id = parse_id(v["id"], "vehicle");
        spec.position = {required<double>(v, "x_m", "vehicle"), required<double>(v, "y_m", "vehicle")};
        spec.yaw = wrap_angle(optional_value(v, "heading_deg", 0.0) * kDegToRad);
        spec.speed = optional_value(v, "speed_mps", spec.speed);
        spec.control_offset_ms = optional_value<TimeMs>(v, "control_offset_ms", 0);
        sc.vehicles.push_back(spec);
    }

    if (const YAML::Node edges = root["edges"]) {
        for (const auto &e : edges) {
            if (!e.IsSequence() || e.size() != 2) {
                throw ScenarioError("each edge must be a [tail, head] pair");
            }
            sc.edges.push_back({parse_id(e[0], "edge"), parse_id(e[1], "edge")});
        }
    }
    if (const YAML::Node outages = root["gps_outages"]) {
        for (const auto &o : outages) {
            check_keys(o, {"id", "start_s", "end_s"}, "gps_outages");
            GpsOutage g;
            g.id = parse_id(required<YAML::Node>(o, "id", "gps_outages"), "gps_outages");
            g.start_ms = seconds_to_ms(optional_value(o, "start_s", 0.0), "gps outage start");
            if (o["end_s"]) {
                g.end_ms = seconds_to_ms(o["end_s"].as<double>(), "gps outage end");
            }
            sc.gps_outages.push_back(g);
        }
    }
    if (const YAML::Node outages = root["link_outages"]) {
        for (const auto &o : outages) {
            check_keys(o, {"from", "to", "start_s", "end_s", "both_directions"}, "link_outages");
            LinkOutage l;
            l.from = parse_id(required<YAML::Node>(o, "from", "link_outages"), "link_outages");
            l.to = parse_id(required<YAML::Node>(o, "to", "link_outages"), "link_outages");
            l.start_ms = seconds_to_ms(optional_value(o, "start_s", 0.0), "link outage start");
            if (o["end_s"]) {
                l.end_ms = seconds_to_ms(o["end_s"].as<double>(), "link outage end");
            }
            l.both_directions = optional_value(o, "both_directions", true);
            sc.link_outages.push_back(l);
        }
    }
    return sc;
}

} // namespace

TimeMs Scenario::duration_ms() const { return seconds_to_ms(duration_s, "duration"); }

TimeMs Scenario::physics_dt_ms() const { return seconds_to_ms(physics_dt_s, "physics_dt"); }

void validate(const Scenario &sc) {
    if (sc.vehicles.empty()) {
        throw ScenarioError("scenario has no vehicles");
    }
    if (!(sc.duration_s > 0.0) || !std::isfinite(sc.duration_s)) {
        throw ScenarioError("duration_s must be positive");
    }
    if (!(sc.physics_dt_s > 0.0) || !std::isfinite(sc.physics_dt_s)) {
        throw ScenarioError("physics_dt_s must be positive");
    }
    const double dt_ms = sc.physics_dt_s * 1000.0;
    if (std::abs(dt_ms - std::round(dt_ms)) > 1e-9 || sc.physics_dt_ms() == 0) {
        throw ScenarioError("physics_dt_s must be a whole number of milliseconds");
    }
    if (sc.telemetry_decimation == 0) {
        throw ScenarioError("telemetry_decimation must be at least 1");
    }
    if (!(sc.k_e > 0.0) || !(sc.k_d > 0.0) || !(sc.k_r > 0.0)) {
        throw ScenarioError(
            fmt::format("gains must be positive (k_e={}, k_d={}, k_r={})", sc.k_e, sc.k_d, sc.k_r));
    }
    if (!(sc.min_radius_factor > 0.0) || !(sc.max_radius_factor > sc.min_radius_factor)) {
        throw ScenarioError("radius clamp must satisfy 0 < min_factor < max_factor");
    }
    if (!(sc.max_bank_rad > 0.0) || !(sc.max_bank_rad < kPi / 2.0)) {
        throw ScenarioError("max_bank_deg must lie in (0, 90)");
    }
    if (!(sc.gravity > 0.0)) {
        throw ScenarioError("gravity_mps2 must be positive");
    }
    if (sc.control_period_ms == 0 || sc.staleness_timeout_ms == 0) {
        throw ScenarioError("control period and staleness timeout must be positive");
    }
    try {
        validate(sc.link);
    } catch (const std::invalid_argument &ex) {
        throw ScenarioError(ex.what());
    }

    std::set<AircraftId> ids;
    for (const VehicleSpec &v : sc.vehicles) {
        if (!ids.insert(v.id).second) {
            throw ScenarioError(fmt::format("duplicate vehicle id {}", v.id));
        }
        if (!(v.speed > 0.0) || !std::isfinite(v.speed)) {
            throw ScenarioError(fmt::format("vehicle {} needs a positive speed", v.id));
        }
        if (!v.position.allFinite() || !std::isfinite(v.yaw)) {
            throw ScenarioError(fmt::format("vehicle {} has a non-finite initial state", v.id));
        }
        if ((v.position - sc.path.center()).norm() < kSingularGradientNorm) {
            throw ScenarioError(fmt::format("vehicle {} starts at the path center", v.id));
        }
    }
    if (!sc.edges.empty() && !sc.path.is_circle()) {
        throw ScenarioError("formation edges require a circular path");
    }
    std::vector<AircraftId> vertices;
    for (const VehicleSpec &v : sc.vehicles) {
        vertices.push_back(v.id);
    }
    const FormationGraph graph(vertices, sc.edges); // throws ScenarioError

    for (const GpsOutage &g : sc.gps_outages) {
        if (!ids.contains(g.id) || g.end_ms < g.start_ms) {
            throw ScenarioError(fmt::format("invalid gps outage for vehicle {}", g.id));
        }
    }
    for (const LinkOutage &l : sc.link_outages) {
        if (!ids.contains(l.from) || !ids.contains(l.to) || l.from == l.to ||
            l.end_ms < l.start_ms) {
            throw ScenarioError(fmt::format("invalid link outage {} -> {}", l.from, l.to));
        }
    }
}

std::vector<std::string> scenario_warnings(const Scenario &sc) {
    std::vector<std::string> out;
    std::vector<AircraftId> vertices;
    for (const VehicleSpec &v : sc.vehicles) {
        vertices.push_back(v.id);
    }
    const FormationGraph graph(vertices, sc.edges);
    if (!graph.is_acyclic()) {
        out.emplace_back("formation graph contains a cycle; rendezvous is not guaranteed");
    }
    return out;
}

Scenario parse_scenario(const std::string &yaml_text) {
    Scenario sc;
    try {
        sc = from_yaml(YAML::Load(yaml_text));
    } catch (const YAML::Exception &ex) {
        throw ScenarioError(fmt::format("scenario parse error: {}", ex.what()));
    }
    validate(sc);
    return sc;
}

Scenario load_scenario(const std::filesystem::path &file) {
    std::ifstream in(file);
    if (!in) {
        throw ScenarioError(fmt::format("cannot open scenario file '{}'", file.string()));
    }
    std::stringstream buf;
    buf << in.rdbuf();
    Scenario sc = parse_scenario(buf.str());
    if (sc.name.empty()) {
        sc.name = file.stem().string();
    }
    return sc;
}

} // namespace gvf
