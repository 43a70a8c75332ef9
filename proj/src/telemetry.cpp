#include "gvf/telemetry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

namespace gvf {

namespace {

constexpr std::size_t kVehicleColumns = 8;

std::vector<std::string> split_csv(const std::string &line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) {
        out.push_back(cell);
    }
    if (!line.empty() && line.back() == ',') {
        out.emplace_back();
    }
    return out;
}

double parse_double(const std::string &text) {
    char *end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (end == text.c_str() || *end != '\0') {
        throw Error(fmt::format("telemetry: cannot parse number '{}'", text));
    }
    return v;
}

AircraftId parse_id(const std::string &text) {
    const double v = parse_double(text);
    if (v < 0.0 || v > 255.0 || v != std::floor(v)) {
        throw Error(fmt::format("telemetry: bad aircraft id '{}'", text));
    }
    return static_cast<AircraftId>(v);
}

// Splits "z_3_4_rad" into {"z", "3", "4", "rad"}.
std::vector<std::string> split_underscore(const std::string &text) {
    std::vector<std::string> out;
    std::string part;
    std::istringstream ss(text);
    while (std::getline(ss, part, '_')) {
        out.push_back(part);
    }
    return out;
}

} // namespace

void write_telemetry_csv(std::ostream &out, const TelemetryLog &log) {
    std::string header = "time_ms";
    for (AircraftId raw : log.ids) {
        const int id = raw;
        header += fmt::format(",x_{0}_m,y_{0}_m,psi_{0}_rad,theta_{0}_rad,e_{0},u_r_{0},"
                              "radius_eff_{0}_m,bank_{0}_rad",
                              id);
    }
    for (const Edge &e : log.edges) {
        header += fmt::format(",z_{}_{}_rad", static_cast<int>(e.tail), static_cast<int>(e.head));
    }
    out << header << '\n';

    fmt::memory_buffer row;
    for (const TelemetryFrame &f : log.frames) {
        row.clear();
        fmt::format_to(std::back_inserter(row), "{}", f.time_ms);
        for (const VehicleSample &s : f.vehicles) {
            fmt::format_to(std::back_inserter(row), ",{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}",
                           s.position.x(), s.position.y(), s.yaw, s.phase, s.error, s.u_r,
                           s.radius_eff, s.bank);
        }
        for (double z : f.z) {
            fmt::format_to(std::back_inserter(row), ",{:.17g}", z);
        }
        row.push_back('\n');
        out.write(row.data(), static_cast<std::streamsize>(row.size()));
    }
}

TelemetryLog read_telemetry_csv(std::istream &in) {
    std::string line;
    if (!std::getline(in, line)) {
        throw Error("telemetry: empty file");
    }
    const auto header = split_csv(line);
    if (header.empty() || header[0] != "time_ms") {
        throw Error("telemetry: header must start with time_ms");
    }

    TelemetryLog log;
    std::size_t col = 1;
    while (col < header.size() && header[col].rfind("x_", 0) == 0) {
        const auto parts = split_underscore(header[col]);
        if (parts.size() != 3 || col + kVehicleColumns > header.size()) {
            throw Error(fmt::format("telemetry: bad vehicle column '{}'", header[col]));
        }
        log.ids.push_back(parse_id(parts[1]));
        col += kVehicleColumns;
    }
    for (; col < header.size(); ++col) {
        const auto parts = split_underscore(header[col]);
        if (parts.size() != 4 || parts[0] != "z") {
            throw Error(fmt::format("telemetry: unexpected column '{}'", header[col]));
        }
        log.edges.push_back({parse_id(parts[1]), parse_id(parts[2])});
    }

    const std::size_t expected = 1 + kVehicleColumns * log.ids.size() + log.edges.size();
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        const auto cells = split_csv(line);
        if (cells.size() != expected) {
            throw Error(fmt::format("telemetry: row has {} cells, expected {}", cells.size(), expected));
        }
        TelemetryFrame f;
        f.time_ms = static_cast<TimeMs>(parse_double(cells[0]));
        std::size_t c = 1;
        for (AircraftId id : log.ids) {
            VehicleSample s;
            s.id = id;
            s.position = {parse_double(cells[c]), parse_double(cells[c + 1])};
            s.yaw = parse_double(cells[c + 2]);
            s.phase = parse_double(cells[c + 3]);
            s.error = parse_double(cells[c + 4]);
            s.u_r = parse_double(cells[c + 5]);
            s.radius_eff = parse_double(cells[c + 6]);
            s.bank = parse_double(cells[c + 7]);
            f.vehicles.push_back(s);
            c += kVehicleColumns;
        }
        for (std::size_t k = 0; k < log.edges.size(); ++k) {
            f.z.push_back(parse_double(cells[c + k]));
        }
        log.frames.push_back(std::move(f));
    }
    return log;
}

void write_agent_dump(std::ostream &out, std::span<const AgentRecord> records) {
    out << "time_ms,id,x_m,y_m,psi_rad,theta_rad,u_r,radius_eff_m,n_live_neighbors\n";
    for (const AgentRecord &r : records) {
        out << fmt::format("{},{},{:.9g},{:.9g},{:.9g},{:.9g},{:.9g},{:.9g},{}\n", r.time_ms,
                           static_cast<int>(r.id), r.position.x(), r.position.y(), r.yaw, r.theta,
                           r.u_r, r.radius_eff, r.live_neighbors);
    }
}

void write_field_samples(std::ostream &out, const ImplicitCurve &curve, const GvfParams &params,
                         const FieldGrid &grid) {
    out << "x_m,y_m,e,dir_x,dir_y\n";
    const std::size_t nx = std::max<std::size_t>(grid.columns, 1);
    const std::size_t ny = std::max<std::size_t>(grid.rows, 1);
    const Vec2 span = grid.max_corner - grid.min_corner;
    for (std::size_t j = 0; j < ny; ++j) {
        for (std::size_t i = 0; i < nx; ++i) {
            const double fx = nx == 1 ? 0.5 : static_cast<double>(i) / static_cast<double>(nx - 1);
            const double fy = ny == 1 ? 0.5 : static_cast<double>(j) / static_cast<double>(ny - 1);
            const Vec2 p = grid.min_corner + Vec2(fx * span.x(), fy * span.y());
            try {
                const FieldSample f = build_field(curve, params, p);
                out << fmt::format("{:.9g},{:.9g},{:.9g},{:.9g},{:.9g}\n", p.x(), p.y(), f.error,
                                   f.desired_direction.x(), f.desired_direction.y());
            } catch (const SingularPointError &) {
                // the center has no direction
            }
        }
    }
}

void write_svg(std::ostream &out, const TelemetryLog &log, const ImplicitCurve &path) {
    static constexpr std::array<const char *, 8> kColors = {
        "#d62728", "#1f77b4", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf"};

    const double extent = path.is_circle() ? path.radius()
                                           : std::max(path.semi_axis_a(), path.semi_axis_b());
    double min_x = path.center().x() - extent;
    double max_x = path.center().x() + extent;
    double min_y = path.center().y() - extent;
    double max_y = path.center().y() + extent;
    for (const TelemetryFrame &f : log.frames) {
        for (const VehicleSample &s : f.vehicles) {
            min_x = std::min(min_x, s.position.x());
            max_x = std::max(max_x, s.position.x());
            min_y = std::min(min_y, s.position.y());
            max_y = std::max(max_y, s.position.y());
        }
    }
    const double size_px = 800.0;
    const double margin = 20.0;
    const double scale = (size_px - 2.0 * margin) / std::max({max_x - min_x, max_y - min_y, 1e-9});
    auto sx = [&](double x) { return margin + (x - min_x) * scale; };
    auto sy = [&](double y) { return margin + (max_y - y) * scale; };

    out << fmt::format("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0:.0f}\" height=\"{0:.0f}\" "
                       "viewBox=\"0 0 {0:.0f} {0:.0f}\">\n",
                       size_px);
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    const double cx = sx(path.center().x());
    const double cy = sy(path.center().y());
    if (path.is_circle()) {
        out << fmt::format("<circle class=\"base\" cx=\"{:.3f}\" cy=\"{:.3f}\" r=\"{:.3f}\" "
                           "fill=\"none\" stroke=\"black\" stroke-width=\"1.5\"/>\n",
                           cx, cy, path.radius() * scale);
    } else {
        const double deg = -path.orientation() * 180.0 / kPi;
        out << fmt::format("<ellipse class=\"base\" cx=\"{:.3f}\" cy=\"{:.3f}\" rx=\"{:.3f}\" "
                           "ry=\"{:.3f}\" transform=\"rotate({:.3f} {:.3f} {:.3f})\" fill=\"none\" "
                           "stroke=\"black\" stroke-width=\"1.5\"/>\n",
                           cx, cy, path.semi_axis_a() * scale, path.semi_axis_b() * scale, deg, cx, cy);
    }

    if (log.frames.empty()) {
        out << "</svg>\n";
        return;
    }
    const TelemetryFrame &last = log.frames.back();
    for (std::size_t i = 0; i < log.ids.size(); ++i) {
        const char *color = kColors[i % kColors.size()];
        out << fmt::format("<polyline class=\"vehicle\" data-id=\"{}\" fill=\"none\" stroke=\"{}\" "
                           "stroke-width=\"1\" points=\"",
                           static_cast<int>(log.ids[i]), color);
        for (const TelemetryFrame &f : log.frames) {
            const Vec2 &p = f.vehicles[i].position;
            out << fmt::format("{:.2f},{:.2f} ", sx(p.x()), sy(p.y()));
        }
        out << "\"/>\n";
        if (path.is_circle() && last.vehicles[i].radius_eff > 0.0) {
            out << fmt::format("<circle class=\"effective\" data-id=\"{}\" cx=\"{:.3f}\" cy=\"{:.3f}\" "
                               "r=\"{:.3f}\" fill=\"none\" stroke=\"{}\" stroke-dasharray=\"4 3\"/>\n",
                               static_cast<int>(log.ids[i]), cx, cy,
                               last.vehicles[i].radius_eff * scale, color);
        }
    }
    out << "</svg>\n";
}

} // namespace gvf
