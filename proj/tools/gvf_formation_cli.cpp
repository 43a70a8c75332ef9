// gvf-formation: run formation scenarios, extract metrics, dump guidance fields.
//
//   gvf-formation simulate <scenario.yaml> [--out log.csv] [--svg traj.svg] [--seed N] [--duration S]
//   gvf-formation metrics <log.csv> [--threshold RAD]
//   gvf-formation field <scenario.yaml> --grid WxH [--extent M] [--out field.csv]

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "gvf/runner.hpp"
#include "gvf/scenario.hpp"
#include "gvf/telemetry.hpp"

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitFailure = 1;

std::ofstream open_output(const std::string &path) {
    std::ofstream out(path);
    if (!out) {
        throw gvf::Error(fmt::format("cannot write '{}'", path));
    }
    return out;
}

std::string format_optional(const std::optional<double> &v) {
    return v ? fmt::format("{:.2f}", *v) : std::string("none");
}

// Accepts "40x30", "40X30" and "40×30".
std::pair<std::size_t, std::size_t> parse_grid(std::string text) {
    const std::string times = "\xC3\x97";
    if (const auto pos = text.find(times); pos != std::string::npos) {
        text.replace(pos, times.size(), "x");
    }
    const auto pos = text.find_first_of("xX");
    if (pos == std::string::npos) {
        throw gvf::ScenarioError(fmt::format("grid must look like WxH, got '{}'", text));
    }
    try {
        const long w = std::stol(text.substr(0, pos));
        const long h = std::stol(text.substr(pos + 1));
        if (w < 1 || h < 1) {
            throw gvf::ScenarioError("grid dimensions must be positive");
        }
        return {static_cast<std::size_t>(w), static_cast<std::size_t>(h)};
    } catch (const std::logic_error &) {
        throw gvf::ScenarioError(fmt::format("grid must look like WxH, got '{}'", text));
    }
}

struct SimulateArgs {
    std::string scenario;
    std::string out;
    std::string svg;
    std::string agents;
    std::string trace;
    std::optional<std::uint64_t> seed;
    std::optional<double> duration;
    double threshold = 0.05;
};

int simulate(const SimulateArgs &args) {
    gvf::Scenario sc = gvf::load_scenario(args.scenario);
    if (args.seed) {
        sc.link.seed = *args.seed;
    }
    if (args.duration) {
        sc.duration_s = *args.duration;
    }
    gvf::validate(sc);
    for (const auto &w : gvf::scenario_warnings(sc)) {
        std::cerr << "warning: " << w << '\n';
    }

    const auto t0 = std::chrono::steady_clock::now();
    const gvf::TelemetryLog log = gvf::run(sc);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    if (!args.out.empty()) {
        auto f = open_output(args.out);
        gvf::write_telemetry_csv(f, log);
    }
    if (!args.svg.empty()) {
        auto f = open_output(args.svg);
        gvf::write_svg(f, log, sc.path);
    }
    if (!args.agents.empty()) {
        auto f = open_output(args.agents);
        gvf::write_agent_dump(f, log.agent_records);
    }
    if (!args.trace.empty()) {
        auto f = open_output(args.trace);
        gvf::write_trace(f, log.net_trace);
    }

    const double final_z = log.frames.empty() ? 0.0 : gvf::max_abs_phase_error(log.frames.back());
    std::cout << fmt::format("scenario: {}\n", sc.name);
    std::cout << fmt::format("vehicles: {}  edges: {}  duration: {:.1f} s  frames: {}\n",
                             sc.vehicles.size(), sc.edges.size(), sc.duration_s, log.frames.size());
    std::cout << fmt::format("sync_time(|z| < {}): {} s\n", args.threshold,
                             format_optional(gvf::sync_time(log, args.threshold)));
    std::cout << fmt::format("final max|z|: {:.6g} rad\n", final_z);
    std::cout << fmt::format("messages: sent {} dropped {} delivered {}\n", log.messages_sent,
                             log.messages_dropped, log.messages_delivered);
    std::cout << fmt::format("wall time: {:.3f} s\n", wall);
    return 0;
}

int metrics(const std::string &path, double threshold) {
    std::ifstream in(path);
    if (!in) {
        throw gvf::Error(fmt::format("cannot open '{}'", path));
    }
    const gvf::TelemetryLog log = gvf::read_telemetry_csv(in);
    const double final_z = log.frames.empty() ? 0.0 : gvf::max_abs_phase_error(log.frames.back());
    std::cout << fmt::format("sync_time_s: {}\n", format_optional(gvf::sync_time(log, threshold)));
    std::cout << fmt::format("final_max_abs_z_rad: {:.9g}\n", final_z);
    return 0;
}

int field(const std::string &scenario, const std::string &grid_text, std::optional<double> extent,
          const std::string &out_path) {
    const gvf::Scenario sc = gvf::load_scenario(scenario);
    const auto [w, h] = parse_grid(grid_text);
    const double half = extent.value_or(
        2.0 * (sc.path.is_circle() ? sc.path.radius()
                                   : std::max(sc.path.semi_axis_a(), sc.path.semi_axis_b())));
    gvf::FieldGrid grid;
    grid.columns = w;
    grid.rows = h;
    grid.min_corner = sc.path.center() - gvf::Vec2(half, half);
    grid.max_corner = sc.path.center() + gvf::Vec2(half, half);
    const gvf::GvfParams params{sc.k_e, sc.k_d, sc.rotation_sense};
    if (out_path.empty()) {
        gvf::write_field_samples(std::cout, sc.path, params, grid);
    } else {
        auto f = open_output(out_path);
        gvf::write_field_samples(f, sc.path, params, grid);
    }
    return 0;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Guidance-vector-field circular formation simulator"};
    app.require_subcommand(1);

    SimulateArgs sim;
    auto *simulate_cmd = app.add_subcommand("simulate", "Run a scenario");
    simulate_cmd->add_option("scenario", sim.scenario, "Scenario YAML file")->required();
    simulate_cmd->add_option("--out", sim.out, "Telemetry CSV output");
    simulate_cmd->add_option("--svg", sim.svg, "SVG trajectory plot output");
    simulate_cmd->add_option("--agents", sim.agents, "Per-control-tick agent dump CSV");
    simulate_cmd->add_option("--trace", sim.trace, "Network event trace output");
    simulate_cmd->add_option("--seed", sim.seed, "Override the link RNG seed");
    simulate_cmd->add_option("--duration", sim.duration, "Override the duration [s]");
    simulate_cmd->add_option("--threshold", sim.threshold, "Sync threshold [rad]");

    std::string metrics_log;
    double metrics_threshold = 0.05;
    auto *metrics_cmd = app.add_subcommand("metrics", "Sync metrics of a telemetry CSV");
    metrics_cmd->add_option("log", metrics_log, "Telemetry CSV")->required();
    metrics_cmd->add_option("--threshold", metrics_threshold, "Sync threshold [rad]");

    std::string field_scenario;
    std::string field_grid;
    std::optional<double> field_extent;
    std::string field_out;
    auto *field_cmd = app.add_subcommand("field", "Sample the guidance vector field on a grid");
    field_cmd->add_option("scenario", field_scenario, "Scenario YAML file")->required();
    field_cmd->add_option("--grid", field_grid, "Grid size WxH")->required();
    field_cmd->add_option("--extent", field_extent, "Half-width of the sampled square [m]");
    field_cmd->add_option("--out", field_out, "Output CSV (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*simulate_cmd) {
            return simulate(sim);
        }
        if (*metrics_cmd) {
            return metrics(metrics_log, metrics_threshold);
        }
        if (*field_cmd) {
            return field(field_scenario, field_grid, field_extent, field_out);
        }
    } catch (const gvf::ScenarioError &ex) {
        std::cerr << "validation error: " << ex.what() << '\n';
        return kExitValidation;
    } catch (const std::exception &ex) {
        std::cerr << "error: " << ex.what() << '\n';
        return kExitFailure;
    }
    return 0;
}
