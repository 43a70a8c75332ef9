// Gain and tick-offset sweep for a formation scenario.
//
//   gvf_calibrate <scenario.yaml> [--out sweep.csv]
//
// For every combination it runs the scenario twice, once on the configured
// link and once on a lossy link (20 % drop, 0-200 ms delay), and records the
// sync time at 0.05 rad plus the largest coordinate reached. Vehicles other
// than the first keep their relative offsets; the sweep shifts the offsets of
// the graph's leaf vehicles against the rest.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "gvf/runner.hpp"
#include "gvf/scenario.hpp"

namespace {

struct Outcome {
    std::optional<double> sync;
    double final_z = 0.0;
    double max_coord = 0.0;
};

Outcome evaluate(const gvf::Scenario &sc) {
    const gvf::TelemetryLog log = gvf::run(sc);
    Outcome o;
    o.sync = gvf::sync_time(log, 0.05);
    o.final_z = gvf::max_abs_phase_error(log.frames.back());
    for (const auto &f : log.frames) {
        for (const auto &v : f.vehicles) {
            o.max_coord = std::max({o.max_coord, std::abs(v.position.x()), std::abs(v.position.y())});
        }
    }
    return o;
}

std::string cell(const std::optional<double> &v) { return v ? fmt::format("{:.2f}", *v) : "none"; }

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Sweep consensus gain, field gain and control-tick offsets"};
    std::string scenario_path;
    std::string out_path;
    std::vector<double> k_e_values{5e-4, 1e-3, 2e-3};
    std::vector<double> k_r_values{4.0, 6.0, 8.0, 10.0, 14.0};
    std::vector<long> offsets{0, 100, 200, 300, 340, 380, 420};
    app.add_option("scenario", scenario_path, "Base scenario")->required();
    app.add_option("--out", out_path, "CSV output (default stdout)");
    app.add_option("--k-e", k_e_values, "Field gains to try");
    app.add_option("--k-r", k_r_values, "Consensus gains to try");
    app.add_option("--leaf-offsets", offsets, "Leaf control offsets to try [ms]");
    CLI11_PARSE(app, argc, argv);

    const gvf::Scenario base = gvf::load_scenario(scenario_path);
    std::vector<gvf::AircraftId> ids;
    for (const auto &v : base.vehicles) {
        ids.push_back(v.id);
    }
    const gvf::FormationGraph graph(ids, base.edges);

    std::ofstream file;
    if (!out_path.empty()) {
        file.open(out_path);
    }
    std::ostream &out = out_path.empty() ? std::cout : file;
    out << "k_e,k_d,k_r,leaf_offset_ms,sync_s,final_max_z,max_coord_m,lossy_sync_s,lossy_final_max_z\n";

    for (double k_e : k_e_values) {
        for (double k_r : k_r_values) {
            for (long offset : offsets) {
                gvf::Scenario sc = base;
                sc.k_e = k_e;
                sc.k_r = k_r;
                for (auto &v : sc.vehicles) {
                    const bool leaf = graph.neighbors(v.id).size() <= 1;
                    v.control_offset_ms = leaf ? static_cast<gvf::TimeMs>(offset) : 0;
                }
                const Outcome perfect = evaluate(sc);

                gvf::Scenario lossy = sc;
                lossy.link.drop_probability = 0.2;
                lossy.link.delay_min_ms = 0;
                lossy.link.delay_max_ms = 200;
                const Outcome degraded = evaluate(lossy);

                out << fmt::format("{},{},{},{},{},{:.4f},{:.1f},{},{:.4f}\n", k_e, sc.k_d, k_r,
                                   offset, cell(perfect.sync), perfect.final_z, perfect.max_coord,
                                   cell(degraded.sync), degraded.final_z);
            }
        }
    }
    return 0;
}
