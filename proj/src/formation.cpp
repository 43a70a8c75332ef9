#include "gvf/formation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>
#include <utility>

#include <fmt/format.h>

namespace gvf {

FormationGraph::FormationGraph(std::vector<AircraftId> vertices, std::vector<Edge> edges)
    : vertices_(std::move(vertices)), edges_(std::move(edges)) {
    std::set<AircraftId> seen;
    for (AircraftId v : vertices_) {
        if (!seen.insert(v).second) {
            throw ScenarioError(fmt::format("duplicate vertex id {}", v));
        }
    }
    std::set<std::pair<AircraftId, AircraftId>> undirected;
    for (const Edge &e : edges_) {
        if (e.tail == e.head) {
            throw ScenarioError(fmt::format("self-loop on vertex {}", e.tail));
        }
        if (!seen.contains(e.tail) || !seen.contains(e.head)) {
            throw ScenarioError(fmt::format("edge ({}, {}) references an unknown vertex", e.tail, e.head));
        }
        const auto key = std::minmax(e.tail, e.head);
        if (!undirected.insert(key).second) {
            throw ScenarioError(fmt::format("duplicate edge ({}, {})", e.tail, e.head));
        }
    }
}

bool FormationGraph::contains(AircraftId id) const {
    return std::find(vertices_.begin(), vertices_.end(), id) != vertices_.end();
}

std::size_t FormationGraph::index_of(AircraftId id) const {
    const auto it = std::find(vertices_.begin(), vertices_.end(), id);
    if (it == vertices_.end()) {
        throw UnknownIdError(fmt::format("vertex {} not in graph", id));
    }
    return static_cast<std::size_t>(it - vertices_.begin());
}

std::vector<AircraftId> FormationGraph::neighbors(AircraftId id) const {
    std::vector<AircraftId> out;
    for (const Edge &e : edges_) {
        if (e.tail == id) {
            out.push_back(e.head);
        } else if (e.head == id) {
            out.push_back(e.tail);
        }
    }
    return out;
}

bool FormationGraph::is_acyclic() const {
    // Union-find: an edge joining two vertices already in one component closes a cycle.
    std::vector<std::size_t> parent(vertices_.size());
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };
    for (const Edge &e : edges_) {
        const std::size_t a = find(index_of(e.tail));
        const std::size_t b = find(index_of(e.head));
        if (a == b) {
            return false;
        }
        parent[a] = b;
    }
    return true;
}

double phase(const Vec2 &p, const Vec2 &center) {
    const double x = p.x() - center.x();
    const double y = p.y() - center.y();
    if (x > 0.0) {
        return std::atan(y / x);
    }
    if (x < 0.0) {
        return y >= 0.0 ? std::atan(y / x) + kPi : std::atan(y / x) - kPi;
    }
    if (y > 0.0) {
        return kPi / 2.0;
    }
    if (y < 0.0) {
        return -kPi / 2.0;
    }
    throw UndefinedPhaseError("phase undefined at the circle center");
}

Eigen::MatrixXd incidence_matrix(const FormationGraph &graph) {
    const auto &edges = graph.edges();
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(graph.vertices().size()),
                                              static_cast<Eigen::Index>(edges.size()));
    for (std::size_t k = 0; k < edges.size(); ++k) {
        const auto col = static_cast<Eigen::Index>(k);
        b(static_cast<Eigen::Index>(graph.index_of(edges[k].tail)), col) = 1.0;
        b(static_cast<Eigen::Index>(graph.index_of(edges[k].head)), col) = -1.0;
    }
    return b;
}

namespace {

double lookup(const PhaseVector &phases, AircraftId id) {
    const auto it = phases.find(id);
    if (it == phases.end()) {
        throw MissingPhaseError(fmt::format("no phase for aircraft {}", id));
    }
    return it->second;
}

} // namespace

Eigen::VectorXd phase_errors(const FormationGraph &graph, const PhaseVector &phases) {
    const auto &edges = graph.edges();
    Eigen::VectorXd z(static_cast<Eigen::Index>(edges.size()));
    for (std::size_t k = 0; k < edges.size(); ++k) {
        z(static_cast<Eigen::Index>(k)) =
            wrap_angle(lookup(phases, edges[k].tail) - lookup(phases, edges[k].head));
    }
    return z;
}

std::string to_string(RadiusConvention convention) {
    return convention == RadiusConvention::radius_shift ? "radius_shift" : "level_shift";
}

RadiusConvention radius_convention_from_string(const std::string &text) {
    if (text == "radius_shift") {
        return RadiusConvention::radius_shift;
    }
    if (text == "level_shift") {
        return RadiusConvention::level_shift;
    }
    throw ScenarioError(fmt::format("unknown radius convention '{}'", text));
}

void validate(const ConsensusParams &params) {
    if (!(params.k_r > 0.0) || !std::isfinite(params.k_r)) {
        throw std::invalid_argument(fmt::format("k_r must be positive, got {}", params.k_r));
    }
    if (!(params.min_radius_factor > 0.0) ||
        !(params.max_radius_factor > params.min_radius_factor)) {
        throw std::invalid_argument("radius clamp factors must satisfy 0 < min < max");
    }
}

double circulation_sign(RotationSense sense) {
    return sense == RotationSense::counterclockwise ? 1.0 : -1.0;
}

double consensus_input(const FormationGraph &graph, AircraftId i, const PhaseVector &known,
                       const ConsensusParams &params) {
    const double theta_i = lookup(known, i);
    double sum = 0.0;
    for (const Edge &e : graph.edges()) {
        if (e.tail != i && e.head != i) {
            continue;
        }
        const AircraftId other = e.tail == i ? e.head : e.tail;
        const auto it = known.find(other);
        if (it == known.end()) {
            continue;
        }
        // z_k is always tail minus head so both endpoints see the same value.
        const double theta_tail = e.tail == i ? theta_i : it->second;
        const double theta_head = e.tail == i ? it->second : theta_i;
        const double z = wrap_angle(theta_tail - theta_head);
        sum += e.tail == i ? z : -z;
    }
    return params.k_r * circulation_sign(params.circulation) * sum;
}

ImplicitCurve modulated_curve(const ImplicitCurve &base, double u_r, const ConsensusParams &params) {
    if (!base.is_circle()) {
        throw std::invalid_argument("modulated_curve: base curve must be a circle");
    }
    const double r = base.radius();
    const double r_min = params.min_radius_factor * r;
    const double r_max = params.max_radius_factor * r;
    double radius = r;
    if (params.convention == RadiusConvention::radius_shift) {
        radius = std::clamp(r + u_r, r_min, r_max);
    } else {
        radius = std::sqrt(std::clamp(r * r + u_r, r_min * r_min, r_max * r_max));
    }
    return ImplicitCurve::circle(base.center(), radius);
}

} // namespace gvf
