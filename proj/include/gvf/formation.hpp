// Neighbor graph, phases, and the consensus radius modulation.
#pragma once

#include <map>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "gvf/curve.hpp"
#include "gvf/types.hpp"

namespace gvf {

struct Edge {
    AircraftId tail;
    AircraftId head;

    friend bool operator==(const Edge &, const Edge &) = default;
};

/**
 * @brief Undirected neighbor graph with an ordered, oriented edge list.
 *
 * Construction rejects self-loops, duplicate vertices, unknown endpoints and
 * duplicate edges in either orientation (ScenarioError). Cycles are allowed;
 * query is_acyclic() since the rendezvous guarantee only holds for trees.
 */
class FormationGraph {
public:
    FormationGraph() = default;
    FormationGraph(std::vector<AircraftId> vertices, std::vector<Edge> edges);

    const std::vector<AircraftId> &vertices() const { return vertices_; }
    const std::vector<Edge> &edges() const { return edges_; }

    bool contains(AircraftId id) const;
    std::size_t index_of(AircraftId id) const;

    /// Neighbor IDs of `id` in edge-list order.
    std::vector<AircraftId> neighbors(AircraftId id) const;

    bool is_acyclic() const;

private:
    std::vector<AircraftId> vertices_;
    std::vector<Edge> edges_;
};

/// Aircraft ID -> phase [rad].
using PhaseVector = std::map<AircraftId, double>;

/**
 * Polar angle of p about `center` in (-pi, pi], evaluated branch by branch:
 * atan(y/x) for x > 0, atan(y/x) +- pi for x < 0, +-pi/2 on the y axis.
 *
 * @throws UndefinedPhaseError when p == center
 */
double phase(const Vec2 &p, const Vec2 &center);

/// Incidence matrix B (|V| x |E|): +1 at the tail, -1 at the head of each edge.
Eigen::MatrixXd incidence_matrix(const FormationGraph &graph);

/**
 * Inter-vehicle phases z = B^T Theta with each entry wrapped to (-pi, pi].
 *
 * @throws MissingPhaseError if a vertex has no phase
 */
Eigen::VectorXd phase_errors(const FormationGraph &graph, const PhaseVector &phases);

enum class RadiusConvention {
    radius_shift, // radius = r + u_r
    level_shift,  // radius^2 = r^2 + u_r
};

std::string to_string(RadiusConvention convention);
RadiusConvention radius_convention_from_string(const std::string &text);

struct ConsensusParams {
    double k_r = 1.0;
    RadiusConvention convention = RadiusConvention::radius_shift;
    /// Circulation of the tracked circle. For clockwise flight the raw sum is
    /// negated so that the vehicle ahead is always pushed outward.
    RotationSense circulation = RotationSense::counterclockwise;
    double min_radius_factor = 0.2; // clamp floor, in units of the base radius
    double max_radius_factor = 5.0; // clamp ceiling, in units of the base radius
};

/// @throws std::invalid_argument on nonpositive gain or inconsistent clamp
void validate(const ConsensusParams &params);

/// +1 for counterclockwise circulation, -1 for clockwise.
double circulation_sign(RotationSense sense);

/**
 * Consensus input of aircraft i: k_r * sign * sum_k b_ik z_k over the edges
 * incident to i whose far end has a known phase. Unknown neighbors
 * contribute nothing.
 *
 * @throws MissingPhaseError if `known` has no phase for i
 */
double consensus_input(const FormationGraph &graph, AircraftId i, const PhaseVector &known,
                       const ConsensusParams &params);

/**
 * Base circle with its radius modulated by u_r under the configured
 * convention, clamped to [min_radius_factor, max_radius_factor] * r.
 *
 * @throws std::invalid_argument if base is not a circle
 */
ImplicitCurve modulated_curve(const ImplicitCurve &base, double u_r, const ConsensusParams &params);

} // namespace gvf
