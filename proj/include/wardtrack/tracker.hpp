#pragma once

#include <vector>

#include "wardtrack/detector.hpp"

namespace wardtrack {

struct TrackerParams {
    double v_max = 2.0;         // m/s, gates transition edges
    double max_gap = 2.0;       // s, longest edge within one graph
    double alpha = -1.0;        // per-detection reward (negative favors use)
    double entrance_cost = 2.0;
    double exit_cost = 2.0;
    double blind_gap = 5.0;     // s, longest gap bridged by stitching
    // Detection position error (std, meters); half a grid cell by default.
    // Widens the speed gate and the displacement variance, without which
    // cell-quantized detections of one walker cannot chain frame to frame.
    double pos_noise = 0.125;

    bool operator==(const TrackerParams&) const = default;
};

struct FlowNode {
    int id = 0;
    double t = 0.0;
    Vec2 pos;
    double local_cost = 0.0; // alpha
};

struct FlowEdge {
    int from = 0;
    int to = 0;
    double cost = 0.0; // beta
};

struct FlowGraph {
    std::vector<FlowNode> nodes;
    std::vector<FlowEdge> edges;
    double entrance_cost = 2.0;
    double exit_cost = 2.0;
};

struct TrackPoint {
    double t = 0.0;
    Vec2 pos;
};

struct Trajectory {
    int id = 0;
    std::vector<TrackPoint> points; // strictly increasing t
};

// Negative log density of the displacement model: an isotropic Gaussian with
// motion scale v_max * dt / 2, truncated at v_max * dt, plus the variance of
// two independent position errors. The normalizer scales with the total
// sigma, so a move stretched over a longer gap is never free.
double transition_cost(Vec2 a, Vec2 b, double dt, double v_max,
                       double pos_noise = 0.0);

// Nodes sorted by (t, x, y) so the graph is independent of input order.
// Edges gate on 0 < dt <= max_gap and ||b-a|| <= v_max * dt.
FlowGraph build_graph(const std::vector<DetectionSet>& frames, const TrackerParams& p);

struct SolveStats {
    std::vector<double> path_costs; // marginal cost of each accepted path
    double total_cost = 0.0;
};

// Exact min-cost flow over the unit-capacity detection graph; keeps adding
// vertex-disjoint paths while the cheapest augmenting path has negative
// cost. Throws InvariantError on a cyclic graph.
std::vector<Trajectory> solve_flow(const FlowGraph& g, SolveStats* stats = nullptr);

// Bridges track endpoints across coverage gaps: candidate pairs obey
// 0 < dt <= blind_gap and the v_max gate, cheapest pairs joined first, each
// endpoint used at most once. Resulting ids are reassigned by start time.
std::vector<Trajectory> stitch_across_sensors(const std::vector<Trajectory>& tracks,
                                              const TrackerParams& p);

} // namespace wardtrack
