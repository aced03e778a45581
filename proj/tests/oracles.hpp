#pragma once

// Slow reference implementations used only by tests. Each one reaches the
// answer by a different route than the library code: ray marching instead of
// analytic intersection, exhaustive enumeration instead of greedy or flow
// solvers, finite differences instead of analytic gradients.

#include <optional>
#include <vector>

#include "wardtrack/detector.hpp"
#include "wardtrack/scene.hpp"
#include "wardtrack/stn.hpp"
#include "wardtrack/tracker.hpp"

namespace wardtrack::oracle {

// Rasterizes the person cylinder by stepping along each pixel ray and testing
// point membership; walls block via 2D segment crossings between consecutive
// sample points. `step` is the march step in meters.
BinaryImage raymarch_silhouette(Cell cell, const SensorModel& s, const PersonModel& m,
                                const GridSpec& g, const FloorPlan* plan = nullptr,
                                double step = 0.002);

// Best subset of at most k atoms under union semantics, by trying every
// subset. Returns the sorted cell list of a subset minimizing the symmetric
// difference with y (ties: fewer atoms, then lexicographic). Feasible only
// for small dictionaries.
struct SubsetResult {
    std::vector<Cell> cells;
    int residual = 0;
};
SubsetResult best_union_subset(const BinaryImage& y, const SilhouetteDictionary& dict,
                               int max_atoms);

// Residual of a given cell selection against y, recomputed from scratch.
int union_residual(const BinaryImage& y, const SilhouetteDictionary& dict,
                   const std::vector<Cell>& cells);

// Minimum total cost over all vertex-disjoint path sets in the flow graph,
// by enumerating every simple source-to-sink path and searching over
// disjoint combinations. Covers graphs up to ~15 nodes.
double min_cost_disjoint_paths(const FlowGraph& g);

// Central finite-difference gradient of L = sum(upstream * sample(U, grid(theta)))
// with respect to theta.
AffineParams fd_theta_grad(const FeatureMap& U, const AffineParams& theta,
                           int out_h, int out_w, const FeatureMap& upstream,
                           double h = 1e-4);

// Same loss differentiated against one input pixel.
double fd_input_grad(const FeatureMap& U, const AffineParams& theta,
                     int out_h, int out_w, const FeatureMap& upstream,
                     int y, int x, int c, double h = 1e-4);

} // namespace wardtrack::oracle
