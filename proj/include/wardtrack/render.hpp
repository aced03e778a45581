#pragma once

#include <string>
#include <vector>

#include "wardtrack/fusion.hpp"
#include "wardtrack/scene.hpp"

namespace wardtrack {

// SVG floor-plan view: black walls, blue door openings, orange dispenser
// squares, one fixed palette color per track, action labels as markers.
// Valid output even with no tracks.
std::string render_tracks_svg(const Scene& scene, const std::vector<LabeledTrack>& tracks);

// Per-cell visit counts over all track points.
std::vector<int> visit_counts(const GridSpec& grid, const std::vector<LabeledTrack>& tracks);

// SVG heatmap of visit counts. Cell shade scales linearly from white (zero)
// to full orange at the maximum count; the scale is written into the legend.
std::string render_heatmap_svg(const Scene& scene, const std::vector<LabeledTrack>& tracks);

} // namespace wardtrack
