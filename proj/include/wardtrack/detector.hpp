#pragma once

#include <map>
#include <string>
#include <vector>

#include "wardtrack/image.hpp"
#include "wardtrack/scene.hpp"

namespace wardtrack {

// One silhouette frame from one sensor.
struct Observation {
    std::string sensor_id;
    double t = 0.0;
    BinaryImage silhouette;
};

struct DictAtom {
    Cell cell;
    std::vector<int> pixels; // sorted linear pixel indices, never empty
};

// Single-person silhouettes for every grid cell visible to one sensor.
// Atoms are ordered by row-major cell index; cells whose rendering is empty
// are excluded.
struct SilhouetteDictionary {
    std::string sensor_id;
    int image_h = 0;
    int image_w = 0;
    std::vector<DictAtom> atoms;

    int min_atom_size() const;
    const DictAtom* find(Cell c) const;
};

SilhouetteDictionary build_dictionary(const SensorModel& s, const GridSpec& g,
                                      const PersonModel& m,
                                      const FloorPlan* plan = nullptr);

struct DetectorParams {
    int eps_p = 10;          // max atoms per frame per sensor
    double tau_stop = -1.0;  // min marginal gain; negative selects the
                             // default of 5% of the smallest atom size
    double lambda = 0.3;     // penalty weight for pixels outside y
    double merge_radius = 0.5;

    bool operator==(const DetectorParams&) const = default;
};

double resolve_tau_stop(const SilhouetteDictionary& dict, const DetectorParams& p);

// Greedy set-covering sparse pursuit of y over the dictionary.
struct OccupancyEstimate {
    std::string sensor_id;
    double t = 0.0;
    std::vector<Cell> occupied_cells; // sorted row-major
    double residual_energy = 0.0;     // |y XOR union(selected atoms)|
};

OccupancyEstimate pursue(const Observation& y, const SilhouetteDictionary& dict,
                         int eps_p, double tau_stop, double lambda = 0.3);

// A person hypothesis after cross-sensor merging. sensor_id and cell identify
// the representative contributor (smallest sensor id, then cell).
struct Detection {
    double t = 0.0;
    std::string sensor_id;
    Cell cell;
    Vec2 pos; // centroid of merged cell centers, world frame
};

struct DetectionSet {
    double t = 0.0;
    std::vector<Detection> detections;
};

// Runs pursuit on every observation of one frame and merges detections whose
// world positions fall within merge_radius (single-linkage).
DetectionSet detect_frame(const std::vector<Observation>& frame,
                          const std::map<std::string, SilhouetteDictionary>& dicts,
                          const GridSpec& g, const DetectorParams& params);

} // namespace wardtrack
