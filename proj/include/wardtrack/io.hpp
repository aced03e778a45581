#pragma once

#include <array>
#include <fstream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "wardtrack/compliance.hpp"
#include "wardtrack/fusion.hpp"
#include "wardtrack/scene.hpp"
#include "wardtrack/sim.hpp"

namespace wardtrack::io {

using nlohmann::json;

constexpr int kFormatVersion = 1;

// Run-length encoding of the 1-pixels, row-major, as [start, length] pairs.
std::vector<std::array<int, 2>> encode_runs(const BinaryImage& im);
BinaryImage decode_runs(int h, int w, const std::vector<std::array<int, 2>>& runs);

json scene_to_json(const Scene& s);
Scene scene_from_json(const json& j);
void save_scene(const std::string& path, const Scene& s,
                const json& generator = json::object());
Scene load_scene(const std::string& path);

json sim_config_to_json(const SimConfig& c);
SimConfig sim_config_from_json(const json& j);

// Line-delimited JSON with a mandatory first line:
//   {"format_version": 1, "kind": "...", "params": {...}}
class JsonlWriter {
public:
    JsonlWriter(const std::string& path, const std::string& kind, const json& params);
    void write(const json& record);

private:
    std::ofstream out_;
    std::string path_;
};

class JsonlReader {
public:
    // Opens and validates the header; diagnostics carry path:line. An empty
    // expected_kind accepts any kind.
    JsonlReader(const std::string& path, const std::string& expected_kind);
    const json& params() const { return params_; }
    const std::string& kind() const { return kind_; }
    std::optional<json> next();
    [[noreturn]] void fail_here(const std::string& msg) const { fail(msg); }

private:
    [[noreturn]] void fail(const std::string& msg) const;

    std::ifstream in_;
    std::string path_;
    json params_;
    std::string kind_;
    int line_ = 0;
};

// Typed whole-file helpers. Loaders return the header params alongside the
// records so stage parameters survive the round trip.
void save_observations(const std::string& path, const std::vector<Observation>& obs,
                       const json& params);
std::pair<json, std::vector<Observation>> load_observations(const std::string& path);

void save_detections(const std::string& path, const std::vector<DetectionSet>& frames,
                     const json& params);
std::pair<json, std::vector<DetectionSet>> load_detections(const std::string& path);

void save_tracks(const std::string& path, const std::vector<Trajectory>& tracks,
                 const json& params);
std::pair<json, std::vector<Trajectory>> load_tracks(const std::string& path);

void save_labeled_tracks(const std::string& path, const std::vector<LabeledTrack>& tracks,
                         const json& params);
std::pair<json, std::vector<LabeledTrack>> load_labeled_tracks(const std::string& path);

void save_events(const std::string& path, const std::vector<DispenserEvent>& events,
                 const json& params);
std::pair<json, std::vector<DispenserEvent>> load_events(const std::string& path);

void save_crossings(const std::string& path, const std::vector<CrossingRecord>& crossings,
                    const json& params);
std::pair<json, std::vector<CrossingRecord>> load_crossings(const std::string& path);

void save_truth(const std::string& path, const std::vector<GroundTruthRecord>& truth,
                const json& params);
std::pair<json, std::vector<GroundTruthRecord>> load_truth(const std::string& path);

// Crossing records double as truth when scoring pipeline output against
// another pipeline run; this accepts either field name for the hygiene bit.
std::vector<GroundTruthRecord> truth_from_crossings(const std::string& path);

} // namespace wardtrack::io
