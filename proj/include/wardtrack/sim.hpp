#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wardtrack/compliance.hpp"
#include "wardtrack/detector.hpp"
#include "wardtrack/scene.hpp"
#include "wardtrack/tracker.hpp"

namespace wardtrack {

// Scripted dispenser use: the agent stands at the dispenser during
// [t_start, t_start + duration].
struct WashAction {
    std::string dispenser_id;
    double t_start = 0.0;
    double duration = 0.0;
};

// Declared room entry/exit times; validation checks the agent is actually at
// the door then.
struct RoomVisit {
    std::string door_id;
    double t_enter = 0.0;
    double t_exit = 0.0;
};

// Piecewise-linear motion through waypoints with strictly increasing times.
// The agent exists only between its first and last waypoint.
struct AgentScript {
    std::string agent_id;
    std::vector<TrackPoint> waypoints;
    std::vector<WashAction> washes;
    std::vector<RoomVisit> visits;

    bool active_at(double t) const;
    Vec2 position_at(double t) const; // clamps to the endpoints
};

struct NoiseParams {
    double pixel_flip_prob = 0.0; // independent per-pixel flips
    double dropout_prob = 0.0;    // whole (sensor, frame) records dropped
};

struct SimConfig {
    double frame_rate = 10.0;
    uint64_t seed = 1;
    NoiseParams noise;
    double v_max = 2.0; // validation gate on scripted speeds
    bool consume_clean_on_crossing = true;
    std::vector<AgentScript> agents;
};

struct SimOutput {
    std::vector<Observation> observations; // frame-major, sensors sorted by id
    std::vector<GroundTruthRecord> truth;  // sorted by t
    std::vector<Trajectory> true_tracks;   // one per agent, scripted positions
};

// Throws DataError when a script exceeds v_max, leaves the grid, or is not
// within 0.3 m of a named dispenser/door at the declared times.
void validate_sim(const Scene& scene, const SimConfig& config);

// Renders every agent as the single-person silhouette of its occupied cell
// and unions them per sensor, then applies noise. Identical (scene, config)
// values give byte-identical output; noise draws are keyed on
// (seed, frame, sensor) so sensor evaluation order never matters.
SimOutput simulate(const Scene& scene, const SimConfig& config);

enum class ScenarioKind {
    compliant_entry, // one agent: wash, enter, exit
    passby_no_wash,  // walks within 1 m of a dispenser, enters without washing
    crossing_pair,   // two crossing paths that stay temporally separable
    blind_gap,       // coverage hole mid-corridor; stitching must bridge it
    crowded,         // 8 concurrent agents with mixed hygiene behavior
};

ScenarioKind scenario_from_name(const std::string& name); // UsageError on unknown
const char* scenario_name(ScenarioKind k);

struct Scenario {
    Scene scene;
    SimConfig config;
};

Scenario generate_scenario(ScenarioKind kind, uint64_t seed);

// Larger mixed crowd built from the same agent templates as `crowded`;
// includes pass-by agents whose crossings defeat the proximity heuristic.
Scenario make_mixed_scenario(int n_agents, uint64_t seed);

// The ward every scenario uses: two patient rooms off a corridor, dispensers
// by the doors, overhead sensors on each dispenser, oblique sensors covering
// corridor and door approaches.
Scene default_ward();

} // namespace wardtrack
