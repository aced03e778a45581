#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wardtrack/classifier.hpp"
#include "wardtrack/scene.hpp"
#include "wardtrack/tracker.hpp"

namespace wardtrack {

enum class Direction { enter, exit };

const char* direction_name(Direction d);
Direction direction_from_name(const std::string& s);

struct FusionParams {
    double tau_t = 5.0;   // s, event-to-track time window
    double r_prox = 1.0;  // m, event-to-track distance gate
    double dwell_min = 1.0; // s, minimum dispenser dwell
    // A door crossing consumes clean status. With false, washing keeps a
    // person clean for the rest of their track.
    bool consume_clean_on_crossing = true;

    bool operator==(const FusionParams&) const = default;
};

// Point labels are one of "", "washed", "enter:<door>", "exit:<door>".
struct LabeledPoint {
    double t = 0.0;
    Vec2 pos;
    std::string action;
};

struct CleanInterval {
    double from = 0.0;
    double to = 0.0; // infinity until consumed
};

struct LabeledTrack {
    int id = 0;
    std::vector<LabeledPoint> points;
    std::vector<CleanInterval> clean_intervals;
};

struct DoorCrossing {
    std::string door_id;
    Direction dir = Direction::enter;
    double t = 0.0;
};

struct CrossingRecord {
    int track_id = 0;
    std::string door_id;
    Direction dir = Direction::enter;
    double t = 0.0;
    bool compliant = false;
};

// The track whose qualifying point (within tau_t of the event and r_prox of
// the event's dispenser) comes closest to the dispenser; distance ties pick
// the point nearer the event time, then the lower track id. nullopt when no
// track qualifies.
std::optional<int> match_event(const DispenserEvent& e,
                               const std::vector<Trajectory>& tracks,
                               const FloorPlan& plan,
                               double tau_t, double r_prox);

// Chronological door-line crossings of one track, by segment intersection
// between consecutive points. Direction comes from the door's room side.
std::vector<DoorCrossing> detect_door_crossings(const Trajectory& track,
                                                const FloorPlan& plan);

struct FusionResult {
    std::vector<LabeledTrack> tracks;
    std::vector<CrossingRecord> crossings; // ordered by (t, track, door)
    int matched_events = 0;
    int orphan_events = 0;
};

// Matches events onto tracks, detects door crossings, and sweeps each track's
// clean state: a wash sets it, a crossing reads it (compliant iff clean) and,
// by default, consumes it.
FusionResult label_tracks(const std::vector<Trajectory>& tracks,
                          const std::vector<DispenserEvent>& events,
                          const FloorPlan& plan, const FusionParams& params);

} // namespace wardtrack
