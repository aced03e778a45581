#include "wardtrack/fusion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "wardtrack/errors.hpp"

namespace wardtrack {

const char* direction_name(Direction d) {
    return d == Direction::enter ? "enter" : "exit";
}

Direction direction_from_name(const std::string& s) {
    if (s == "enter") return Direction::enter;
    if (s == "exit") return Direction::exit;
    throw DataError("unknown direction '" + s + "'");
}

std::optional<int> match_event(const DispenserEvent& e,
                               const std::vector<Trajectory>& tracks,
                               const FloorPlan& plan,
                               double tau_t, double r_prox) {
    const Dispenser* disp = plan.find_dispenser(e.dispenser_id);
    if (!disp) throw DataError("event references unknown dispenser " + e.dispenser_id);

    // Grid-quantized tracks tie on distance whenever two of them touch the
    // dispenser cell inside the window, so time to the event breaks ties
    // before the id does: the track standing there as the dwell fires beats
    // one that walked over the spot seconds earlier.
    double best_dist = std::numeric_limits<double>::infinity();
    double best_dt = std::numeric_limits<double>::infinity();
    int best_id = -1;
    for (const Trajectory& tr : tracks) {
        double track_dist = std::numeric_limits<double>::infinity();
        double track_dt = std::numeric_limits<double>::infinity();
        for (const TrackPoint& p : tr.points) {
            double dt = std::abs(p.t - e.t);
            if (dt > tau_t) continue;
            double d = distance(p.pos, disp->pos);
            if (d > r_prox) continue;
            if (d < track_dist || (d == track_dist && dt < track_dt)) {
                track_dist = d;
                track_dt = dt;
            }
        }
        if (track_dist == std::numeric_limits<double>::infinity()) continue;
        if (best_id < 0 || track_dist < best_dist ||
            (track_dist == best_dist &&
             (track_dt < best_dt || (track_dt == best_dt && tr.id < best_id)))) {
            best_dist = track_dist;
            best_dt = track_dt;
            best_id = tr.id;
        }
    }
    if (best_id < 0) return std::nullopt;
    return best_id;
}

std::vector<DoorCrossing> detect_door_crossings(const Trajectory& track,
                                                const FloorPlan& plan) {
    std::vector<DoorCrossing> out;
    for (size_t i = 1; i < track.points.size(); ++i) {
        const TrackPoint& p0 = track.points[i - 1];
        const TrackPoint& p1 = track.points[i];
        for (const Door& door : plan.doors) {
            Vec2 da = door.segment.a, db = door.segment.b;
            double s0 = cross(db - da, p0.pos - da);
            double s1 = cross(db - da, p1.pos - da);
            if (s0 == 0.0 || s1 == 0.0 || (s0 > 0) == (s1 > 0)) continue;
            double t_param, u_param;
            if (!segment_intersection(p0.pos, p1.pos, da, db, &t_param, &u_param))
                continue;
            bool to_room = (s1 > 0) == (door.room_side > 0);
            out.push_back({door.id, to_room ? Direction::enter : Direction::exit,
                           p0.t + t_param * (p1.t - p0.t)});
        }
    }
    std::sort(out.begin(), out.end(), [](const DoorCrossing& a, const DoorCrossing& b) {
        if (a.t != b.t) return a.t < b.t;
        return a.door_id < b.door_id;
    });
    return out;
}

namespace {

struct TrackAction {
    double t;
    bool is_wash;
    std::string door_id; // crossings only
    Direction dir = Direction::enter;
};

} // namespace

FusionResult label_tracks(const std::vector<Trajectory>& tracks,
                          const std::vector<DispenserEvent>& events,
                          const FloorPlan& plan, const FusionParams& params) {
    FusionResult res;

    std::map<int, std::vector<TrackAction>> actions;
    for (const Trajectory& tr : tracks)
        for (const DoorCrossing& c : detect_door_crossings(tr, plan))
            actions[tr.id].push_back({c.t, false, c.door_id, c.dir});

    std::vector<DispenserEvent> ordered = events;
    std::sort(ordered.begin(), ordered.end(),
              [](const DispenserEvent& a, const DispenserEvent& b) {
                  if (a.t != b.t) return a.t < b.t;
                  if (a.sensor_id != b.sensor_id) return a.sensor_id < b.sensor_id;
                  return a.dispenser_id < b.dispenser_id;
              });
    for (const DispenserEvent& e : ordered) {
        std::optional<int> track_id = match_event(e, tracks, plan, params.tau_t,
                                                  params.r_prox);
        if (!track_id) {
            ++res.orphan_events;
            continue;
        }
        ++res.matched_events;
        actions[*track_id].push_back({e.t, true, "", Direction::enter});
    }

    for (const Trajectory& tr : tracks) {
        LabeledTrack lt;
        lt.id = tr.id;
        for (const TrackPoint& p : tr.points) lt.points.push_back({p.t, p.pos, ""});

        std::vector<TrackAction>& acts = actions[tr.id];
        // Washes sort before crossings at equal times: wash-then-enter at one
        // instant counts as compliant.
        std::sort(acts.begin(), acts.end(), [](const TrackAction& a, const TrackAction& b) {
            if (a.t != b.t) return a.t < b.t;
            return a.is_wash && !b.is_wash;
        });

        bool clean = false;
        double clean_from = 0.0;
        for (const TrackAction& a : acts) {
            std::string label;
            if (a.is_wash) {
                if (!clean) clean_from = a.t;
                clean = true;
                label = "washed";
            } else {
                res.crossings.push_back({tr.id, a.door_id, a.dir, a.t, clean});
                label = std::string(a.dir == Direction::enter ? "enter:" : "exit:") +
                        a.door_id;
                if (clean && params.consume_clean_on_crossing) {
                    lt.clean_intervals.push_back({clean_from, a.t});
                    clean = false;
                }
            }

            // Attach to the nearest point in time; earlier wins ties.
            size_t best = 0;
            double best_dt = std::numeric_limits<double>::infinity();
            for (size_t i = 0; i < lt.points.size(); ++i) {
                double dt = std::abs(lt.points[i].t - a.t);
                if (dt < best_dt) {
                    best_dt = dt;
                    best = i;
                }
            }
            if (!lt.points.empty()) {
                std::string& slot = lt.points[best].action;
                if (!slot.empty() && slot != label)
                    throw InvariantError("track " + std::to_string(tr.id) +
                                         ": actions '" + slot + "' and '" + label +
                                         "' collide on the point at t=" +
                                         std::to_string(lt.points[best].t));
                slot = label;
            }
        }
        if (clean)
            lt.clean_intervals.push_back({clean_from,
                                          std::numeric_limits<double>::infinity()});
        res.tracks.push_back(std::move(lt));
    }

    std::sort(res.crossings.begin(), res.crossings.end(),
              [](const CrossingRecord& a, const CrossingRecord& b) {
                  if (a.t != b.t) return a.t < b.t;
                  if (a.track_id != b.track_id) return a.track_id < b.track_id;
                  return a.door_id < b.door_id;
              });
    return res;
}

} // namespace wardtrack
