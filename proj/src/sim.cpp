#include "wardtrack/sim.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "wardtrack/errors.hpp"

namespace wardtrack {

bool AgentScript::active_at(double t) const {
    return !waypoints.empty() && t >= waypoints.front().t - 1e-9 &&
           t <= waypoints.back().t + 1e-9;
}

Vec2 AgentScript::position_at(double t) const {
    if (waypoints.empty()) return {};
    if (t <= waypoints.front().t) return waypoints.front().pos;
    if (t >= waypoints.back().t) return waypoints.back().pos;
    for (size_t i = 1; i < waypoints.size(); ++i) {
        if (t > waypoints[i].t) continue;
        const TrackPoint& a = waypoints[i - 1];
        const TrackPoint& b = waypoints[i];
        double span = b.t - a.t;
        double f = span > 0.0 ? (t - a.t) / span : 1.0;
        return a.pos + (b.pos - a.pos) * f;
    }
    return waypoints.back().pos;
}

void validate_sim(const Scene& scene, const SimConfig& config) {
    if (!(config.frame_rate > 0.0)) throw DataError("frame_rate must be positive");
    std::set<std::string> ids;
    for (const AgentScript& a : config.agents) {
        if (a.agent_id.empty()) throw DataError("agent id must not be empty");
        if (!ids.insert(a.agent_id).second)
            throw DataError("duplicate agent id " + a.agent_id);
        if (a.waypoints.size() < 2)
            throw DataError("agent " + a.agent_id + " needs at least two waypoints");
        for (size_t i = 0; i < a.waypoints.size(); ++i) {
            if (!scene.grid.contains(a.waypoints[i].pos))
                throw DataError("agent " + a.agent_id + ": waypoint " + std::to_string(i) +
                                " lies outside the grid extent");
            if (i == 0) continue;
            double dt = a.waypoints[i].t - a.waypoints[i - 1].t;
            if (dt <= 0.0)
                throw DataError("agent " + a.agent_id +
                                ": waypoint times must strictly increase");
            double speed = distance(a.waypoints[i].pos, a.waypoints[i - 1].pos) / dt;
            if (speed > config.v_max + 1e-9)
                throw DataError("agent " + a.agent_id + ": segment " + std::to_string(i) +
                                " moves at " + std::to_string(speed) + " m/s, above v_max");
        }
        for (const WashAction& w : a.washes) {
            const Dispenser* d = scene.plan.find_dispenser(w.dispenser_id);
            if (!d)
                throw DataError("agent " + a.agent_id + " washes at unknown dispenser " +
                                w.dispenser_id);
            for (double f : {0.0, 0.5, 1.0}) {
                Vec2 p = a.position_at(w.t_start + f * w.duration);
                if (distance(p, d->pos) > 0.3)
                    throw DataError("agent " + a.agent_id + " is " +
                                    std::to_string(distance(p, d->pos)) +
                                    " m from dispenser " + w.dispenser_id +
                                    " during its scripted wash");
            }
        }
        for (const RoomVisit& v : a.visits) {
            const Door* d = scene.plan.find_door(v.door_id);
            if (!d)
                throw DataError("agent " + a.agent_id + " visits unknown door " +
                                v.door_id);
            if (point_segment_distance(a.position_at(v.t_enter), d->segment) > 0.3)
                throw DataError("agent " + a.agent_id + " is not at door " + v.door_id +
                                " at its declared entry time");
            if (v.t_exit > v.t_enter &&
                point_segment_distance(a.position_at(v.t_exit), d->segment) > 0.3)
                throw DataError("agent " + a.agent_id + " is not at door " + v.door_id +
                                " at its declared exit time");
        }
    }
}

namespace {

uint64_t splitmix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// Independent of evaluation order: one stream per (seed, frame, sensor).
struct SubStream {
    uint64_t state;
    SubStream(uint64_t seed, uint64_t frame, uint64_t sensor)
        : state(splitmix64(splitmix64(splitmix64(seed) ^ frame) ^ (sensor + 0x51ED))) {}
    double next01() {
        state = splitmix64(state) ^ (state << 1);
        return static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53;
    }
};

// Clean-state sweep shared by nothing else: the pipeline has its own copy of
// this protocol and the two must agree end to end.
struct AgentEvent {
    double t;
    bool is_wash;
    std::string door_id;
    bool enter = true;
};

std::vector<GroundTruthRecord> agent_truth(const AgentScript& a, bool consume) {
    std::vector<AgentEvent> ev;
    for (const WashAction& w : a.washes)
        ev.push_back({w.t_start + w.duration / 2.0, true, "", true});
    for (const RoomVisit& v : a.visits) {
        ev.push_back({v.t_enter, false, v.door_id, true});
        if (v.t_exit > v.t_enter) ev.push_back({v.t_exit, false, v.door_id, false});
    }
    std::sort(ev.begin(), ev.end(), [](const AgentEvent& x, const AgentEvent& y) {
        if (x.t != y.t) return x.t < y.t;
        return x.is_wash && !y.is_wash;
    });
    std::vector<GroundTruthRecord> out;
    bool clean = false;
    for (const AgentEvent& e : ev) {
        if (e.is_wash) {
            clean = true;
            continue;
        }
        out.push_back({a.agent_id, e.door_id,
                       e.enter ? Direction::enter : Direction::exit, e.t, clean});
        if (consume) clean = false;
    }
    return out;
}

} // namespace

SimOutput simulate(const Scene& scene, const SimConfig& config) {
    scene.validate();
    validate_sim(scene, config);

    SimOutput out;

    std::vector<const SensorModel*> sensors;
    for (const SensorModel& s : scene.sensors) sensors.push_back(&s);
    std::sort(sensors.begin(), sensors.end(),
              [](const SensorModel* a, const SensorModel* b) { return a->id < b->id; });

    double t_end = 0.0;
    for (const AgentScript& a : config.agents)
        if (!a.waypoints.empty()) t_end = std::max(t_end, a.waypoints.back().t);
    int n_frames = static_cast<int>(std::floor(t_end * config.frame_rate + 1e-9)) + 1;

    // Silhouettes repeat whenever an agent revisits a cell; cache per sensor.
    std::vector<std::map<int, BinaryImage>> atom_cache(sensors.size());

    for (int frame = 0; frame < n_frames; ++frame) {
        double t = frame / config.frame_rate;
        std::vector<Cell> occupied;
        for (const AgentScript& a : config.agents)
            if (a.active_at(t)) occupied.push_back(scene.grid.world_to_cell(a.position_at(t)));

        for (size_t si = 0; si < sensors.size(); ++si) {
            const SensorModel& s = *sensors[si];
            SubStream rng(config.seed, frame, si);
            if (config.noise.dropout_prob > 0.0 &&
                rng.next01() < config.noise.dropout_prob)
                continue;

            BinaryImage im = BinaryImage::zeros(s.image_h, s.image_w);
            for (Cell c : occupied) {
                int key = scene.grid.linear(c);
                auto it = atom_cache[si].find(key);
                if (it == atom_cache[si].end())
                    it = atom_cache[si]
                             .emplace(key, project_person(c, s, scene.person, scene.grid,
                                                          &scene.plan))
                             .first;
                im.merge(it->second);
            }
            if (config.noise.pixel_flip_prob > 0.0)
                for (uint8_t& px : im.px)
                    if (rng.next01() < config.noise.pixel_flip_prob) px ^= 1;
            out.observations.push_back({s.id, t, std::move(im)});
        }
    }

    for (const AgentScript& a : config.agents) {
        std::vector<GroundTruthRecord> tr =
            agent_truth(a, config.consume_clean_on_crossing);
        out.truth.insert(out.truth.end(), tr.begin(), tr.end());
    }
    std::sort(out.truth.begin(), out.truth.end(),
              [](const GroundTruthRecord& a, const GroundTruthRecord& b) {
                  if (a.t != b.t) return a.t < b.t;
                  return a.person_id < b.person_id;
              });

    for (size_t i = 0; i < config.agents.size(); ++i) {
        const AgentScript& a = config.agents[i];
        Trajectory tr;
        tr.id = static_cast<int>(i);
        for (int frame = 0; frame < n_frames; ++frame) {
            double t = frame / config.frame_rate;
            if (a.active_at(t)) tr.points.push_back({t, a.position_at(t)});
        }
        out.true_tracks.push_back(std::move(tr));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Default ward and scenario scripts.

Scene default_ward() {
    Scene sc;
    sc.grid = {{0.0, 0.0}, 0.25, 48, 24}; // 12 m x 6 m
    sc.person = {};

    FloorPlan& p = sc.plan;
    p.wall_height = 3.0;
    // room A: x in [1,5], y in [0.5,3]; door gap [2.5,3.5] on y=3
    p.walls.push_back({{1.0, 0.5}, {1.0, 3.0}});
    p.walls.push_back({{1.0, 0.5}, {5.0, 0.5}});
    p.walls.push_back({{5.0, 0.5}, {5.0, 3.0}});
    p.walls.push_back({{1.0, 3.0}, {2.5, 3.0}});
    p.walls.push_back({{3.5, 3.0}, {5.0, 3.0}});
    // room B: x in [6,10], y in [0.5,3]; door gap [7.5,8.5]
    p.walls.push_back({{6.0, 0.5}, {6.0, 3.0}});
    p.walls.push_back({{6.0, 0.5}, {10.0, 0.5}});
    p.walls.push_back({{10.0, 0.5}, {10.0, 3.0}});
    p.walls.push_back({{6.0, 3.0}, {7.5, 3.0}});
    p.walls.push_back({{8.5, 3.0}, {10.0, 3.0}});
    // corridor outer wall
    p.walls.push_back({{0.5, 5.5}, {11.5, 5.5}});

    // rooms lie below the door lines, so room_side is the negative half-plane
    p.doors.push_back({"door_a", {{2.5, 3.0}, {3.5, 3.0}}, "room_a", -1});
    p.doors.push_back({"door_b", {{7.5, 3.0}, {8.5, 3.0}}, "room_b", -1});

    // dispenser positions sit on cell centers so a washer snaps onto them
    p.dispensers.push_back({"disp_a", {4.375, 3.125}, 1.2});
    p.dispensers.push_back({"disp_b", {9.375, 3.125}, 1.2});
    p.dispensers.push_back({"disp_a_in", {2.375, 2.375}, 1.2});

    auto corridor_cam = [](const std::string& id, double x) {
        SensorModel s;
        s.id = id;
        s.position = {x, 5.5, 2.6};
        s.yaw = deg_to_rad(-90.0);
        s.pitch = deg_to_rad(55.0);
        return s;
    };
    for (int i = 0; i < 6; ++i)
        sc.sensors.push_back(corridor_cam("corridor_" + std::to_string(i), 1.2 + 2.0 * i));

    auto room_cam = [](const std::string& id, double x) {
        SensorModel s;
        s.id = id;
        s.position = {x, 0.8, 2.2};
        s.yaw = deg_to_rad(90.0);
        s.pitch = deg_to_rad(30.0);
        return s;
    };
    sc.sensors.push_back(room_cam("room_a", 3.0));
    sc.sensors.push_back(room_cam("room_b", 8.0));

    auto over_cam = [&p](const std::string& id, const std::string& dispenser) {
        const Dispenser* d = p.find_dispenser(dispenser);
        SensorModel s;
        s.id = id;
        s.position = {d->pos.x, d->pos.y, 2.4};
        s.yaw = 0.0;
        s.pitch = deg_to_rad(90.0);
        s.watches_dispenser = dispenser;
        return s;
    };
    sc.sensors.push_back(over_cam("over_a", "disp_a"));
    sc.sensors.push_back(over_cam("over_b", "disp_b"));
    sc.sensors.push_back(over_cam("over_a_in", "disp_a_in"));

    sc.validate();
    return sc;
}

namespace {

constexpr double kWalkSpeed = 1.1;
constexpr double kLaneEast = 4.125;  // eastbound corridor lane (cell centers)
constexpr double kLaneWest = 4.875;  // westbound lane
constexpr double kWashDwell = 1.5;

// Builds waypoint scripts and derives wash/visit declarations from the path
// itself, so declared times always match the geometry.
class ScriptBuilder {
public:
    ScriptBuilder(std::string id, double t0, Vec2 start, const FloorPlan& plan)
        : plan_(plan) {
        s_.agent_id = std::move(id);
        t_ = t0;
        pos_ = start;
        s_.waypoints.push_back({t_, pos_});
    }

    ScriptBuilder& walk_to(Vec2 q) {
        double seg_t = distance(pos_, q) / kWalkSpeed;
        for (const Door& d : plan_.doors) {
            double tp, up;
            if (!segment_intersection(pos_, q, d.segment.a, d.segment.b, &tp, &up))
                continue;
            double s0 = cross(d.segment.b - d.segment.a, pos_ - d.segment.a);
            double s1 = cross(d.segment.b - d.segment.a, q - d.segment.a);
            if (s0 == 0.0 || s1 == 0.0 || (s0 > 0) == (s1 > 0)) continue;
            double tc = t_ + tp * seg_t;
            bool entering = (s1 > 0) == (d.room_side > 0);
            if (entering) {
                open_[d.id] = tc;
            } else {
                auto it = open_.find(d.id);
                double t_in = (it != open_.end()) ? it->second : tc;
                s_.visits.push_back({d.id, t_in, tc});
                if (it != open_.end()) open_.erase(it);
            }
        }
        t_ += seg_t;
        pos_ = q;
        s_.waypoints.push_back({t_, pos_});
        return *this;
    }

    ScriptBuilder& dwell(double dur) {
        t_ += dur;
        s_.waypoints.push_back({t_, pos_});
        return *this;
    }

    ScriptBuilder& dwell_until(double t_abs) {
        if (t_abs > t_) {
            t_ = t_abs;
            s_.waypoints.push_back({t_, pos_});
        }
        return *this;
    }

    ScriptBuilder& wash_here(const std::string& dispenser_id) {
        s_.washes.push_back({dispenser_id, t_, kWashDwell});
        return dwell(kWashDwell);
    }

    AgentScript finish() {
        // entries with no matching exit stay open deliberately
        for (const auto& [door, t_in] : open_)
            s_.visits.push_back({door, t_in, t_in - 1.0});
        std::sort(s_.visits.begin(), s_.visits.end(),
                  [](const RoomVisit& a, const RoomVisit& b) {
                      return a.t_enter < b.t_enter;
                  });
        return std::move(s_);
    }

private:
    const FloorPlan& plan_;
    AgentScript s_;
    double t_ = 0.0;
    Vec2 pos_;
    std::map<std::string, double> open_;
};

struct RoomGeom {
    double door_x;
    std::string disp; // corridor dispenser
    Vec2 disp_pos;
    double spot_washer, spot_nowash, spot_passby; // parking columns
};

const RoomGeom kRoomA{3.125, "disp_a", {4.375, 3.125}, 1.625, 2.625, 3.625};
const RoomGeom kRoomB{8.125, "disp_b", {9.375, 3.125}, 6.625, 7.625, 9.125};

constexpr double kHallY = 2.375;  // in-room row along which agents move
constexpr double kSpotY = 1.125;  // parking row, outside camera coverage
constexpr double kStripY = 3.625; // corridor strip next to doors/dispensers

// A-room agents enter from the west and leave west; B-room agents mirror
// from the east. Exits split directions so departing streams never trail
// each other through a door zone.

AgentScript make_washer(const FloorPlan& plan, const RoomGeom& r, bool west,
                        const std::string& id, double t0, double leave_at) {
    double x_in = west ? 0.5 : 11.5;
    double lane = west ? kLaneEast : kLaneWest;
    ScriptBuilder b(id, t0, {x_in, lane}, plan);
    b.walk_to({r.disp_pos.x, lane})
        .walk_to(r.disp_pos)
        .wash_here(r.disp)
        .walk_to({r.door_x, kStripY})
        .walk_to({r.door_x, kHallY})
        .walk_to({r.spot_washer, kHallY})
        .walk_to({r.spot_washer, kSpotY})
        .dwell_until(leave_at)
        .walk_to({r.spot_washer, kHallY})
        .walk_to({r.door_x, kHallY})
        .walk_to({r.door_x, kStripY})
        .walk_to(west ? Vec2{0.5, kLaneEast} : Vec2{11.5, kLaneEast});
    return b.finish();
}

AgentScript make_nowash(const FloorPlan& plan, const RoomGeom& r, bool west,
                        const std::string& id, double t0, double leave_at,
                        bool wash_inside, const std::string& inside_disp,
                        Vec2 inside_disp_pos) {
    double x_in = west ? 0.5 : 11.5;
    double lane = west ? kLaneEast : kLaneWest;
    ScriptBuilder b(id, t0, {x_in, lane}, plan);
    if (west)
        b.walk_to({r.door_x, kStripY});
    else
        b.walk_to({r.door_x, lane}).walk_to({r.door_x, kStripY});
    b.walk_to({r.door_x, kHallY})
        .walk_to({r.spot_nowash, kHallY})
        .walk_to({r.spot_nowash, kSpotY})
        .dwell_until(leave_at);
    if (wash_inside)
        b.walk_to(inside_disp_pos).wash_here(inside_disp).walk_to({r.door_x, kHallY});
    else
        b.walk_to({r.spot_nowash, kHallY}).walk_to({r.door_x, kHallY});
    b.walk_to({r.door_x, kStripY})
        .walk_to(west ? Vec2{0.5, kLaneEast} : Vec2{11.5, kLaneEast});
    return b.finish();
}

AgentScript make_passby(const FloorPlan& plan, const RoomGeom& r, bool west,
                        const std::string& id, double t0, double leave_at) {
    double x_in = west ? 0.5 : 11.5;
    double lane = west ? kLaneEast : kLaneWest;
    ScriptBuilder b(id, t0, {x_in, lane}, plan);
    if (!west) b.walk_to({r.disp_pos.x, lane});
    // brushes within half a meter of the dispenser without stopping
    b.walk_to({r.disp_pos.x, kStripY})
        .walk_to({r.door_x, kStripY})
        .walk_to({r.door_x, kHallY})
        .walk_to({r.spot_passby, kHallY})
        .walk_to({r.spot_passby, kSpotY})
        .dwell_until(leave_at)
        .walk_to({r.spot_passby, kHallY})
        .walk_to({r.door_x, kHallY})
        .walk_to({r.door_x, kStripY})
        // brushes the dispenser again on the way out
        .walk_to({r.disp_pos.x, kStripY})
        .walk_to(west ? Vec2{0.5, kLaneEast} : Vec2{11.5, kLaneEast});
    return b.finish();
}

AgentScript make_through(const FloorPlan& plan, bool east, const std::string& id,
                         double t0) {
    ScriptBuilder b(id, t0, east ? Vec2{0.5, kLaneEast} : Vec2{11.5, kLaneWest}, plan);
    b.walk_to(east ? Vec2{11.5, kLaneEast} : Vec2{0.5, kLaneWest});
    return b.finish();
}

// V1: no two agents come within 0.6 m, ever. V2: while someone washes, no
// other agent is within 1.6 m of that dispenser (keeps the overhead view
// single-person). Checked at 20 Hz.
bool schedule_clear(const Scene& scene, const SimConfig& cfg) {
    double t_end = 0.0;
    for (const AgentScript& a : cfg.agents) t_end = std::max(t_end, a.waypoints.back().t);
    for (double t = 0.0; t <= t_end; t += 0.05) {
        std::vector<Vec2> pos;
        std::vector<const AgentScript*> who;
        for (const AgentScript& a : cfg.agents)
            if (a.active_at(t)) {
                pos.push_back(a.position_at(t));
                who.push_back(&a);
            }
        for (size_t i = 0; i < pos.size(); ++i)
            for (size_t j = i + 1; j < pos.size(); ++j)
                if (distance(pos[i], pos[j]) < 0.6) return false;
        for (const AgentScript& a : cfg.agents)
            for (const WashAction& w : a.washes) {
                if (t < w.t_start - 0.4 || t > w.t_start + w.duration + 0.4) continue;
                Vec2 dp = scene.plan.find_dispenser(w.dispenser_id)->pos;
                for (size_t i = 0; i < pos.size(); ++i)
                    if (who[i]->agent_id != a.agent_id && distance(pos[i], dp) < 1.6)
                        return false;
            }
    }
    return true;
}

std::vector<AgentScript> crowd_wave(const FloorPlan& plan, double base,
                                    const std::string& prefix, int count,
                                    const std::vector<double>& jit) {
    const Dispenser* din = plan.find_dispenser("disp_a_in");
    std::vector<AgentScript> all = {
        make_washer(plan, kRoomA, true, prefix + "washer_a", base + jit[0],
                    base + 24.0 + jit[0]),
        make_washer(plan, kRoomB, false, prefix + "washer_b", base + 1.0 + jit[1],
                    base + 29.0 + jit[1]),
        make_nowash(plan, kRoomA, true, prefix + "nowash_a", base + 8.0 + jit[2],
                    base + 28.5 + jit[2], true, din->id, din->pos),
        make_nowash(plan, kRoomB, false, prefix + "nowash_b", base + 9.0 + jit[3],
                    base + 32.5 + jit[3], false, "", {}),
        make_passby(plan, kRoomA, true, prefix + "passby_a", base + 12.0 + jit[4],
                    base + 34.0 + jit[4]),
        make_passby(plan, kRoomB, false, prefix + "passby_b", base + 14.0 + jit[5],
                    base + 36.5 + jit[5]),
        make_through(plan, true, prefix + "through_e", base + 16.0 + jit[6]),
        make_through(plan, false, prefix + "through_w", base + 18.0 + jit[7]),
    };
    all.resize(std::min<size_t>(count, all.size()));
    return all;
}

Scenario build_crowd(int n_agents, uint64_t seed) {
    Scenario sc;
    sc.scene = default_ward();
    sc.config.seed = seed;

    uint64_t h = splitmix64(seed ^ 0xC0FFEE);
    std::vector<double> jit(8);
    for (double scale : {1.0, 0.5, 0.0}) {
        for (int i = 0; i < 8; ++i) {
            h = splitmix64(h);
            jit[i] = scale * 0.1 * static_cast<double>(static_cast<int>(h % 7) - 3);
        }
        sc.config.agents.clear();
        for (int wave = 0, left = n_agents; left > 0; ++wave, left -= 8) {
            std::vector<AgentScript> ws =
                crowd_wave(sc.scene.plan, 45.0 * wave,
                           "w" + std::to_string(wave) + "_", std::min(left, 8), jit);
            for (AgentScript& a : ws) sc.config.agents.push_back(std::move(a));
        }
        if (schedule_clear(sc.scene, sc.config)) return sc;
    }
    throw InvariantError("crowd template failed its own separation checks");
}

} // namespace

ScenarioKind scenario_from_name(const std::string& name) {
    if (name == "compliant_entry") return ScenarioKind::compliant_entry;
    if (name == "passby_no_wash") return ScenarioKind::passby_no_wash;
    if (name == "crossing_pair") return ScenarioKind::crossing_pair;
    if (name == "blind_gap") return ScenarioKind::blind_gap;
    if (name == "crowded") return ScenarioKind::crowded;
    throw UsageError("unknown scenario '" + name + "'");
}

const char* scenario_name(ScenarioKind k) {
    switch (k) {
        case ScenarioKind::compliant_entry: return "compliant_entry";
        case ScenarioKind::passby_no_wash: return "passby_no_wash";
        case ScenarioKind::crossing_pair: return "crossing_pair";
        case ScenarioKind::blind_gap: return "blind_gap";
        case ScenarioKind::crowded: return "crowded";
    }
    throw UsageError("unknown scenario kind");
}

Scenario generate_scenario(ScenarioKind kind, uint64_t seed) {
    Scenario sc;
    sc.scene = default_ward();
    sc.config.seed = seed;
    const FloorPlan& plan = sc.scene.plan;

    switch (kind) {
        case ScenarioKind::compliant_entry:
            sc.config.agents.push_back(
                make_washer(plan, kRoomA, true, "visitor", 0.0, 14.0));
            break;
        case ScenarioKind::passby_no_wash:
            sc.config.agents.push_back(
                make_passby(plan, kRoomA, true, "visitor", 0.0, 12.0));
            break;
        case ScenarioKind::crossing_pair: {
            sc.config.agents.push_back(
                make_washer(plan, kRoomB, true, "eastbound", 0.0, 18.0));
            // westbound: descends through the eastbound lane toward door A
            ScriptBuilder b("westbound", 0.0, {11.5, kLaneWest}, plan);
            b.walk_to({3.625, kLaneWest})
                .walk_to({kRoomA.door_x, kStripY})
                .walk_to({kRoomA.door_x, kHallY})
                .walk_to({kRoomA.spot_nowash, kHallY})
                .walk_to({kRoomA.spot_nowash, kSpotY})
                .dwell_until(16.0)
                .walk_to({kRoomA.spot_nowash, kHallY})
                .walk_to({kRoomA.door_x, kHallY})
                .walk_to({kRoomA.door_x, kStripY})
                .walk_to({0.5, kLaneEast});
            sc.config.agents.push_back(b.finish());
            break;
        }
        case ScenarioKind::blind_gap: {
            // the same ward minus the two sensors over the corridor middle
            std::erase_if(sc.scene.sensors, [](const SensorModel& s) {
                return s.id == "corridor_2" || s.id == "corridor_3";
            });
            ScriptBuilder b("walker", 0.0, {0.5, kLaneEast}, plan);
            b.walk_to({kRoomA.disp_pos.x, kLaneEast})
                .walk_to(kRoomA.disp_pos)
                .wash_here(kRoomA.disp)
                .walk_to({kRoomA.disp_pos.x, kStripY})
                // pauses inside the blind stretch, so the outage outlasts the
                // tracker's in-graph gap and only stitching can bridge it
                .walk_to({6.375, kStripY})
                .dwell(1.2)
                .walk_to({kRoomB.door_x, kStripY})
                .walk_to({kRoomB.door_x, kHallY})
                .walk_to({kRoomB.spot_nowash, kHallY})
                .walk_to({kRoomB.spot_nowash, kSpotY})
                .dwell_until(15.0)
                .walk_to({kRoomB.spot_nowash, kHallY})
                .walk_to({kRoomB.door_x, kHallY})
                .walk_to({kRoomB.door_x, kStripY})
                .walk_to({11.5, kLaneEast});
            sc.config.agents.push_back(b.finish());
            break;
        }
        case ScenarioKind::crowded:
            return build_crowd(8, seed);
    }
    if (!schedule_clear(sc.scene, sc.config))
        throw InvariantError("scenario template failed its own separation checks");
    return sc;
}

Scenario make_mixed_scenario(int n_agents, uint64_t seed) {
    if (n_agents < 1) throw UsageError("agent count must be positive");
    return build_crowd(n_agents, seed);
}

} // namespace wardtrack
