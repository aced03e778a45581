#include "wardtrack/io.hpp"

#include <cmath>
#include <limits>

#include "wardtrack/errors.hpp"

namespace wardtrack::io {

namespace {

const json& need(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end()) throw DataError(std::string("missing key '") + key + "'");
    return *it;
}

json vec2_json(Vec2 v) { return json::array({v.x, v.y}); }
json vec3_json(Vec3 v) { return json::array({v.x, v.y, v.z}); }

Vec2 vec2_from(const json& j) {
    if (!j.is_array() || j.size() != 2) throw DataError("expected [x, y]");
    return {j[0].get<double>(), j[1].get<double>()};
}

Vec3 vec3_from(const json& j) {
    if (!j.is_array() || j.size() != 3) throw DataError("expected [x, y, z]");
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

json segment_json(const Segment& s) {
    return json::array({s.a.x, s.a.y, s.b.x, s.b.y});
}

Segment segment_from(const json& j) {
    if (!j.is_array() || j.size() != 4) throw DataError("expected [x0, y0, x1, y1]");
    return {{j[0].get<double>(), j[1].get<double>()},
            {j[2].get<double>(), j[3].get<double>()}};
}

} // namespace

std::vector<std::array<int, 2>> encode_runs(const BinaryImage& im) {
    std::vector<std::array<int, 2>> runs;
    int n = im.h * im.w;
    for (int i = 0; i < n;) {
        if (!im.px[i]) {
            ++i;
            continue;
        }
        int start = i;
        while (i < n && im.px[i]) ++i;
        runs.push_back({start, i - start});
    }
    return runs;
}

BinaryImage decode_runs(int h, int w, const std::vector<std::array<int, 2>>& runs) {
    BinaryImage im = BinaryImage::zeros(h, w);
    int n = h * w;
    for (const auto& r : runs) {
        if (r[0] < 0 || r[1] <= 0 || r[0] + r[1] > n)
            throw DataError("run [" + std::to_string(r[0]) + ", " + std::to_string(r[1]) +
                            "] exceeds a " + std::to_string(h) + "x" + std::to_string(w) +
                            " image");
        for (int i = r[0]; i < r[0] + r[1]; ++i) im.px[i] = 1;
    }
    return im;
}

json scene_to_json(const Scene& s) {
    json walls = json::array();
    for (const Segment& w : s.plan.walls) walls.push_back(segment_json(w));
    json doors = json::array();
    for (const Door& d : s.plan.doors)
        doors.push_back({{"id", d.id},
                         {"segment", segment_json(d.segment)},
                         {"room_id", d.room_id},
                         {"room_side", d.room_side}});
    json dispensers = json::array();
    for (const Dispenser& d : s.plan.dispensers)
        dispensers.push_back(
            {{"id", d.id}, {"pos", vec2_json(d.pos)}, {"height", d.height}});
    json sensors = json::array();
    for (const SensorModel& m : s.sensors) {
        json j = {{"id", m.id},
                  {"position", vec3_json(m.position)},
                  {"yaw_deg", rad_to_deg(m.yaw)},
                  {"pitch_deg", rad_to_deg(m.pitch)},
                  {"fov_h_deg", rad_to_deg(m.fov_h)},
                  {"fov_v_deg", rad_to_deg(m.fov_v)},
                  {"range_min", m.range_min},
                  {"range_max", m.range_max},
                  {"image_h", m.image_h},
                  {"image_w", m.image_w}};
        if (!m.watches_dispenser.empty()) j["watches_dispenser"] = m.watches_dispenser;
        sensors.push_back(std::move(j));
    }
    return {{"format_version", kFormatVersion},
            {"kind", "scene"},
            {"grid",
             {{"origin", vec2_json(s.grid.origin)},
              {"cell_size", s.grid.cell_size},
              {"width", s.grid.width},
              {"height", s.grid.height}}},
            {"person", {{"height", s.person.height}, {"radius", s.person.radius}}},
            {"plan",
             {{"wall_height", s.plan.wall_height},
              {"walls", std::move(walls)},
              {"doors", std::move(doors)},
              {"dispensers", std::move(dispensers)}}},
            {"sensors", std::move(sensors)}};
}

Scene scene_from_json(const json& j) {
    if (need(j, "format_version").get<int>() != kFormatVersion)
        throw DataError("unsupported format_version");
    Scene s;
    const json& g = need(j, "grid");
    s.grid.origin = vec2_from(need(g, "origin"));
    s.grid.cell_size = need(g, "cell_size").get<double>();
    s.grid.width = need(g, "width").get<int>();
    s.grid.height = need(g, "height").get<int>();
    if (j.contains("person")) {
        s.person.height = need(j["person"], "height").get<double>();
        s.person.radius = need(j["person"], "radius").get<double>();
    }
    const json& p = need(j, "plan");
    s.plan.wall_height = p.value("wall_height", 3.0);
    for (const json& w : need(p, "walls")) s.plan.walls.push_back(segment_from(w));
    for (const json& d : need(p, "doors"))
        s.plan.doors.push_back({need(d, "id").get<std::string>(),
                                segment_from(need(d, "segment")),
                                need(d, "room_id").get<std::string>(),
                                need(d, "room_side").get<int>()});
    for (const json& d : need(p, "dispensers"))
        s.plan.dispensers.push_back({need(d, "id").get<std::string>(),
                                     vec2_from(need(d, "pos")),
                                     d.value("height", 1.2)});
    for (const json& m : need(j, "sensors")) {
        SensorModel sm;
        sm.id = need(m, "id").get<std::string>();
        sm.position = vec3_from(need(m, "position"));
        sm.yaw = deg_to_rad(need(m, "yaw_deg").get<double>());
        sm.pitch = deg_to_rad(need(m, "pitch_deg").get<double>());
        sm.fov_h = deg_to_rad(m.value("fov_h_deg", 58.0));
        sm.fov_v = deg_to_rad(m.value("fov_v_deg", 45.0));
        sm.range_min = m.value("range_min", 0.8);
        sm.range_max = m.value("range_max", 4.0);
        sm.image_h = m.value("image_h", 64);
        sm.image_w = m.value("image_w", 80);
        sm.watches_dispenser = m.value("watches_dispenser", std::string());
        s.sensors.push_back(std::move(sm));
    }
    s.validate();
    return s;
}

void save_scene(const std::string& path, const Scene& s, const json& generator) {
    json j = scene_to_json(s);
    if (!generator.empty()) j["generator"] = generator;
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw DataError("cannot open " + path + " for writing");
    out << j.dump(2) << '\n';
    if (!out) throw DataError("failed writing " + path);
}

Scene load_scene(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path);
    json j;
    try {
        in >> j;
        return scene_from_json(j);
    } catch (const json::exception& e) {
        throw DataError(path + ": " + e.what());
    } catch (const DataError& e) {
        throw DataError(path + ": " + e.what());
    }
}

json sim_config_to_json(const SimConfig& c) {
    json agents = json::array();
    for (const AgentScript& a : c.agents) {
        json wps = json::array();
        for (const TrackPoint& p : a.waypoints)
            wps.push_back(json::array({p.t, p.pos.x, p.pos.y}));
        json washes = json::array();
        for (const WashAction& w : a.washes)
            washes.push_back({{"dispenser_id", w.dispenser_id},
                              {"t_start", w.t_start},
                              {"duration", w.duration}});
        json visits = json::array();
        for (const RoomVisit& v : a.visits)
            visits.push_back({{"door_id", v.door_id},
                              {"t_enter", v.t_enter},
                              {"t_exit", v.t_exit}});
        agents.push_back({{"id", a.agent_id},
                          {"waypoints", std::move(wps)},
                          {"washes", std::move(washes)},
                          {"visits", std::move(visits)}});
    }
    return {{"frame_rate", c.frame_rate},
            {"seed", c.seed},
            {"v_max", c.v_max},
            {"consume_clean_on_crossing", c.consume_clean_on_crossing},
            {"noise",
             {{"pixel_flip_prob", c.noise.pixel_flip_prob},
              {"dropout_prob", c.noise.dropout_prob}}},
            {"agents", std::move(agents)}};
}

SimConfig sim_config_from_json(const json& j) {
    SimConfig c;
    c.frame_rate = j.value("frame_rate", 10.0);
    c.seed = j.value("seed", uint64_t{1});
    c.v_max = j.value("v_max", 2.0);
    c.consume_clean_on_crossing = j.value("consume_clean_on_crossing", true);
    if (j.contains("noise")) {
        c.noise.pixel_flip_prob = j["noise"].value("pixel_flip_prob", 0.0);
        c.noise.dropout_prob = j["noise"].value("dropout_prob", 0.0);
    }
    for (const json& a : need(j, "agents")) {
        AgentScript s;
        s.agent_id = need(a, "id").get<std::string>();
        for (const json& w : need(a, "waypoints")) {
            if (!w.is_array() || w.size() != 3) throw DataError("expected [t, x, y]");
            s.waypoints.push_back(
                {w[0].get<double>(), {w[1].get<double>(), w[2].get<double>()}});
        }
        if (a.contains("washes"))
            for (const json& w : a["washes"])
                s.washes.push_back({need(w, "dispenser_id").get<std::string>(),
                                    need(w, "t_start").get<double>(),
                                    need(w, "duration").get<double>()});
        if (a.contains("visits"))
            for (const json& v : a["visits"])
                s.visits.push_back({need(v, "door_id").get<std::string>(),
                                    need(v, "t_enter").get<double>(),
                                    need(v, "t_exit").get<double>()});
        c.agents.push_back(std::move(s));
    }
    return c;
}

JsonlWriter::JsonlWriter(const std::string& path, const std::string& kind,
                         const json& params)
    : out_(path, std::ios::trunc), path_(path) {
    if (!out_) throw DataError("cannot open " + path + " for writing");
    json header = {{"format_version", kFormatVersion}, {"kind", kind}, {"params", params}};
    out_ << header.dump() << '\n';
    if (!out_) throw DataError("failed writing " + path_);
}

void JsonlWriter::write(const json& record) {
    out_ << record.dump() << '\n';
    if (!out_) throw DataError("failed writing " + path_);
}

JsonlReader::JsonlReader(const std::string& path, const std::string& expected_kind)
    : in_(path), path_(path) {
    if (!in_) throw DataError("cannot open " + path);
    std::string line;
    if (!std::getline(in_, line)) fail("empty file, expected a header line");
    ++line_;
    json header;
    try {
        header = json::parse(line);
    } catch (const json::exception& e) {
        fail(e.what());
    }
    if (!header.contains("format_version") ||
        header["format_version"].get<int>() != kFormatVersion)
        fail("missing or unsupported format_version");
    kind_ = header.value("kind", std::string());
    if (!expected_kind.empty() && kind_ != expected_kind)
        fail("kind is '" + kind_ + "', expected '" + expected_kind + "'");
    params_ = header.value("params", json::object());
}

void JsonlReader::fail(const std::string& msg) const {
    throw DataError(path_ + ":" + std::to_string(line_) + ": " + msg);
}

std::optional<json> JsonlReader::next() {
    std::string line;
    if (!std::getline(in_, line)) return std::nullopt;
    ++line_;
    try {
        return json::parse(line);
    } catch (const json::exception& e) {
        fail(e.what());
    }
}

namespace {

// Applies `parse` to every record, rethrowing json type errors with location.
template <typename T, typename F>
std::pair<json, std::vector<T>> load_records(const std::string& path,
                                             const std::string& kind, F parse) {
    JsonlReader r(path, kind);
    std::vector<T> out;
    while (std::optional<json> rec = r.next()) {
        try {
            out.push_back(parse(*rec));
        } catch (const json::exception& e) {
            r.fail_here(e.what());
        } catch (const DataError& e) {
            r.fail_here(e.what());
        }
    }
    return {r.params(), std::move(out)};
}

} // namespace

void save_observations(const std::string& path, const std::vector<Observation>& obs,
                       const json& params) {
    JsonlWriter w(path, "observations", params);
    for (const Observation& o : obs) {
        json runs = json::array();
        for (const auto& r : encode_runs(o.silhouette))
            runs.push_back(json::array({r[0], r[1]}));
        w.write({{"t", o.t},
                 {"sensor_id", o.sensor_id},
                 {"h", o.silhouette.h},
                 {"w", o.silhouette.w},
                 {"runs", std::move(runs)}});
    }
}

std::pair<json, std::vector<Observation>> load_observations(const std::string& path) {
    return load_records<Observation>(path, "observations", [](const json& j) {
        std::vector<std::array<int, 2>> runs;
        for (const json& r : need(j, "runs")) {
            if (!r.is_array() || r.size() != 2) throw DataError("expected [start, len]");
            runs.push_back({r[0].get<int>(), r[1].get<int>()});
        }
        Observation o;
        o.sensor_id = need(j, "sensor_id").get<std::string>();
        o.t = need(j, "t").get<double>();
        o.silhouette =
            decode_runs(need(j, "h").get<int>(), need(j, "w").get<int>(), runs);
        return o;
    });
}

void save_detections(const std::string& path, const std::vector<DetectionSet>& frames,
                     const json& params) {
    JsonlWriter w(path, "detections", params);
    for (const DetectionSet& f : frames) {
        json ds = json::array();
        for (const Detection& d : f.detections)
            ds.push_back({{"sensor_id", d.sensor_id},
                          {"cell", json::array({d.cell.ix, d.cell.iy})},
                          {"pos", vec2_json(d.pos)}});
        w.write({{"t", f.t}, {"detections", std::move(ds)}});
    }
}

std::pair<json, std::vector<DetectionSet>> load_detections(const std::string& path) {
    return load_records<DetectionSet>(path, "detections", [](const json& j) {
        DetectionSet f;
        f.t = need(j, "t").get<double>();
        for (const json& d : need(j, "detections")) {
            const json& c = need(d, "cell");
            f.detections.push_back({f.t,
                                    need(d, "sensor_id").get<std::string>(),
                                    {c[0].get<int>(), c[1].get<int>()},
                                    vec2_from(need(d, "pos"))});
        }
        return f;
    });
}

void save_tracks(const std::string& path, const std::vector<Trajectory>& tracks,
                 const json& params) {
    JsonlWriter w(path, "tracks", params);
    for (const Trajectory& tr : tracks) {
        json pts = json::array();
        for (const TrackPoint& p : tr.points)
            pts.push_back(json::array({p.t, p.pos.x, p.pos.y}));
        w.write({{"id", tr.id}, {"points", std::move(pts)}});
    }
}

std::pair<json, std::vector<Trajectory>> load_tracks(const std::string& path) {
    return load_records<Trajectory>(path, "tracks", [](const json& j) {
        Trajectory tr;
        tr.id = need(j, "id").get<int>();
        for (const json& p : need(j, "points")) {
            if (!p.is_array() || p.size() != 3) throw DataError("expected [t, x, y]");
            tr.points.push_back(
                {p[0].get<double>(), {p[1].get<double>(), p[2].get<double>()}});
        }
        return tr;
    });
}

void save_labeled_tracks(const std::string& path, const std::vector<LabeledTrack>& tracks,
                         const json& params) {
    JsonlWriter w(path, "labeled_tracks", params);
    for (const LabeledTrack& tr : tracks) {
        json pts = json::array();
        for (const LabeledPoint& p : tr.points)
            pts.push_back(json::array({p.t, p.pos.x, p.pos.y, p.action}));
        json clean = json::array();
        for (const CleanInterval& c : tr.clean_intervals)
            clean.push_back(json::array(
                {c.from, std::isinf(c.to) ? json(nullptr) : json(c.to)}));
        w.write({{"id", tr.id}, {"points", std::move(pts)}, {"clean", std::move(clean)}});
    }
}

std::pair<json, std::vector<LabeledTrack>> load_labeled_tracks(const std::string& path) {
    return load_records<LabeledTrack>(path, "labeled_tracks", [](const json& j) {
        LabeledTrack tr;
        tr.id = need(j, "id").get<int>();
        for (const json& p : need(j, "points")) {
            if (!p.is_array() || p.size() != 4)
                throw DataError("expected [t, x, y, action]");
            tr.points.push_back({p[0].get<double>(),
                                 {p[1].get<double>(), p[2].get<double>()},
                                 p[3].get<std::string>()});
        }
        for (const json& c : need(j, "clean"))
            tr.clean_intervals.push_back(
                {c[0].get<double>(), c[1].is_null()
                                         ? std::numeric_limits<double>::infinity()
                                         : c[1].get<double>()});
        return tr;
    });
}

void save_events(const std::string& path, const std::vector<DispenserEvent>& events,
                 const json& params) {
    JsonlWriter w(path, "events", params);
    for (const DispenserEvent& e : events)
        w.write({{"t", e.t}, {"sensor_id", e.sensor_id}, {"dispenser_id", e.dispenser_id}});
}

std::pair<json, std::vector<DispenserEvent>> load_events(const std::string& path) {
    return load_records<DispenserEvent>(path, "events", [](const json& j) {
        return DispenserEvent{need(j, "sensor_id").get<std::string>(),
                              need(j, "dispenser_id").get<std::string>(),
                              need(j, "t").get<double>()};
    });
}

void save_crossings(const std::string& path, const std::vector<CrossingRecord>& crossings,
                    const json& params) {
    JsonlWriter w(path, "crossings", params);
    for (const CrossingRecord& c : crossings)
        w.write({{"t", c.t},
                 {"track_id", c.track_id},
                 {"door_id", c.door_id},
                 {"direction", direction_name(c.dir)},
                 {"compliant", c.compliant}});
}

std::pair<json, std::vector<CrossingRecord>> load_crossings(const std::string& path) {
    return load_records<CrossingRecord>(path, "crossings", [](const json& j) {
        return CrossingRecord{
            need(j, "track_id").get<int>(), need(j, "door_id").get<std::string>(),
            direction_from_name(need(j, "direction").get<std::string>()),
            need(j, "t").get<double>(), need(j, "compliant").get<bool>()};
    });
}

void save_truth(const std::string& path, const std::vector<GroundTruthRecord>& truth,
                const json& params) {
    JsonlWriter w(path, "truth", params);
    for (const GroundTruthRecord& r : truth)
        w.write({{"t", r.t},
                 {"person_id", r.person_id},
                 {"door_id", r.door_id},
                 {"direction", direction_name(r.dir)},
                 {"washed", r.washed}});
}

std::pair<json, std::vector<GroundTruthRecord>> load_truth(const std::string& path) {
    return load_records<GroundTruthRecord>(path, "truth", [](const json& j) {
        return GroundTruthRecord{
            need(j, "person_id").get<std::string>(),
            need(j, "door_id").get<std::string>(),
            direction_from_name(need(j, "direction").get<std::string>()),
            need(j, "t").get<double>(), need(j, "washed").get<bool>()};
    });
}

std::vector<GroundTruthRecord> truth_from_crossings(const std::string& path) {
    auto [params, records] = load_records<GroundTruthRecord>(
        path, "", [](const json& j) {
            GroundTruthRecord r;
            r.person_id = j.contains("person_id")
                              ? j["person_id"].get<std::string>()
                              : std::to_string(need(j, "track_id").get<int>());
            r.door_id = need(j, "door_id").get<std::string>();
            r.dir = direction_from_name(need(j, "direction").get<std::string>());
            r.t = need(j, "t").get<double>();
            r.washed = j.contains("washed") ? j["washed"].get<bool>()
                                            : need(j, "compliant").get<bool>();
            return r;
        });
    return records;
}

} // namespace wardtrack::io
