#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "wardtrack/detector.hpp"
#include "wardtrack/errors.hpp"
#include "wardtrack/sim.hpp"

using namespace wardtrack;

namespace {

// Dictionaries are expensive; every scenario shares the ward geometry, so
// cache by sensor id across tests.
const SilhouetteDictionary& dict_for(const Scene& scene, const SensorModel& s) {
    static std::map<std::string, SilhouetteDictionary> cache;
    auto it = cache.find(s.id);
    if (it == cache.end())
        it = cache.emplace(s.id, build_dictionary(s, scene.grid, scene.person,
                                                  &scene.plan)).first;
    return it->second;
}

int count_truth(const std::vector<GroundTruthRecord>& truth, Direction dir,
                bool washed) {
    int n = 0;
    for (const GroundTruthRecord& r : truth)
        if (r.dir == dir && r.washed == washed) ++n;
    return n;
}

const GroundTruthRecord& find_truth(const std::vector<GroundTruthRecord>& truth,
                                    const std::string& person, Direction dir) {
    for (const GroundTruthRecord& r : truth)
        if (r.person_id == person && r.dir == dir) return r;
    REQUIRE(false);
    static GroundTruthRecord dummy;
    return dummy;
}

// Longest stretch of a script outside all sensors' dictionaries, ignoring
// the parking rows below y = 2.25 where coverage is dropped on purpose.
double longest_uncovered_run(const Scene& scene, const AgentScript& a) {
    double worst = 0.0, run = 0.0;
    double t0 = a.waypoints.front().t, t1 = a.waypoints.back().t;
    for (double t = t0; t <= t1 + 1e-9; t += 0.05) {
        Vec2 p = a.position_at(t);
        bool covered = p.y < 2.25;
        if (!covered) {
            Cell c = scene.grid.world_to_cell(p);
            for (const SensorModel& s : scene.sensors)
                if (dict_for(scene, s).find(c)) {
                    covered = true;
                    break;
                }
        }
        run = covered ? 0.0 : run + 0.05;
        worst = std::max(worst, run);
    }
    return worst;
}

} // namespace

TEST_CASE("simulation output is byte-identical across runs") {
    Scenario sc = generate_scenario(ScenarioKind::compliant_entry, 9);
    sc.config.noise.pixel_flip_prob = 0.02;
    sc.config.noise.dropout_prob = 0.08;

    SimOutput a = simulate(sc.scene, sc.config);
    SimOutput b = simulate(sc.scene, sc.config);

    REQUIRE(a.observations.size() == b.observations.size());
    for (size_t i = 0; i < a.observations.size(); ++i) {
        CHECK(a.observations[i].sensor_id == b.observations[i].sensor_id);
        CHECK(a.observations[i].t == b.observations[i].t);
        CHECK(a.observations[i].silhouette == b.observations[i].silhouette);
    }
    REQUIRE(a.truth.size() == b.truth.size());
    for (size_t i = 0; i < a.truth.size(); ++i) {
        CHECK(a.truth[i].person_id == b.truth[i].person_id);
        CHECK(a.truth[i].t == b.truth[i].t);
        CHECK(a.truth[i].washed == b.truth[i].washed);
    }
    REQUIRE(a.true_tracks.size() == b.true_tracks.size());
    for (size_t i = 0; i < a.true_tracks.size(); ++i) {
        REQUIRE(a.true_tracks[i].points.size() == b.true_tracks[i].points.size());
        for (size_t k = 0; k < a.true_tracks[i].points.size(); ++k) {
            CHECK(a.true_tracks[i].points[k].t == b.true_tracks[i].points[k].t);
            CHECK(a.true_tracks[i].points[k].pos.x == b.true_tracks[i].points[k].pos.x);
        }
    }

    // A different seed reroutes the noise.
    sc.config.seed = 10;
    SimOutput c = simulate(sc.scene, sc.config);
    int differing = 0;
    size_t n = std::min(a.observations.size(), c.observations.size());
    for (size_t i = 0; i < n; ++i)
        if (!(a.observations[i].silhouette == c.observations[i].silhouette) ||
            a.observations[i].sensor_id != c.observations[i].sensor_id)
            ++differing;
    CHECK(differing > 0);
}

TEST_CASE("noiseless observations are unions of occupied-cell silhouettes") {
    Scenario sc = generate_scenario(ScenarioKind::compliant_entry, 1);
    SimOutput out = simulate(sc.scene, sc.config);

    size_t n_sensors = sc.scene.sensors.size();
    REQUIRE(n_sensors > 0);
    REQUIRE(out.observations.size() % n_sensors == 0);
    size_t n_frames = out.observations.size() / n_sensors;

    std::map<std::string, const SensorModel*> by_id;
    for (const SensorModel& s : sc.scene.sensors) by_id[s.id] = &s;

    for (size_t f = 0; f < n_frames; f += 7) {
        double t = static_cast<double>(f) / sc.config.frame_rate;
        std::vector<Cell> occupied;
        for (const AgentScript& a : sc.config.agents)
            if (a.active_at(t))
                occupied.push_back(sc.scene.grid.world_to_cell(a.position_at(t)));

        for (size_t k = 0; k < n_sensors; ++k) {
            const Observation& obs = out.observations[f * n_sensors + k];
            CHECK(obs.t == t);
            if (k > 0) // sensors sorted by id within a frame
                CHECK(out.observations[f * n_sensors + k - 1].sensor_id < obs.sensor_id);
            const SensorModel& s = *by_id.at(obs.sensor_id);
            BinaryImage want = BinaryImage::zeros(s.image_h, s.image_w);
            for (Cell c : occupied)
                want.merge(project_person(c, s, sc.scene.person, sc.scene.grid,
                                          &sc.scene.plan));
            CHECK(obs.silhouette == want);
        }
    }
}

TEST_CASE("noise lands at the configured rates") {
    Scenario sc = generate_scenario(ScenarioKind::compliant_entry, 42);
    SimOutput clean = simulate(sc.scene, sc.config);

    sc.config.noise.pixel_flip_prob = 0.02;
    sc.config.noise.dropout_prob = 0.1;
    SimOutput noisy = simulate(sc.scene, sc.config);

    std::map<std::pair<double, std::string>, const BinaryImage*> clean_by_key;
    for (const Observation& o : clean.observations)
        clean_by_key[{o.t, o.sensor_id}] = &o.silhouette;

    long flipped = 0, pixels = 0;
    for (const Observation& o : noisy.observations) {
        const BinaryImage* ref = clean_by_key.at({o.t, o.sensor_id});
        flipped += xor_count(*ref, o.silhouette);
        pixels += static_cast<long>(o.silhouette.px.size());
    }
    double flip_rate = static_cast<double>(flipped) / static_cast<double>(pixels);
    CHECK(flip_rate == doctest::Approx(0.02).epsilon(0.1));

    double drop_rate =
        1.0 - static_cast<double>(noisy.observations.size()) /
                  static_cast<double>(clean.observations.size());
    CHECK(drop_rate > 0.07);
    CHECK(drop_rate < 0.13);

    // Dropping records never reorders the survivors.
    for (size_t i = 1; i < noisy.observations.size(); ++i) {
        const Observation& prev = noisy.observations[i - 1];
        const Observation& cur = noisy.observations[i];
        CHECK((prev.t < cur.t || (prev.t == cur.t && prev.sensor_id < cur.sensor_id)));
    }
}

TEST_CASE("broken scripts are rejected with data errors") {
    Scenario base = generate_scenario(ScenarioKind::compliant_entry, 1);

    auto mutated = [&](auto&& edit) {
        SimConfig cfg = base.config;
        edit(cfg.agents[0]);
        return cfg;
    };

    CHECK_THROWS_AS(validate_sim(base.scene, mutated([](AgentScript& a) {
                        a.waypoints[1].t = a.waypoints[0].t;
                    })),
                    DataError);
    CHECK_THROWS_AS(validate_sim(base.scene, mutated([](AgentScript& a) {
                        a.waypoints[1].t = a.waypoints[0].t + 1e-3;
                    })),
                    DataError);
    CHECK_THROWS_AS(validate_sim(base.scene, mutated([](AgentScript& a) {
                        a.waypoints[0].pos = {-0.5, 4.125};
                    })),
                    DataError);
    CHECK_THROWS_AS(validate_sim(base.scene, mutated([](AgentScript& a) {
                        a.washes[0].t_start += 5.0;
                    })),
                    DataError);
    CHECK_THROWS_AS(validate_sim(base.scene, mutated([](AgentScript& a) {
                        a.washes[0].dispenser_id = "nope";
                    })),
                    DataError);
    CHECK_THROWS_AS(validate_sim(base.scene, mutated([](AgentScript& a) {
                        a.visits[0].door_id = "nadoor";
                    })),
                    DataError);
    CHECK_THROWS_AS(validate_sim(base.scene, mutated([](AgentScript& a) {
                        a.visits[0].t_enter += 3.0;
                    })),
                    DataError);
    CHECK_THROWS_AS(validate_sim(base.scene, mutated([](AgentScript& a) {
                        a.waypoints.resize(1);
                    })),
                    DataError);

    // The unmodified script passes.
    validate_sim(base.scene, base.config);
}

TEST_CASE("compliant entry produces one washed entry and an unwashed exit") {
    Scenario sc = generate_scenario(ScenarioKind::compliant_entry, 1);
    SimOutput out = simulate(sc.scene, sc.config);

    REQUIRE(out.truth.size() == 2);
    CHECK(out.truth[0].person_id == "visitor");
    CHECK(out.truth[0].door_id == "door_a");
    CHECK(out.truth[0].dir == Direction::enter);
    CHECK(out.truth[0].washed);
    CHECK(out.truth[1].dir == Direction::exit);
    CHECK(out.truth[1].door_id == "door_a");
    CHECK_FALSE(out.truth[1].washed);
    CHECK(out.truth[0].t < out.truth[1].t);
}

TEST_CASE("the passby scenario brushes a dispenser without using it") {
    Scenario sc = generate_scenario(ScenarioKind::passby_no_wash, 1);
    SimOutput out = simulate(sc.scene, sc.config);

    REQUIRE(out.truth.size() == 2);
    CHECK(out.truth[0].dir == Direction::enter);
    CHECK_FALSE(out.truth[0].washed);
    CHECK(out.truth[1].dir == Direction::exit);
    CHECK_FALSE(out.truth[1].washed);
    CHECK(out.truth[0].door_id == "door_a");

    // The path's closest approach to the corridor dispenser is half a meter:
    // near enough to fool a proximity rule, far enough to never dwell.
    const Dispenser* d = sc.scene.plan.find_dispenser("disp_a");
    REQUIRE(d != nullptr);
    const AgentScript& a = sc.config.agents[0];
    double nearest = 1e9;
    for (double t = a.waypoints.front().t; t <= a.waypoints.back().t; t += 0.02)
        nearest = std::min(nearest, distance(a.position_at(t), d->pos));
    CHECK(nearest > 0.45);
    CHECK(nearest < 0.55);
}

TEST_CASE("the crossing pair intersects in space but never in time") {
    Scenario sc = generate_scenario(ScenarioKind::crossing_pair, 1);
    SimOutput out = simulate(sc.scene, sc.config);

    REQUIRE(out.truth.size() == 4);
    const GroundTruthRecord& ein = find_truth(out.truth, "eastbound", Direction::enter);
    CHECK(ein.door_id == "door_b");
    CHECK(ein.washed);
    CHECK_FALSE(find_truth(out.truth, "eastbound", Direction::exit).washed);
    CHECK_FALSE(find_truth(out.truth, "westbound", Direction::enter).washed);
    CHECK(find_truth(out.truth, "westbound", Direction::enter).door_id == "door_a");
    CHECK_FALSE(find_truth(out.truth, "westbound", Direction::exit).washed);

    const AgentScript& east = sc.config.agents[0];
    const AgentScript& west = sc.config.agents[1];

    // Both walkers visit a common point...
    double t_east_at = -1, t_west_at = -1;
    for (double te = east.waypoints.front().t; te <= east.waypoints.back().t;
         te += 0.05) {
        for (double tw = west.waypoints.front().t; tw <= west.waypoints.back().t;
             tw += 0.05) {
            if (distance(east.position_at(te), west.position_at(tw)) < 0.2) {
                t_east_at = te;
                t_west_at = tw;
                break;
            }
        }
        if (t_east_at >= 0) break;
    }
    REQUIRE(t_east_at >= 0);
    CHECK(std::abs(t_east_at - t_west_at) > 4.0);

    // ...but stay apart at every instant.
    double closest = 1e9;
    for (double t = 0.0; t <= east.waypoints.back().t; t += 0.05)
        if (east.active_at(t) && west.active_at(t))
            closest = std::min(closest, distance(east.position_at(t),
                                                 west.position_at(t)));
    CHECK(closest >= 0.6);
}

TEST_CASE("the blind gap ward removes the two middle corridor sensors") {
    Scenario sc = generate_scenario(ScenarioKind::blind_gap, 1);
    CHECK(sc.scene.find_sensor("corridor_2") == nullptr);
    CHECK(sc.scene.find_sensor("corridor_3") == nullptr);
    CHECK(sc.scene.find_sensor("corridor_1") != nullptr);

    SimOutput out = simulate(sc.scene, sc.config);
    REQUIRE(out.truth.size() == 2);
    CHECK(out.truth[0].door_id == "door_b");
    CHECK(out.truth[0].dir == Direction::enter);
    CHECK(out.truth[0].washed);
    CHECK_FALSE(out.truth[1].washed);
}

TEST_CASE("the crowd mixes hygiene behaviors with known totals") {
    Scenario sc = generate_scenario(ScenarioKind::crowded, 2);
    REQUIRE(sc.config.agents.size() == 8);

    SimOutput out = simulate(sc.scene, sc.config);
    REQUIRE(out.truth.size() == 12); // through-walkers add no records

    CHECK(count_truth(out.truth, Direction::enter, true) == 2);  // the washers
    CHECK(count_truth(out.truth, Direction::enter, false) == 4);
    CHECK(count_truth(out.truth, Direction::exit, true) == 1);   // in-room wash
    CHECK(count_truth(out.truth, Direction::exit, false) == 5);

    CHECK(find_truth(out.truth, "w0_washer_a", Direction::enter).washed);
    CHECK(find_truth(out.truth, "w0_washer_b", Direction::enter).washed);
    CHECK_FALSE(find_truth(out.truth, "w0_nowash_a", Direction::enter).washed);
    CHECK(find_truth(out.truth, "w0_nowash_a", Direction::exit).washed);
    CHECK_FALSE(find_truth(out.truth, "w0_passby_a", Direction::enter).washed);
    CHECK_FALSE(find_truth(out.truth, "w0_passby_b", Direction::exit).washed);

    // All eight walk the ward at once at some point.
    double t_end = 0.0;
    for (const AgentScript& a : sc.config.agents)
        t_end = std::max(t_end, a.waypoints.back().t);
    int peak = 0;
    for (double t = 0.0; t <= t_end; t += 0.25) {
        int active = 0;
        for (const AgentScript& a : sc.config.agents)
            if (a.active_at(t)) ++active;
        peak = std::max(peak, active);
    }
    CHECK(peak == 8);
}

TEST_CASE("agents interpolate linearly and exist only while scripted") {
    AgentScript a;
    a.agent_id = "x";
    a.waypoints = {{1.0, {0.0, 0.0}}, {3.0, {2.0, 0.0}}, {4.0, {2.0, 1.0}}};

    CHECK(a.active_at(1.0));
    CHECK(a.active_at(4.0));
    CHECK_FALSE(a.active_at(0.9));
    CHECK_FALSE(a.active_at(4.1));

    CHECK(a.position_at(2.0).x == doctest::Approx(1.0));
    CHECK(a.position_at(2.0).y == 0.0);
    CHECK(a.position_at(3.5).y == doctest::Approx(0.5));
    CHECK(a.position_at(0.0).x == 0.0);  // clamps before the first waypoint
    CHECK(a.position_at(9.0).y == 1.0);  // and after the last
}

TEST_CASE("true tracks sample the scripts on the frame clock") {
    Scenario sc = generate_scenario(ScenarioKind::compliant_entry, 1);
    SimOutput out = simulate(sc.scene, sc.config);

    REQUIRE(out.true_tracks.size() == 1);
    const Trajectory& tr = out.true_tracks[0];
    CHECK(tr.id == 0);
    const AgentScript& a = sc.config.agents[0];
    double t_end = a.waypoints.back().t;
    CHECK(tr.points.size() ==
          static_cast<size_t>(std::floor(t_end * sc.config.frame_rate + 1e-9)) + 1);
    for (size_t k = 0; k < tr.points.size(); k += 13) {
        const TrackPoint& p = tr.points[k];
        Vec2 want = a.position_at(p.t);
        CHECK(p.pos.x == want.x);
        CHECK(p.pos.y == want.y);
    }
}

TEST_CASE("scripted paths stay inside sensor coverage") {
    for (ScenarioKind kind : {ScenarioKind::compliant_entry, ScenarioKind::passby_no_wash,
                              ScenarioKind::crossing_pair, ScenarioKind::crowded}) {
        Scenario sc = generate_scenario(kind, 3);
        for (const AgentScript& a : sc.config.agents) {
            CAPTURE(scenario_name(kind));
            CAPTURE(a.agent_id);
            CHECK(longest_uncovered_run(sc.scene, a) <= 0.6);
        }
    }

    Scenario mixed = make_mixed_scenario(16, 4);
    for (const AgentScript& a : mixed.config.agents) {
        CAPTURE(a.agent_id);
        CHECK(longest_uncovered_run(mixed.scene, a) <= 0.6);
    }

    // The blind-gap walker loses coverage mid-corridor for a stretch that is
    // long enough to split the track but short enough to stitch.
    Scenario blind = generate_scenario(ScenarioKind::blind_gap, 3);
    double gap = longest_uncovered_run(blind.scene, blind.config.agents[0]);
    CHECK(gap >= 1.5);
    CHECK(gap <= 4.0);
}

TEST_CASE("crowd schedules keep walkers apart across seeds") {
    for (uint64_t seed : {1, 2, 3, 4, 5, 6}) {
        Scenario sc = generate_scenario(ScenarioKind::crowded, seed);
        double t_end = 0.0;
        for (const AgentScript& a : sc.config.agents)
            t_end = std::max(t_end, a.waypoints.back().t);

        double closest = 1e9;
        for (double t = 0.0; t <= t_end; t += 0.1) {
            std::vector<Vec2> pos;
            for (const AgentScript& a : sc.config.agents)
                if (a.active_at(t)) pos.push_back(a.position_at(t));
            for (size_t i = 0; i < pos.size(); ++i)
                for (size_t j = i + 1; j < pos.size(); ++j)
                    closest = std::min(closest, distance(pos[i], pos[j]));
        }
        CAPTURE(seed);
        CHECK(closest >= 0.55);

        // While anyone washes, the watched dispenser stays otherwise clear.
        for (const AgentScript& a : sc.config.agents) {
            for (const WashAction& w : a.washes) {
                Vec2 dp = sc.scene.plan.find_dispenser(w.dispenser_id)->pos;
                for (double t = w.t_start - 0.3; t <= w.t_start + w.duration + 0.3;
                     t += 0.1) {
                    for (const AgentScript& other : sc.config.agents) {
                        if (other.agent_id == a.agent_id || !other.active_at(t))
                            continue;
                        CHECK(distance(other.position_at(t), dp) >= 1.5);
                    }
                }
            }
        }
    }
}

TEST_CASE("mixed scenarios scale the crowd in waves") {
    CHECK_THROWS_AS(make_mixed_scenario(0, 1), UsageError);

    Scenario nine = make_mixed_scenario(9, 7);
    CHECK(nine.config.agents.size() == 9);
    CHECK(nine.config.agents[8].agent_id.rfind("w1_", 0) == 0);

    Scenario big = make_mixed_scenario(24, 1);
    CHECK(big.config.agents.size() == 24);
    std::set<std::string> ids;
    for (const AgentScript& a : big.config.agents) ids.insert(a.agent_id);
    CHECK(ids.size() == 24);
    validate_sim(big.scene, big.config);
}
