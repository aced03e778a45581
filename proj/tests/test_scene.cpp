#include <doctest.h>

#include "oracles.hpp"
#include "wardtrack/errors.hpp"
#include "wardtrack/scene.hpp"

using namespace wardtrack;

namespace {

GridSpec small_grid() {
    GridSpec g;
    g.origin = {0.0, 0.0};
    g.cell_size = 0.25;
    g.width = 40;
    g.height = 24;
    return g;
}

SensorModel level_sensor() {
    SensorModel s;
    s.id = "cam0";
    s.position = {1.0, 3.0, 1.0};
    s.yaw = 0.0;
    s.pitch = 0.0;
    return s;
}

} // namespace

TEST_CASE("world_to_cell maps the reference example") {
    GridSpec g = small_grid();
    Cell c = g.world_to_cell({1.0, 0.5});
    CHECK(c.ix == 4);
    CHECK(c.iy == 2);
}

TEST_CASE("cell centers round-trip through world_to_cell") {
    GridSpec g = small_grid();
    for (int iy = 0; iy < g.height; ++iy)
        for (int ix = 0; ix < g.width; ++ix) {
            Cell c{ix, iy};
            CHECK(g.world_to_cell(g.cell_center(c)) == c);
            CHECK(g.from_linear(g.linear(c)) == c);
        }
}

TEST_CASE("points outside the extent are rejected") {
    GridSpec g = small_grid();
    CHECK_THROWS_AS(g.world_to_cell({-0.01, 1.0}), DataError);
    CHECK_THROWS_AS(g.world_to_cell({1.0, 6.0}), DataError); // far edge is exclusive
    CHECK_THROWS_AS(g.world_to_cell({10.0, 1.0}), DataError);
    CHECK(g.world_to_cell({0.0, 0.0}) == Cell{0, 0});
}

TEST_CASE("grid validation rejects degenerate specs") {
    GridSpec g = small_grid();
    g.cell_size = 0.0;
    CHECK_THROWS_AS(g.validate(), DataError);
    g = small_grid();
    g.width = 0;
    CHECK_THROWS_AS(g.validate(), DataError);
}

TEST_CASE("in-frustum points project inside image bounds") {
    SensorModel s = level_sensor();
    s.yaw = deg_to_rad(30.0);
    s.pitch = deg_to_rad(40.0);
    CameraFrame cam = CameraFrame::of(s);
    for (int i = -4; i <= 4; ++i)
        for (int j = -4; j <= 4; ++j)
            for (double t : {1.0, 2.5, 3.9}) {
                double ah = 0.49 * s.fov_h * i / 4.0;
                double av = 0.49 * s.fov_v * j / 4.0;
                Vec3 dir = cam.forward + cam.right * std::tan(ah) + cam.down * std::tan(av);
                auto uv = cam.project(cam.origin + dir * t);
                REQUIRE(uv.has_value());
                CHECK(uv->x >= 0.0);
                CHECK(uv->x <= s.image_w);
                CHECK(uv->y >= 0.0);
                CHECK(uv->y <= s.image_h);
            }
}

TEST_CASE("camera basis is orthonormal at arbitrary pose") {
    SensorModel s = level_sensor();
    s.yaw = deg_to_rad(123.0);
    s.pitch = deg_to_rad(55.0);
    CameraFrame cam = CameraFrame::of(s);
    CHECK(std::abs(dot(cam.right, cam.forward)) < 1e-12);
    CHECK(std::abs(dot(cam.down, cam.forward)) < 1e-12);
    CHECK(std::abs(dot(cam.right, cam.down)) < 1e-12);
    CHECK(norm(cam.right) == doctest::Approx(1.0));
    CHECK(norm(cam.down) == doctest::Approx(1.0));
    CHECK(norm(cam.forward) == doctest::Approx(1.0));
    // top-down pose keeps a well-defined horizontal image axis
    s.pitch = deg_to_rad(90.0);
    cam = CameraFrame::of(s);
    CHECK(norm(cam.right) == doctest::Approx(1.0));
    CHECK(cam.forward.z == doctest::Approx(-1.0));
}

TEST_CASE("projection matches the ray-march rasterizer, level view") {
    GridSpec g = small_grid();
    PersonModel m;
    SensorModel s = level_sensor();
    Cell cell{12, 12}; // center (3.125, 3.125), axial depth ~2.1 m
    BinaryImage fast = project_person(cell, s, m, g);
    BinaryImage slow = oracle::raymarch_silhouette(cell, s, m, g);
    REQUIRE(fast.count() > 50);
    CHECK(fast == slow);
}

TEST_CASE("projection matches the ray-march rasterizer, top-down view") {
    GridSpec g = small_grid();
    PersonModel m;
    SensorModel s;
    s.id = "over";
    s.position = {3.125, 3.125, 2.4};
    s.pitch = deg_to_rad(90.0);
    Cell cell{12, 12};
    BinaryImage fast = project_person(cell, s, m, g);
    BinaryImage slow = oracle::raymarch_silhouette(cell, s, m, g);
    REQUIRE(fast.count() > 100);
    CHECK(fast == slow);
}

TEST_CASE("walls occlude and match the ray-march rasterizer") {
    GridSpec g = small_grid();
    PersonModel m;
    SensorModel s = level_sensor();
    Cell cell{12, 12};
    FloorPlan plan;
    plan.walls.push_back({{2.0, 3.0}, {2.0, 3.2}});
    BinaryImage open_view = project_person(cell, s, m, g);
    BinaryImage blocked = project_person(cell, s, m, g, &plan);
    BinaryImage slow = oracle::raymarch_silhouette(cell, s, m, g, &plan);
    CHECK(blocked == slow);
    CHECK(blocked.count() < open_view.count());
    CHECK(blocked.count() > 0);
    // occluded view is a subset of the open one
    for (size_t i = 0; i < blocked.px.size(); ++i)
        if (blocked.px[i]) CHECK(open_view.px[i] == 1);
}

TEST_CASE("out-of-range cells render empty") {
    GridSpec g = small_grid();
    PersonModel m;
    SensorModel s = level_sensor();
    // too close: first cell column in front of the sensor
    Cell near{4, 12}; // center (1.125, 3.125), depth 0.125
    CHECK(project_person(near, s, m, g).count() == 0);
    // too far: depth beyond 4 m
    Cell far{36, 12}; // center (9.125, 3.125), depth 8.125
    CHECK(project_person(far, s, m, g).count() == 0);
}

TEST_CASE("larger person radius yields a superset silhouette") {
    GridSpec g = small_grid();
    SensorModel s = level_sensor();
    PersonModel thin{1.7, 0.18};
    PersonModel wide{1.7, 0.30};
    for (Cell cell : {Cell{10, 10}, Cell{12, 14}, Cell{14, 12}}) {
        BinaryImage a = project_person(cell, s, thin, g);
        BinaryImage b = project_person(cell, s, wide, g);
        REQUIRE(a.count() > 0);
        for (size_t i = 0; i < a.px.size(); ++i)
            if (a.px[i]) CHECK(b.px[i] == 1);
    }
}

TEST_CASE("project_box clips and bounds") {
    SensorModel s = level_sensor();
    CameraFrame cam = CameraFrame::of(s);
    auto r = project_box(cam, {3.0, 3.0, 1.2}, {0.25, 0.25, 0.25});
    REQUIRE(r.has_value());
    auto center = cam.project({3.0, 3.0, 1.2});
    REQUIRE(center.has_value());
    CHECK(r->contains(*center));
    CHECK_FALSE(project_box(cam, {-3.0, 3.0, 1.2}, {0.25, 0.25, 0.25}).has_value());
}

TEST_CASE("scene validation catches id and geometry mistakes") {
    Scene sc;
    sc.grid = small_grid();
    sc.sensors = {level_sensor(), level_sensor()};
    CHECK_THROWS_AS(sc.validate(), DataError); // duplicate sensor id
    sc.sensors.pop_back();
    sc.plan.dispensers.push_back({"h0", {50.0, 1.0}, 1.2});
    CHECK_THROWS_AS(sc.validate(), DataError); // dispenser outside extent
    sc.plan.dispensers[0].pos = {1.0, 1.0};
    sc.validate();
    sc.plan.doors.push_back({"d0", {{1.0, 3.0}, {2.0, 3.0}}, "room", 0});
    CHECK_THROWS_AS(sc.validate(), DataError); // bad room_side
    sc.plan.doors[0].room_side = -1;
    sc.validate();
    sc.sensors[0].watches_dispenser = "missing";
    CHECK_THROWS_AS(sc.validate(), DataError);
    sc.sensors[0].watches_dispenser = "h0";
    sc.validate();
}
