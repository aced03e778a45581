#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "wardtrack/classifier.hpp"
#include "wardtrack/scene.hpp"

using namespace wardtrack;

namespace {

SensorModel overhead() {
    SensorModel s;
    s.id = "top";
    s.position = {2.0, 2.0, 2.4};
    s.pitch = deg_to_rad(90.0);
    return s;
}

Dispenser nozzle() { return Dispenser{"d", {2.0, 2.0}, 1.2}; }

// A 2x2 block whose centroid lands at (x + 1, y + 1) in pixel units.
Observation block_obs(const std::string& id, double t, Vec2 centroid) {
    Observation o;
    o.sensor_id = id;
    o.t = t;
    o.silhouette = BinaryImage::zeros(64, 80);
    int x = static_cast<int>(centroid.x) - 1;
    int y = static_cast<int>(centroid.y) - 1;
    o.silhouette.at(y, x) = 1;
    o.silhouette.at(y, x + 1) = 1;
    o.silhouette.at(y + 1, x) = 1;
    o.silhouette.at(y + 1, x + 1) = 1;
    return o;
}

} // namespace

TEST_CASE("the dispenser region is the projected footprint of the nozzle cube") {
    DwellClassifier c(overhead(), nozzle(), 3, 0.1);
    REQUIRE(c.region().has_value());
    const PixelRect& r = *c.region();

    // Camera sits 1.2 m above the nozzle; the cube's near face is 0.95 m out.
    double mid_x = (r.x0 + r.x1) / 2.0;
    double mid_y = (r.y0 + r.y1) / 2.0;
    CHECK(mid_x > 39.0);
    CHECK(mid_x < 41.0);
    CHECK(mid_y > 31.0);
    CHECK(mid_y < 33.0);
    CHECK((r.x1 - r.x0) / 2.0 == doctest::Approx(18.99).epsilon(0.03));
    CHECK((r.y1 - r.y0) / 2.0 == doctest::Approx(20.33).epsilon(0.03));
}

TEST_CASE("a steady centroid inside the region fires at the dwell midpoint") {
    DwellClassifier c(overhead(), nozzle(), 3, 0.1);
    Vec2 mid{(c.region()->x0 + c.region()->x1) / 2.0,
             (c.region()->y0 + c.region()->y1) / 2.0};

    std::vector<Observation> window;
    for (int i = 0; i < 5; ++i) window.push_back(block_obs("top", 0.1 * i, mid));

    std::vector<DispenserEvent> events = c.detect(window);
    REQUIRE(events.size() == 1);
    CHECK(events[0].sensor_id == "top");
    CHECK(events[0].dispenser_id == "d");
    CHECK(events[0].t == doctest::Approx(0.2));

    window.resize(2); // below the frame minimum
    CHECK(c.detect(window).empty());

    window = {block_obs("top", 0.0, mid), block_obs("top", 0.1, mid),
              block_obs("top", 0.2, mid)};
    std::vector<DispenserEvent> exact = c.detect(window);
    REQUIRE(exact.size() == 1);
    CHECK(exact[0].t == doctest::Approx(0.1));
}

TEST_CASE("leaving the region splits a dwell into separate events") {
    DwellClassifier c(overhead(), nozzle(), 3, 0.1);
    Vec2 mid{(c.region()->x0 + c.region()->x1) / 2.0,
             (c.region()->y0 + c.region()->y1) / 2.0};
    Vec2 corner{6.0, 6.0}; // far outside the region

    std::vector<Observation> window;
    for (int i = 0; i < 3; ++i) window.push_back(block_obs("top", 0.1 * i, mid));
    window.push_back(block_obs("top", 0.3, corner));
    for (int i = 4; i < 7; ++i) window.push_back(block_obs("top", 0.1 * i, mid));

    std::vector<DispenserEvent> events = c.detect(window);
    REQUIRE(events.size() == 2);
    CHECK(events[0].t == doctest::Approx(0.1));
    CHECK(events[1].t == doctest::Approx(0.5));

    // An empty silhouette also interrupts the streak.
    Observation empty;
    empty.sensor_id = "top";
    empty.t = 0.3;
    empty.silhouette = BinaryImage::zeros(64, 80);
    window[3] = empty;
    CHECK(c.detect(window).size() == 2);
}

TEST_CASE("a bystander elsewhere in view does not corrupt the dwell reading") {
    DwellClassifier c(overhead(), nozzle(), 3, 0.1);
    Vec2 mid{(c.region()->x0 + c.region()->x1) / 2.0,
             (c.region()->y0 + c.region()->y1) / 2.0};

    auto with_second_block = [](Observation o, Vec2 centroid) {
        int x = static_cast<int>(centroid.x) - 1;
        int y = static_cast<int>(centroid.y) - 1;
        o.silhouette.at(y, x) = 1;
        o.silhouette.at(y, x + 1) = 1;
        o.silhouette.at(y + 1, x) = 1;
        o.silhouette.at(y + 1, x + 1) = 1;
        return o;
    };

    // One person holds at the nozzle while another walks the far corner. The
    // union centroid sits between them, outside the region, but the dwell
    // belongs to the stationary component.
    std::vector<Observation> window;
    for (int i = 0; i < 5; ++i)
        window.push_back(
            with_second_block(block_obs("top", 0.1 * i, mid), {6.0 + 2.0 * i, 6.0}));
    std::vector<DispenserEvent> events = c.detect(window);
    REQUIRE(events.size() == 1);
    CHECK(events[0].t == doctest::Approx(0.2));

    // Two people straddling the region put the union centroid inside it while
    // neither one is at the nozzle. No component dwells there, so no event.
    std::vector<Observation> straddle;
    for (int i = 0; i < 5; ++i)
        straddle.push_back(
            with_second_block(block_obs("top", 0.1 * i, {14.0, mid.y}), {66.0, mid.y}));
    CHECK(c.detect(straddle).empty());
}

TEST_CASE("time gaps beyond one and a half frames break continuity") {
    DwellClassifier c(overhead(), nozzle(), 3, 0.1);
    Vec2 mid{(c.region()->x0 + c.region()->x1) / 2.0,
             (c.region()->y0 + c.region()->y1) / 2.0};

    std::vector<Observation> window{
        block_obs("top", 0.0, mid),  block_obs("top", 0.1, mid),
        block_obs("top", 0.2, mid),  block_obs("top", 0.5, mid),
        block_obs("top", 0.6, mid),
    };
    std::vector<DispenserEvent> events = c.detect(window);
    REQUIRE(events.size() == 1); // the short tail after the gap never matures
    CHECK(events[0].t == doctest::Approx(0.1));

    // A gap of exactly 1.5 frames still counts as contiguous.
    window = {block_obs("top", 0.0, mid), block_obs("top", 0.1, mid),
              block_obs("top", 0.25, mid)};
    events = c.detect(window);
    REQUIRE(events.size() == 1);
    CHECK(events[0].t == doctest::Approx(0.125));
}

TEST_CASE("observations from other sensors are invisible to the classifier") {
    DwellClassifier c(overhead(), nozzle(), 3, 0.1);
    Vec2 mid{(c.region()->x0 + c.region()->x1) / 2.0,
             (c.region()->y0 + c.region()->y1) / 2.0};

    std::vector<Observation> window{
        block_obs("top", 0.0, mid),
        block_obs("side", 0.05, {6.0, 6.0}),
        block_obs("top", 0.1, mid),
        block_obs("top", 0.2, mid),
    };
    std::vector<DispenserEvent> events = c.detect(window);
    REQUIRE(events.size() == 1);
    CHECK(events[0].t == doctest::Approx(0.1));
}

TEST_CASE("a dispenser the camera cannot see yields nothing") {
    SensorModel level;
    level.id = "lvl";
    level.position = {0.0, 0.0, 1.0};
    // Looks along +x; the dispenser sits behind the image plane.
    DwellClassifier c(level, Dispenser{"d", {-1.0, 0.0}, 1.2}, 3, 0.1);
    CHECK_FALSE(c.region().has_value());

    std::vector<Observation> window{block_obs("lvl", 0.0, {40.0, 32.0})};
    CHECK(c.detect(window).empty());
}

TEST_CASE("classify_event surfaces the first event of a window") {
    DwellClassifier c(overhead(), nozzle(), 2, 0.1);
    Vec2 mid{(c.region()->x0 + c.region()->x1) / 2.0,
             (c.region()->y0 + c.region()->y1) / 2.0};
    Vec2 out{6.0, 6.0};

    std::vector<Observation> window{
        block_obs("top", 0.0, mid), block_obs("top", 0.1, mid),
        block_obs("top", 0.2, out), block_obs("top", 0.3, mid),
        block_obs("top", 0.4, mid),
    };
    std::optional<DispenserEvent> first = classify_event(window, c);
    REQUIRE(first.has_value());
    CHECK(first->t == doctest::Approx(0.05));

    std::vector<Observation> quiet{block_obs("top", 0.0, out)};
    CHECK_FALSE(classify_event(quiet, c).has_value());
}
