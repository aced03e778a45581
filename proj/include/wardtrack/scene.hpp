#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wardtrack/geometry.hpp"
#include "wardtrack/image.hpp"

namespace wardtrack {

struct Cell {
    int ix = 0;
    int iy = 0;

    bool operator==(const Cell&) const = default;
    // Row-major order, matching GridSpec::linear.
    friend bool operator<(Cell a, Cell b) {
        return a.iy != b.iy ? a.iy < b.iy : a.ix < b.ix;
    }
};

// Uniform square grid over the floor. Extent is the half-open box
// [origin, origin + cell_size * (width, height)).
struct GridSpec {
    Vec2 origin;
    double cell_size = 0.25;
    int width = 1;
    int height = 1;

    void validate() const;
    int cell_count() const { return width * height; }
    bool valid_cell(Cell c) const {
        return c.ix >= 0 && c.ix < width && c.iy >= 0 && c.iy < height;
    }
    bool contains(Vec2 p) const;
    // Throws DataError when p lies outside the extent.
    Cell world_to_cell(Vec2 p) const;
    Vec2 cell_center(Cell c) const;
    int linear(Cell c) const { return c.iy * width + c.ix; }
    Cell from_linear(int i) const { return {i % width, i / width}; }
};

// Doors are openings on a wall line. room_side gives the sign of
// cross(b - a, p - a) for points p inside the room the door belongs to.
struct Door {
    std::string id;
    Segment segment;
    std::string room_id;
    int room_side = -1;
};

struct Dispenser {
    std::string id;
    Vec2 pos;
    double height = 1.2; // mount height of the nozzle, meters
};

struct FloorPlan {
    std::vector<Segment> walls;
    std::vector<Door> doors;
    std::vector<Dispenser> dispensers;
    double wall_height = 3.0;

    const Door* find_door(const std::string& id) const;
    const Dispenser* find_dispenser(const std::string& id) const;
};

// Upright cylinder approximation of a person, used both for rendering
// dictionary atoms and for the synthetic ward.
struct PersonModel {
    double height = 1.7;
    double radius = 0.25;
};

// Pose angles are radians here; the JSON scene format uses degrees.
// yaw 0 looks along +x, positive yaw turns toward +y, positive pitch tilts
// the optical axis downward (pitch pi/2 is straight down).
struct SensorModel {
    std::string id;
    Vec3 position;
    double yaw = 0.0;
    double pitch = 0.0;
    double fov_h = deg_to_rad(58.0);
    double fov_v = deg_to_rad(45.0);
    double range_min = 0.8;
    double range_max = 4.0;
    int image_h = 64;
    int image_w = 80;
    std::string watches_dispenser; // empty when this sensor watches none

    void validate() const;
};

// Pinhole frame derived from a SensorModel. Camera axes: x right, y down,
// z along the optical axis.
struct CameraFrame {
    Vec3 origin;
    Vec3 right, down, forward;
    double fx = 0.0, fy = 0.0, cx = 0.0, cy = 0.0;
    int h = 0, w = 0;

    static CameraFrame of(const SensorModel& s);

    Vec3 to_camera(Vec3 p) const;
    // Pixel coordinates of a world point; nullopt when at or behind the
    // camera plane. Does not clip to image bounds.
    std::optional<Vec2> project(Vec3 p) const;
    // Unit direction of the ray through image position (u, v), where pixel
    // (px, py) has its center at (px + 0.5, py + 0.5).
    Vec3 pixel_ray(double u, double v) const;
};

struct Scene {
    GridSpec grid;
    FloorPlan plan;
    PersonModel person;
    std::vector<SensorModel> sensors;

    const SensorModel* find_sensor(const std::string& id) const;
    void validate() const;
};

// Binary silhouette of a person standing at the center of `cell`, seen by
// sensor `s`. All pixels are zero when the body center's axial depth falls
// outside [range_min, range_max]. When `plan` is given its walls occlude.
BinaryImage project_person(Cell cell, const SensorModel& s, const PersonModel& m,
                           const GridSpec& g, const FloorPlan* plan = nullptr);

// Image-space bounding box of an axis-aligned world box, used for dispenser
// regions. nullopt when the box is entirely behind the camera.
struct PixelRect {
    double x0 = 0.0, y0 = 0.0, x1 = 0.0, y1 = 0.0;
    bool contains(Vec2 p) const {
        return p.x >= x0 && p.x <= x1 && p.y >= y0 && p.y <= y1;
    }
};
std::optional<PixelRect> project_box(const CameraFrame& cam, Vec3 center, Vec3 half_extent);

} // namespace wardtrack
