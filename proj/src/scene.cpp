#include "wardtrack/scene.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "wardtrack/errors.hpp"

namespace wardtrack {

void GridSpec::validate() const {
    if (!(cell_size > 0.0)) throw DataError("grid cell_size must be positive");
    if (width < 1 || height < 1) throw DataError("grid dimensions must be at least 1x1");
}

bool GridSpec::contains(Vec2 p) const {
    double gx = (p.x - origin.x) / cell_size;
    double gy = (p.y - origin.y) / cell_size;
    return gx >= 0.0 && gy >= 0.0 && gx < width && gy < height;
}

Cell GridSpec::world_to_cell(Vec2 p) const {
    double gx = (p.x - origin.x) / cell_size;
    double gy = (p.y - origin.y) / cell_size;
    Cell c{static_cast<int>(std::floor(gx)), static_cast<int>(std::floor(gy))};
    if (!valid_cell(c))
        throw DataError("point (" + std::to_string(p.x) + ", " + std::to_string(p.y) +
                        ") lies outside the grid extent");
    return c;
}

Vec2 GridSpec::cell_center(Cell c) const {
    return {origin.x + (c.ix + 0.5) * cell_size, origin.y + (c.iy + 0.5) * cell_size};
}

const Door* FloorPlan::find_door(const std::string& id) const {
    for (const Door& d : doors)
        if (d.id == id) return &d;
    return nullptr;
}

const Dispenser* FloorPlan::find_dispenser(const std::string& id) const {
    for (const Dispenser& d : dispensers)
        if (d.id == id) return &d;
    return nullptr;
}

void SensorModel::validate() const {
    if (id.empty()) throw DataError("sensor id must not be empty");
    if (!(fov_h > 0.0 && fov_h < kPi) || !(fov_v > 0.0 && fov_v < kPi))
        throw DataError("sensor " + id + ": fov must lie in (0, 180) degrees");
    if (!(range_min >= 0.0 && range_max > range_min))
        throw DataError("sensor " + id + ": need 0 <= range_min < range_max");
    if (image_h < 1 || image_w < 1)
        throw DataError("sensor " + id + ": image dimensions must be positive");
}

CameraFrame CameraFrame::of(const SensorModel& s) {
    CameraFrame c;
    c.origin = s.position;
    double cy_ = std::cos(s.yaw), sy_ = std::sin(s.yaw);
    double cp = std::cos(s.pitch), sp = std::sin(s.pitch);
    c.forward = {cp * cy_, cp * sy_, -sp};
    // Horizontal image axis; stays well defined when pitch reaches 90.
    c.right = {sy_, -cy_, 0.0};
    c.down = cross(c.forward, c.right);
    c.h = s.image_h;
    c.w = s.image_w;
    c.fx = (s.image_w / 2.0) / std::tan(s.fov_h / 2.0);
    c.fy = (s.image_h / 2.0) / std::tan(s.fov_v / 2.0);
    c.cx = s.image_w / 2.0;
    c.cy = s.image_h / 2.0;
    return c;
}

Vec3 CameraFrame::to_camera(Vec3 p) const {
    Vec3 q = p - origin;
    return {dot(q, right), dot(q, down), dot(q, forward)};
}

std::optional<Vec2> CameraFrame::project(Vec3 p) const {
    Vec3 q = to_camera(p);
    if (q.z <= 1e-9) return std::nullopt;
    return Vec2{cx + fx * q.x / q.z, cy + fy * q.y / q.z};
}

Vec3 CameraFrame::pixel_ray(double u, double v) const {
    Vec3 d = forward + right * ((u - cx) / fx) + down * ((v - cy) / fy);
    double n = norm(d);
    return d * (1.0 / n);
}

const SensorModel* Scene::find_sensor(const std::string& id) const {
    for (const SensorModel& s : sensors)
        if (s.id == id) return &s;
    return nullptr;
}

void Scene::validate() const {
    grid.validate();
    if (!(person.height > 0.0) || !(person.radius > 0.0))
        throw DataError("person model dimensions must be positive");
    if (!(plan.wall_height > 0.0)) throw DataError("wall_height must be positive");
    std::set<std::string> seen;
    for (const SensorModel& s : sensors) {
        s.validate();
        if (!seen.insert(s.id).second) throw DataError("duplicate sensor id " + s.id);
        if (!s.watches_dispenser.empty() && !plan.find_dispenser(s.watches_dispenser))
            throw DataError("sensor " + s.id + " watches unknown dispenser " +
                            s.watches_dispenser);
    }
    seen.clear();
    for (const Door& d : plan.doors) {
        if (!seen.insert(d.id).second) throw DataError("duplicate door id " + d.id);
        if (d.room_side != 1 && d.room_side != -1)
            throw DataError("door " + d.id + ": room_side must be +1 or -1");
        if (!grid.contains(d.segment.a) || !grid.contains(d.segment.b))
            throw DataError("door " + d.id + " lies outside the grid extent");
    }
    seen.clear();
    for (const Dispenser& d : plan.dispensers) {
        if (!seen.insert(d.id).second) throw DataError("duplicate dispenser id " + d.id);
        if (!grid.contains(d.pos))
            throw DataError("dispenser " + d.id + " lies outside the grid extent");
    }
}

namespace {

struct Ray {
    Vec3 o;
    Vec3 d;
};

// Nearest positive parameter where the ray enters the solid cylinder
// (side surface or either cap), or a negative value when it misses.
double cylinder_hit(const Ray& r, Vec2 c, double radius, double height) {
    double best = -1.0;
    double ox = r.o.x - c.x, oy = r.o.y - c.y;
    double a = r.d.x * r.d.x + r.d.y * r.d.y;
    double b = 2.0 * (ox * r.d.x + oy * r.d.y);
    double cc = ox * ox + oy * oy - radius * radius;
    if (a > 1e-12) {
        double disc = b * b - 4.0 * a * cc;
        if (disc >= 0.0) {
            double sq = std::sqrt(disc);
            for (double t : {(-b - sq) / (2.0 * a), (-b + sq) / (2.0 * a)}) {
                if (t <= 1e-9) continue;
                double z = r.o.z + r.d.z * t;
                if (z < 0.0 || z > height) continue;
                if (best < 0.0 || t < best) best = t;
            }
        }
    }
    if (std::abs(r.d.z) > 1e-12) {
        for (double zc : {0.0, height}) {
            double t = (zc - r.o.z) / r.d.z;
            if (t <= 1e-9) continue;
            double px = r.o.x + r.d.x * t - c.x;
            double py = r.o.y + r.d.y * t - c.y;
            if (px * px + py * py > radius * radius) continue;
            if (best < 0.0 || t < best) best = t;
        }
    }
    return best;
}

// True when a wall quad (segment extruded to wall_height) cuts the ray
// strictly before parameter t_hit.
bool wall_blocks(const Ray& r, double t_hit, const FloorPlan& plan) {
    Vec2 o{r.o.x, r.o.y};
    Vec2 d{r.d.x, r.d.y};
    for (const Segment& wseg : plan.walls) {
        Vec2 s = wseg.b - wseg.a;
        double denom = cross(d, s);
        if (std::abs(denom) < 1e-15) continue;
        Vec2 qp = wseg.a - o;
        double t = cross(qp, s) / denom;
        double u = cross(qp, d) / denom;
        if (t <= 1e-9 || t >= t_hit) continue;
        if (u < 0.0 || u > 1.0) continue;
        double z = r.o.z + r.d.z * t;
        if (z >= 0.0 && z <= plan.wall_height) return true;
    }
    return false;
}

} // namespace

BinaryImage project_person(Cell cell, const SensorModel& s, const PersonModel& m,
                           const GridSpec& g, const FloorPlan* plan) {
    BinaryImage img = BinaryImage::zeros(s.image_h, s.image_w);
    CameraFrame cam = CameraFrame::of(s);
    Vec2 c = g.cell_center(cell);

    Vec3 body_mid{c.x, c.y, m.height * 0.5};
    double depth = dot(body_mid - cam.origin, cam.forward);
    if (depth < s.range_min || depth > s.range_max) return img;

    // Conservative pixel bounds from the cylinder's bounding box corners.
    int x_lo = 0, x_hi = s.image_w - 1, y_lo = 0, y_hi = s.image_h - 1;
    bool bounded = true;
    double u_min = 1e30, u_max = -1e30, v_min = 1e30, v_max = -1e30;
    for (int i = 0; i < 8 && bounded; ++i) {
        Vec3 corner{c.x + ((i & 1) ? m.radius : -m.radius),
                    c.y + ((i & 2) ? m.radius : -m.radius),
                    (i & 4) ? m.height : 0.0};
        Vec3 q = cam.to_camera(corner);
        if (q.z <= 1e-6) {
            bounded = false;
            break;
        }
        double u = cam.cx + cam.fx * q.x / q.z;
        double v = cam.cy + cam.fy * q.y / q.z;
        u_min = std::min(u_min, u);
        u_max = std::max(u_max, u);
        v_min = std::min(v_min, v);
        v_max = std::max(v_max, v);
    }
    if (bounded) {
        x_lo = std::max(0, static_cast<int>(std::floor(u_min)) - 1);
        x_hi = std::min(s.image_w - 1, static_cast<int>(std::ceil(u_max)) + 1);
        y_lo = std::max(0, static_cast<int>(std::floor(v_min)) - 1);
        y_hi = std::min(s.image_h - 1, static_cast<int>(std::ceil(v_max)) + 1);
        if (x_lo > x_hi || y_lo > y_hi) return img;
    }

    for (int py = y_lo; py <= y_hi; ++py) {
        for (int px = x_lo; px <= x_hi; ++px) {
            Ray ray{cam.origin, cam.pixel_ray(px + 0.5, py + 0.5)};
            double t = cylinder_hit(ray, c, m.radius, m.height);
            if (t <= 0.0) continue;
            if (plan && wall_blocks(ray, t, *plan)) continue;
            img.at(py, px) = 1;
        }
    }
    return img;
}

std::optional<PixelRect> project_box(const CameraFrame& cam, Vec3 center, Vec3 half_extent) {
    PixelRect r{1e30, 1e30, -1e30, -1e30};
    bool any = false;
    for (int i = 0; i < 8; ++i) {
        Vec3 corner{center.x + ((i & 1) ? half_extent.x : -half_extent.x),
                    center.y + ((i & 2) ? half_extent.y : -half_extent.y),
                    center.z + ((i & 4) ? half_extent.z : -half_extent.z)};
        std::optional<Vec2> p = cam.project(corner);
        if (!p) continue;
        any = true;
        r.x0 = std::min(r.x0, p->x);
        r.x1 = std::max(r.x1, p->x);
        r.y0 = std::min(r.y0, p->y);
        r.y1 = std::max(r.y1, p->y);
    }
    if (!any) return std::nullopt;
    return r;
}

} // namespace wardtrack
