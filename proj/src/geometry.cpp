#include "wardtrack/geometry.hpp"

#include <algorithm>

namespace wardtrack {

double point_segment_distance(Vec2 p, const Segment& s) {
    Vec2 d = s.b - s.a;
    double len2 = dot(d, d);
    if (len2 <= 0.0) return distance(p, s.a);
    double t = dot(p - s.a, d) / len2;
    t = std::clamp(t, 0.0, 1.0);
    return distance(p, s.a + d * t);
}

bool segment_intersection(Vec2 p0, Vec2 p1, Vec2 q0, Vec2 q1,
                          double* t_out, double* u_out) {
    Vec2 r = p1 - p0;
    Vec2 s = q1 - q0;
    double denom = cross(r, s);
    if (std::abs(denom) < 1e-15) return false;
    Vec2 qp = q0 - p0;
    double t = cross(qp, s) / denom;
    double u = cross(qp, r) / denom;
    if (t < 0.0 || t > 1.0 || u < 0.0 || u > 1.0) return false;
    if (t_out) *t_out = t;
    if (u_out) *u_out = u;
    return true;
}

} // namespace wardtrack
