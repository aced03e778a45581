#include "wardtrack/classifier.hpp"

#include <cmath>

namespace wardtrack {

namespace {

// Centroids of 4-connected silhouette components, in pixel units.
std::vector<Vec2> component_centroids(const BinaryImage& img) {
    std::vector<Vec2> out;
    std::vector<char> seen(static_cast<size_t>(img.w) * img.h, 0);
    std::vector<int> stack;
    for (int y0 = 0; y0 < img.h; ++y0)
        for (int x0 = 0; x0 < img.w; ++x0) {
            if (!img.at(y0, x0) || seen[y0 * img.w + x0]) continue;
            double sx = 0.0, sy = 0.0;
            int n = 0;
            seen[y0 * img.w + x0] = 1;
            stack.push_back(y0 * img.w + x0);
            while (!stack.empty()) {
                int idx = stack.back();
                stack.pop_back();
                int y = idx / img.w, x = idx % img.w;
                sx += x + 0.5;
                sy += y + 0.5;
                ++n;
                const int dx[4] = {1, -1, 0, 0};
                const int dy[4] = {0, 0, 1, -1};
                for (int k = 0; k < 4; ++k) {
                    int nx = x + dx[k], ny = y + dy[k];
                    if (nx < 0 || ny < 0 || nx >= img.w || ny >= img.h) continue;
                    if (!img.at(ny, nx) || seen[ny * img.w + nx]) continue;
                    seen[ny * img.w + nx] = 1;
                    stack.push_back(ny * img.w + nx);
                }
            }
            out.push_back({sx / n, sy / n});
        }
    return out;
}

} // namespace

std::optional<DispenserEvent> classify_event(std::span<const Observation> window,
                                             const DispenserClassifier& c) {
    std::vector<DispenserEvent> events = c.detect(window);
    if (events.empty()) return std::nullopt;
    return events.front();
}

DwellClassifier::DwellClassifier(const SensorModel& sensor, const Dispenser& dispenser,
                                 int dwell_min_frames, double frame_dt)
    : sensor_id_(sensor.id),
      dispenser_id_(dispenser.id),
      dwell_min_frames_(dwell_min_frames),
      frame_dt_(frame_dt) {
    CameraFrame cam = CameraFrame::of(sensor);
    region_ = project_box(cam, {dispenser.pos.x, dispenser.pos.y, dispenser.height},
                          {0.25, 0.25, 0.25});
}

std::vector<DispenserEvent> DwellClassifier::detect(
    std::span<const Observation> window) const {
    std::vector<DispenserEvent> events;
    if (!region_) return events;

    int streak = 0;
    double streak_start = 0.0, last_t = 0.0;
    auto flush = [&]() {
        if (streak >= dwell_min_frames_)
            events.push_back({sensor_id_, dispenser_id_, (streak_start + last_t) / 2.0});
        streak = 0;
    };

    for (const Observation& obs : window) {
        if (obs.sensor_id != sensor_id_) continue;
        bool in_region = false;
        for (Vec2 c : component_centroids(obs.silhouette))
            if (region_->contains(c)) {
                in_region = true;
                break;
            }

        bool contiguous = streak > 0 && (obs.t - last_t) <= 1.5 * frame_dt_;
        if (in_region) {
            if (!contiguous) {
                flush();
                streak_start = obs.t;
            }
            ++streak;
            last_t = obs.t;
        } else {
            flush();
        }
    }
    flush();
    return events;
}

} // namespace wardtrack
