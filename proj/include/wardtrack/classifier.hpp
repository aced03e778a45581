#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wardtrack/detector.hpp"
#include "wardtrack/scene.hpp"

namespace wardtrack {

// A recognized hand-hygiene dispenser use, seen by one sensor.
struct DispenserEvent {
    std::string sensor_id;
    std::string dispenser_id;
    double t = 0.0;
};

// Consumes a time-ordered window of one sensor's silhouettes and reports
// dispenser-use events. Implementations must be deterministic.
class DispenserClassifier {
public:
    virtual ~DispenserClassifier() = default;
    virtual std::vector<DispenserEvent> detect(std::span<const Observation> window) const = 0;
};

// First event in the window, if any.
std::optional<DispenserEvent> classify_event(std::span<const Observation> window,
                                             const DispenserClassifier& c);

// Reference classifier: fires when the centroid of a silhouette component
// stays inside the dispenser's projected region for at least dwell_min_frames
// consecutive frames. Centroids are taken per connected component, so a second
// person elsewhere in the view cannot drag the reading off the nozzle. The
// region is the image bounding box of a 0.5 m cube centered on the dispenser
// nozzle. Event time is the midpoint of the dwell.
class DwellClassifier : public DispenserClassifier {
public:
    DwellClassifier(const SensorModel& sensor, const Dispenser& dispenser,
                    int dwell_min_frames, double frame_dt);

    std::vector<DispenserEvent> detect(std::span<const Observation> window) const override;

    const std::optional<PixelRect>& region() const { return region_; }

private:
    std::string sensor_id_;
    std::string dispenser_id_;
    int dwell_min_frames_;
    double frame_dt_; // expected spacing; gaps beyond 1.5x break a dwell
    std::optional<PixelRect> region_;
};

} // namespace wardtrack
