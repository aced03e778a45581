#pragma once

#include <string>

#include <json.hpp>

#include "wardtrack/detector.hpp"
#include "wardtrack/fusion.hpp"
#include "wardtrack/tracker.hpp"

namespace wardtrack {

struct EvalParams {
    double tau_match = 5.0;      // s, prediction-to-truth matching window
    double baseline_radius = 1.0; // m, proximity heuristic radius

    bool operator==(const EvalParams&) const = default;
};

// Every tunable knob of the processing stages. Serializes losslessly:
// from_json(to_json(c)) == c.
struct PipelineConfig {
    DetectorParams detector;
    TrackerParams tracker;
    FusionParams fusion;
    EvalParams eval;

    bool operator==(const PipelineConfig&) const = default;
};

nlohmann::json config_to_json(const PipelineConfig& c);
PipelineConfig config_from_json(const nlohmann::json& j);

PipelineConfig load_config(const std::string& path);

// Applies a dotted-path override like "detector.eps_p=5". Unknown keys or
// unparsable values raise UsageError.
void apply_override(PipelineConfig& c, const std::string& assignment);

} // namespace wardtrack
