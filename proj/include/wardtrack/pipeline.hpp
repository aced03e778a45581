#pragma once

#include <string>

#include "wardtrack/config.hpp"
#include "wardtrack/sim.hpp"

namespace wardtrack {

// Stage entry points shared by the CLI subcommands and the end-to-end
// pipeline command, so running stages separately or chained produces
// byte-identical files.

struct SimulateArgs {
    std::string scenario = "compliant_entry";
    uint64_t seed = 1;
    int agents = 0; // >0 selects the mixed crowd built from the crowded templates
    std::string out_dir;
};
void run_simulate(const SimulateArgs& a);

struct DetectArgs {
    std::string scene_path;
    std::string obs_path;
    std::string out_path;
    int threads = 1;
    PipelineConfig config;
};
void run_detect(const DetectArgs& a);

struct TrackArgs {
    std::string detections_path;
    std::string out_path;
    PipelineConfig config;
};
void run_track(const TrackArgs& a);

struct FuseArgs {
    std::string scene_path;
    std::string obs_path;
    std::string tracks_path;
    std::string out_dir; // writes events/labeled_tracks/crossings/baseline_crossings
    PipelineConfig config;
};
void run_fuse(const FuseArgs& a);

struct ScoreArgs {
    std::string crossings_path;
    std::string truth_path;
    std::string baseline_path; // optional
    std::string out_path;
    PipelineConfig config;
    bool quiet = false;
};
void run_score(const ScoreArgs& a);

struct RenderArgs {
    std::string scene_path;
    std::string tracks_path; // plain or labeled
    std::string out_dir;     // writes tracks.svg and heatmap.svg
};
void run_render(const RenderArgs& a);

struct PipelineArgs {
    std::string scenario = "compliant_entry";
    uint64_t seed = 1;
    int agents = 0;
    std::string out_dir;
    int threads = 1;
    PipelineConfig config;
    bool quiet = false;
};
void run_pipeline(const PipelineArgs& a);

} // namespace wardtrack
