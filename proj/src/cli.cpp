#include "wardtrack/cli.hpp"

#include <algorithm>
#include <iostream>

#include <CLI11.hpp>

#include "wardtrack/errors.hpp"
#include "wardtrack/pipeline.hpp"

namespace wardtrack::cli {

namespace {

// Shared --config/--set handling; overrides apply on top of the file.
struct ConfigOpts {
    std::string path;
    std::vector<std::string> sets;

    void attach(CLI::App* sub) {
        sub->add_option("--config", path, "pipeline config JSON");
        sub->add_option("--set", sets, "override, e.g. detector.eps_p=5")->type_size(1);
    }
    PipelineConfig resolve() const {
        PipelineConfig c;
        if (!path.empty()) c = load_config(path);
        for (const std::string& s : sets) apply_override(c, s);
        return c;
    }
};

} // namespace

int run(const std::vector<std::string>& args) {
    CLI::App app{"silhouette-based ward tracking and hand-hygiene compliance"};
    app.require_subcommand(1);

    SimulateArgs sim;
    CLI::App* c_sim = app.add_subcommand("simulate", "generate a synthetic scenario");
    c_sim->add_option("--scenario", sim.scenario,
                      "compliant_entry | passby_no_wash | crossing_pair | blind_gap | "
                      "crowded");
    c_sim->add_option("--seed", sim.seed, "RNG seed");
    c_sim->add_option("--agents", sim.agents,
                      "build a mixed crowd of this many agents instead");
    c_sim->add_option("--out", sim.out_dir, "output directory")->required();

    DetectArgs det;
    ConfigOpts det_cfg;
    CLI::App* c_det = app.add_subcommand("detect", "detect people per frame");
    c_det->add_option("--scene", det.scene_path, "scene JSON")->required();
    c_det->add_option("--obs", det.obs_path, "observations JSONL")->required();
    c_det->add_option("--out", det.out_path, "detections JSONL")->required();
    c_det->add_option("--threads", det.threads, "worker threads");
    det_cfg.attach(c_det);

    TrackArgs trk;
    ConfigOpts trk_cfg;
    CLI::App* c_trk = app.add_subcommand("track", "associate detections into tracks");
    c_trk->add_option("--detections", trk.detections_path, "detections JSONL")->required();
    c_trk->add_option("--out", trk.out_path, "tracks JSONL")->required();
    trk_cfg.attach(c_trk);

    FuseArgs fuse;
    ConfigOpts fuse_cfg;
    CLI::App* c_fuse =
        app.add_subcommand("fuse", "fuse dispenser events and doors onto tracks");
    c_fuse->add_option("--scene", fuse.scene_path, "scene JSON")->required();
    c_fuse->add_option("--obs", fuse.obs_path, "observations JSONL")->required();
    c_fuse->add_option("--tracks", fuse.tracks_path, "tracks JSONL")->required();
    c_fuse->add_option("--out-dir", fuse.out_dir, "output directory")->required();
    fuse_cfg.attach(c_fuse);

    ScoreArgs score;
    ConfigOpts score_cfg;
    CLI::App* c_score = app.add_subcommand("score", "score crossings against truth");
    c_score->add_option("--crossings", score.crossings_path, "crossings JSONL")->required();
    c_score->add_option("--truth", score.truth_path, "truth JSONL")->required();
    c_score->add_option("--baseline", score.baseline_path, "baseline crossings JSONL");
    c_score->add_option("--out", score.out_path, "report JSONL")->required();
    c_score->add_flag("--quiet", score.quiet, "suppress the stdout summary");
    score_cfg.attach(c_score);

    RenderArgs ren;
    CLI::App* c_ren = app.add_subcommand("render", "draw tracks and a visit heatmap");
    c_ren->add_option("--scene", ren.scene_path, "scene JSON")->required();
    c_ren->add_option("--tracks", ren.tracks_path, "tracks or labeled tracks JSONL")
        ->required();
    c_ren->add_option("--out-dir", ren.out_dir, "output directory")->required();

    PipelineArgs pipe;
    ConfigOpts pipe_cfg;
    CLI::App* c_pipe = app.add_subcommand("pipeline", "simulate and run every stage");
    c_pipe->add_option("--scenario", pipe.scenario, "scenario name");
    c_pipe->add_option("--seed", pipe.seed, "RNG seed");
    c_pipe->add_option("--agents", pipe.agents, "mixed crowd size instead of a scenario");
    c_pipe->add_option("--out", pipe.out_dir, "output directory")->required();
    c_pipe->add_option("--threads", pipe.threads, "detection worker threads");
    c_pipe->add_flag("--quiet", pipe.quiet, "suppress the stdout summary");
    pipe_cfg.attach(c_pipe);

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);

        if (*c_sim) run_simulate(sim);
        if (*c_det) {
            det.config = det_cfg.resolve();
            run_detect(det);
        }
        if (*c_trk) {
            trk.config = trk_cfg.resolve();
            run_track(trk);
        }
        if (*c_fuse) {
            fuse.config = fuse_cfg.resolve();
            run_fuse(fuse);
        }
        if (*c_score) {
            score.config = score_cfg.resolve();
            run_score(score);
        }
        if (*c_ren) run_render(ren);
        if (*c_pipe) {
            pipe.config = pipe_cfg.resolve();
            run_pipeline(pipe);
        }
        return 0;
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
}

} // namespace wardtrack::cli
