#include "wardtrack/pipeline.hpp"

#include <filesystem>
#include <iostream>
#include <map>
#include <thread>

#include "wardtrack/classifier.hpp"
#include "wardtrack/errors.hpp"
#include "wardtrack/io.hpp"
#include "wardtrack/render.hpp"

namespace wardtrack {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string joined(const std::string& dir, const char* name) {
    return (fs::path(dir) / name).string();
}

void ensure_dir(const std::string& dir) {
    if (dir.empty()) throw UsageError("output directory must not be empty");
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw DataError("cannot create directory " + dir + ": " + ec.message());
}

} // namespace

void run_simulate(const SimulateArgs& a) {
    Scenario sc = a.agents > 0 ? make_mixed_scenario(a.agents, a.seed)
                               : generate_scenario(scenario_from_name(a.scenario), a.seed);
    ensure_dir(a.out_dir);

    json gen = {{"scenario", a.agents > 0 ? "mixed" : a.scenario},
                {"seed", a.seed},
                {"agents", a.agents > 0 ? a.agents
                                        : static_cast<int>(sc.config.agents.size())}};
    io::save_scene(joined(a.out_dir, "scene.json"), sc.scene, gen);

    SimOutput out = simulate(sc.scene, sc.config);
    json params = gen;
    params["frame_rate"] = sc.config.frame_rate;
    io::save_observations(joined(a.out_dir, "observations.jsonl"), out.observations,
                          params);
    io::save_truth(joined(a.out_dir, "truth.jsonl"), out.truth, params);
    io::save_tracks(joined(a.out_dir, "true_tracks.jsonl"), out.true_tracks, params);
}

void run_detect(const DetectArgs& a) {
    Scene scene = io::load_scene(a.scene_path);
    auto [obs_params, obs] = io::load_observations(a.obs_path);

    std::map<std::string, SilhouetteDictionary> dicts;
    for (const SensorModel& s : scene.sensors)
        dicts.emplace(s.id, build_dictionary(s, scene.grid, scene.person, &scene.plan));

    std::map<double, std::vector<Observation>> by_frame;
    for (Observation& o : obs) by_frame[o.t].push_back(std::move(o));

    std::vector<const std::vector<Observation>*> frames;
    for (const auto& [t, fr] : by_frame) frames.push_back(&fr);

    std::vector<DetectionSet> results(frames.size());
    int threads = std::max(1, a.threads);
    auto worker = [&](int offset) {
        for (size_t i = offset; i < frames.size(); i += threads)
            results[i] = detect_frame(*frames[i], dicts, scene.grid, a.config.detector);
    };
    if (threads == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        for (int k = 0; k < threads; ++k) pool.emplace_back(worker, k);
        for (std::thread& th : pool) th.join();
    }

    io::save_detections(a.out_path, results, config_to_json(a.config)["detector"]);
}

void run_track(const TrackArgs& a) {
    auto [params, frames] = io::load_detections(a.detections_path);
    FlowGraph g = build_graph(frames, a.config.tracker);
    std::vector<Trajectory> tracks = solve_flow(g);
    tracks = stitch_across_sensors(tracks, a.config.tracker);
    io::save_tracks(a.out_path, tracks, config_to_json(a.config)["tracker"]);
}

void run_fuse(const FuseArgs& a) {
    Scene scene = io::load_scene(a.scene_path);
    auto [obs_params, obs] = io::load_observations(a.obs_path);
    auto [track_params, tracks] = io::load_tracks(a.tracks_path);
    ensure_dir(a.out_dir);

    // frame period from the data itself: smallest positive time step
    std::vector<double> ts;
    for (const Observation& o : obs) ts.push_back(o.t);
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
    double frame_dt = 0.1;
    if (ts.size() >= 2) {
        frame_dt = ts[1] - ts[0];
        for (size_t i = 2; i < ts.size(); ++i)
            frame_dt = std::min(frame_dt, ts[i] - ts[i - 1]);
    }

    std::vector<DispenserEvent> events;
    for (const SensorModel& s : scene.sensors) {
        if (s.watches_dispenser.empty()) continue;
        const Dispenser* d = scene.plan.find_dispenser(s.watches_dispenser);
        int dwell_frames =
            std::max(1, static_cast<int>(std::lround(a.config.fusion.dwell_min / frame_dt)));
        DwellClassifier cls(s, *d, dwell_frames, frame_dt);
        std::vector<Observation> mine;
        for (const Observation& o : obs)
            if (o.sensor_id == s.id) mine.push_back(o);
        std::vector<DispenserEvent> ev = cls.detect(mine);
        events.insert(events.end(), ev.begin(), ev.end());
    }
    std::sort(events.begin(), events.end(),
              [](const DispenserEvent& x, const DispenserEvent& y) {
                  if (x.t != y.t) return x.t < y.t;
                  if (x.sensor_id != y.sensor_id) return x.sensor_id < y.sensor_id;
                  return x.dispenser_id < y.dispenser_id;
              });

    FusionResult fused = label_tracks(tracks, events, scene.plan, a.config.fusion);
    std::vector<CrossingRecord> baseline =
        proximity_baseline(tracks, scene.plan, a.config.eval.baseline_radius);

    json fusion_params = config_to_json(a.config)["fusion"];
    io::save_events(joined(a.out_dir, "events.jsonl"), events, fusion_params);
    io::save_labeled_tracks(joined(a.out_dir, "labeled_tracks.jsonl"), fused.tracks,
                            fusion_params);
    json crossing_params = fusion_params;
    crossing_params["matched_events"] = fused.matched_events;
    crossing_params["orphan_events"] = fused.orphan_events;
    io::save_crossings(joined(a.out_dir, "crossings.jsonl"), fused.crossings,
                       crossing_params);
    io::save_crossings(joined(a.out_dir, "baseline_crossings.jsonl"), baseline,
                       {{"radius", a.config.eval.baseline_radius}});
}

void run_score(const ScoreArgs& a) {
    auto [pred_params, pred] = io::load_crossings(a.crossings_path);
    std::vector<GroundTruthRecord> truth = io::truth_from_crossings(a.truth_path);

    AccuracyResult acc = score_accuracy(pred, truth, a.config.eval.tau_match);
    ComplianceRates rates = compliance_rate(pred);

    std::optional<AccuracyResult> base;
    if (!a.baseline_path.empty()) {
        auto [bp, baseline] = io::load_crossings(a.baseline_path);
        base = score_accuracy(baseline, truth, a.config.eval.tau_match);
    }

    io::JsonlWriter w(a.out_path, "report",
                      {{"tau_match", a.config.eval.tau_match},
                       {"truth_records", truth.size()}});
    auto metric = [&w](const char* name, const json& value) {
        w.write({{"metric", name}, {"value", value}});
    };
    metric("accuracy", acc.accuracy);
    metric("matched_correct", acc.matched_correct);
    metric("matched_wrong", acc.matched_wrong);
    metric("missed_truth", acc.missed_truth);
    metric("unmatched_pred", acc.unmatched_pred);
    metric("entry_crossings", rates.entry.crossings);
    metric("entry_compliant", rates.entry.compliant);
    metric("entry_rate", rates.entry.rate ? json(*rates.entry.rate) : json(nullptr));
    metric("exit_crossings", rates.exit.crossings);
    metric("exit_compliant", rates.exit.compliant);
    metric("exit_rate", rates.exit.rate ? json(*rates.exit.rate) : json(nullptr));
    if (base) metric("baseline_accuracy", base->accuracy);

    if (!a.quiet) {
        std::cout << "accuracy " << acc.accuracy << " (" << acc.matched_correct
                  << " correct, " << acc.matched_wrong << " wrong, " << acc.missed_truth
                  << " missed, " << acc.unmatched_pred << " spurious)\n";
        auto show_rate = [](const char* name, const DirectionStats& s) {
            std::cout << name << " compliance " << s.compliant << "/" << s.crossings;
            if (s.rate) std::cout << " = " << *s.rate;
            std::cout << "\n";
        };
        show_rate("entry", rates.entry);
        show_rate("exit", rates.exit);
        if (base) std::cout << "baseline accuracy " << base->accuracy << "\n";
    }
}

void run_render(const RenderArgs& a) {
    Scene scene = io::load_scene(a.scene_path);
    std::vector<LabeledTrack> tracks;
    std::string kind = io::JsonlReader(a.tracks_path, "").kind();
    if (kind == "labeled_tracks") {
        tracks = io::load_labeled_tracks(a.tracks_path).second;
    } else if (kind == "tracks") {
        for (const Trajectory& tr : io::load_tracks(a.tracks_path).second) {
            LabeledTrack lt;
            lt.id = tr.id;
            for (const TrackPoint& p : tr.points) lt.points.push_back({p.t, p.pos, ""});
            tracks.push_back(std::move(lt));
        }
    } else {
        throw DataError(a.tracks_path + ": kind '" + kind + "' is not a track file");
    }
    ensure_dir(a.out_dir);

    auto write_file = [](const std::string& path, const std::string& body) {
        std::ofstream out(path, std::ios::trunc);
        if (!out) throw DataError("cannot open " + path + " for writing");
        out << body;
        if (!out) throw DataError("failed writing " + path);
    };
    write_file(joined(a.out_dir, "tracks.svg"), render_tracks_svg(scene, tracks));
    write_file(joined(a.out_dir, "heatmap.svg"), render_heatmap_svg(scene, tracks));
}

void run_pipeline(const PipelineArgs& a) {
    ensure_dir(a.out_dir);
    run_simulate({a.scenario, a.seed, a.agents, a.out_dir});

    DetectArgs det;
    det.scene_path = joined(a.out_dir, "scene.json");
    det.obs_path = joined(a.out_dir, "observations.jsonl");
    det.out_path = joined(a.out_dir, "detections.jsonl");
    det.threads = a.threads;
    det.config = a.config;
    run_detect(det);

    TrackArgs trk;
    trk.detections_path = det.out_path;
    trk.out_path = joined(a.out_dir, "tracks.jsonl");
    trk.config = a.config;
    run_track(trk);

    FuseArgs fuse;
    fuse.scene_path = det.scene_path;
    fuse.obs_path = det.obs_path;
    fuse.tracks_path = trk.out_path;
    fuse.out_dir = a.out_dir;
    fuse.config = a.config;
    run_fuse(fuse);

    ScoreArgs score;
    score.crossings_path = joined(a.out_dir, "crossings.jsonl");
    score.truth_path = joined(a.out_dir, "truth.jsonl");
    score.baseline_path = joined(a.out_dir, "baseline_crossings.jsonl");
    score.out_path = joined(a.out_dir, "report.jsonl");
    score.config = a.config;
    score.quiet = a.quiet;
    run_score(score);

    RenderArgs ren;
    ren.scene_path = det.scene_path;
    ren.tracks_path = joined(a.out_dir, "labeled_tracks.jsonl");
    ren.out_dir = a.out_dir;
    run_render(ren);
}

} // namespace wardtrack
