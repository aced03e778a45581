#include "wardtrack/compliance.hpp"

#include <algorithm>
#include <cmath>

namespace wardtrack {

ComplianceRates compliance_rate(const std::vector<CrossingRecord>& crossings) {
    ComplianceRates r;
    for (const CrossingRecord& c : crossings) {
        DirectionStats& s = (c.dir == Direction::enter) ? r.entry : r.exit;
        ++s.crossings;
        if (c.compliant) ++s.compliant;
    }
    auto finish = [](DirectionStats& s) {
        if (s.crossings > 0) s.rate = static_cast<double>(s.compliant) / s.crossings;
    };
    finish(r.entry);
    finish(r.exit);
    return r;
}

AccuracyResult score_accuracy(const std::vector<CrossingRecord>& pred,
                              const std::vector<GroundTruthRecord>& truth,
                              double tau_match) {
    struct Pair {
        double dt;
        int ti, pi;
    };
    std::vector<Pair> candidates;
    for (int ti = 0; ti < static_cast<int>(truth.size()); ++ti)
        for (int pi = 0; pi < static_cast<int>(pred.size()); ++pi) {
            if (truth[ti].door_id != pred[pi].door_id) continue;
            if (truth[ti].dir != pred[pi].dir) continue;
            double dt = std::abs(truth[ti].t - pred[pi].t);
            if (dt > tau_match) continue;
            candidates.push_back({dt, ti, pi});
        }
    std::sort(candidates.begin(), candidates.end(), [](const Pair& a, const Pair& b) {
        if (a.dt != b.dt) return a.dt < b.dt;
        if (a.ti != b.ti) return a.ti < b.ti;
        return a.pi < b.pi;
    });

    AccuracyResult res;
    std::vector<bool> truth_used(truth.size(), false), pred_used(pred.size(), false);
    for (const Pair& c : candidates) {
        if (truth_used[c.ti] || pred_used[c.pi]) continue;
        truth_used[c.ti] = true;
        pred_used[c.pi] = true;
        res.pairs.push_back({c.ti, c.pi});
        if (truth[c.ti].washed == pred[c.pi].compliant)
            ++res.matched_correct;
        else
            ++res.matched_wrong;
    }
    res.missed_truth = static_cast<int>(truth.size()) - res.matched_correct -
                       res.matched_wrong;
    res.unmatched_pred = static_cast<int>(pred.size()) -
                         static_cast<int>(res.pairs.size());
    res.accuracy = truth.empty()
                       ? 1.0
                       : static_cast<double>(res.matched_correct) / truth.size();
    return res;
}

std::vector<CrossingRecord> proximity_baseline(const std::vector<Trajectory>& tracks,
                                               const FloorPlan& plan, double radius) {
    std::vector<CrossingRecord> out;
    for (const Trajectory& tr : tracks) {
        for (const DoorCrossing& c : detect_door_crossings(tr, plan)) {
            bool compliant = false;
            for (const TrackPoint& p : tr.points) {
                bool before = p.t < c.t;
                if (c.dir == Direction::enter ? !before : before) continue;
                for (const Dispenser& d : plan.dispensers)
                    if (distance(p.pos, d.pos) <= radius) compliant = true;
                for (const Door& d : plan.doors) {
                    if (d.id == c.door_id) continue; // the crossed door itself
                    if (point_segment_distance(p.pos, d.segment) <= radius)
                        compliant = true;
                }
                if (compliant) break;
            }
            out.push_back({tr.id, c.door_id, c.dir, c.t, compliant});
        }
    }
    std::sort(out.begin(), out.end(), [](const CrossingRecord& a, const CrossingRecord& b) {
        if (a.t != b.t) return a.t < b.t;
        if (a.track_id != b.track_id) return a.track_id < b.track_id;
        return a.door_id < b.door_id;
    });
    return out;
}

} // namespace wardtrack
