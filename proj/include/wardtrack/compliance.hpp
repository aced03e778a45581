#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wardtrack/fusion.hpp"

namespace wardtrack {

// One true room entry or exit from the simulator.
struct GroundTruthRecord {
    std::string person_id;
    std::string door_id;
    Direction dir = Direction::enter;
    double t = 0.0;
    bool washed = false;
};

struct DirectionStats {
    int crossings = 0;
    int compliant = 0;
    std::optional<double> rate; // absent when there were no crossings
};

struct ComplianceRates {
    DirectionStats entry;
    DirectionStats exit;
};

ComplianceRates compliance_rate(const std::vector<CrossingRecord>& crossings);

// Greedy one-to-one matching of predictions to truth: candidate pairs share
// door and direction and lie within tau_match seconds; closest-in-time pairs
// match first. A matched pair is correct when the compliance bits agree.
struct MatchedPair {
    int truth_index = 0;
    int pred_index = 0;
};

struct AccuracyResult {
    double accuracy = 1.0; // correct / |truth|; vacuously 1 for empty truth
    int matched_correct = 0;
    int matched_wrong = 0;
    int missed_truth = 0;
    int unmatched_pred = 0;
    std::vector<MatchedPair> pairs;
};

AccuracyResult score_accuracy(const std::vector<CrossingRecord>& pred,
                              const std::vector<GroundTruthRecord>& truth,
                              double tau_match = 5.0);

// Proximity heuristic: an entry is compliant when the track passed within
// radius of any dispenser or any other door before the crossing; an exit,
// after it. The door being crossed itself does not count.
std::vector<CrossingRecord> proximity_baseline(const std::vector<Trajectory>& tracks,
                                               const FloorPlan& plan,
                                               double radius = 1.0);

} // namespace wardtrack
