#include "wardtrack/config.hpp"

#include <fstream>
#include <functional>
#include <map>

#include "wardtrack/errors.hpp"

namespace wardtrack {

using nlohmann::json;

json config_to_json(const PipelineConfig& c) {
    return {{"detector",
             {{"eps_p", c.detector.eps_p},
              {"tau_stop", c.detector.tau_stop},
              {"lambda", c.detector.lambda},
              {"merge_radius", c.detector.merge_radius}}},
            {"tracker",
             {{"v_max", c.tracker.v_max},
              {"max_gap", c.tracker.max_gap},
              {"alpha", c.tracker.alpha},
              {"entrance_cost", c.tracker.entrance_cost},
              {"exit_cost", c.tracker.exit_cost},
              {"blind_gap", c.tracker.blind_gap},
              {"pos_noise", c.tracker.pos_noise}}},
            {"fusion",
             {{"tau_t", c.fusion.tau_t},
              {"r_prox", c.fusion.r_prox},
              {"dwell_min", c.fusion.dwell_min},
              {"consume_clean_on_crossing", c.fusion.consume_clean_on_crossing}}},
            {"eval",
             {{"tau_match", c.eval.tau_match},
              {"baseline_radius", c.eval.baseline_radius}}}};
}

PipelineConfig config_from_json(const json& j) {
    PipelineConfig c;
    if (j.contains("detector")) {
        const json& d = j["detector"];
        c.detector.eps_p = d.value("eps_p", c.detector.eps_p);
        c.detector.tau_stop = d.value("tau_stop", c.detector.tau_stop);
        c.detector.lambda = d.value("lambda", c.detector.lambda);
        c.detector.merge_radius = d.value("merge_radius", c.detector.merge_radius);
    }
    if (j.contains("tracker")) {
        const json& t = j["tracker"];
        c.tracker.v_max = t.value("v_max", c.tracker.v_max);
        c.tracker.max_gap = t.value("max_gap", c.tracker.max_gap);
        c.tracker.alpha = t.value("alpha", c.tracker.alpha);
        c.tracker.entrance_cost = t.value("entrance_cost", c.tracker.entrance_cost);
        c.tracker.exit_cost = t.value("exit_cost", c.tracker.exit_cost);
        c.tracker.blind_gap = t.value("blind_gap", c.tracker.blind_gap);
        c.tracker.pos_noise = t.value("pos_noise", c.tracker.pos_noise);
    }
    if (j.contains("fusion")) {
        const json& f = j["fusion"];
        c.fusion.tau_t = f.value("tau_t", c.fusion.tau_t);
        c.fusion.r_prox = f.value("r_prox", c.fusion.r_prox);
        c.fusion.dwell_min = f.value("dwell_min", c.fusion.dwell_min);
        c.fusion.consume_clean_on_crossing =
            f.value("consume_clean_on_crossing", c.fusion.consume_clean_on_crossing);
    }
    if (j.contains("eval")) {
        const json& e = j["eval"];
        c.eval.tau_match = e.value("tau_match", c.eval.tau_match);
        c.eval.baseline_radius = e.value("baseline_radius", c.eval.baseline_radius);
    }
    return c;
}

PipelineConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path);
    try {
        json j;
        in >> j;
        return config_from_json(j);
    } catch (const json::exception& e) {
        throw DataError(path + ": " + e.what());
    }
}

void apply_override(PipelineConfig& c, const std::string& assignment) {
    size_t eq = assignment.find('=');
    if (eq == std::string::npos)
        throw UsageError("override '" + assignment + "' is not of the form key=value");
    std::string key = assignment.substr(0, eq);
    std::string value = assignment.substr(eq + 1);

    auto as_double = [&](double& slot) {
        size_t used = 0;
        try {
            slot = std::stod(value, &used);
        } catch (const std::exception&) {
            used = std::string::npos;
        }
        if (used != value.size())
            throw UsageError("cannot parse '" + value + "' as a number for " + key);
    };
    auto as_int = [&](int& slot) {
        size_t used = 0;
        try {
            slot = std::stoi(value, &used);
        } catch (const std::exception&) {
            used = std::string::npos;
        }
        if (used != value.size())
            throw UsageError("cannot parse '" + value + "' as an integer for " + key);
    };
    auto as_bool = [&](bool& slot) {
        if (value == "true" || value == "1")
            slot = true;
        else if (value == "false" || value == "0")
            slot = false;
        else
            throw UsageError("cannot parse '" + value + "' as a bool for " + key);
    };

    const std::map<std::string, std::function<void()>> setters = {
        {"detector.eps_p", [&] { as_int(c.detector.eps_p); }},
        {"detector.tau_stop", [&] { as_double(c.detector.tau_stop); }},
        {"detector.lambda", [&] { as_double(c.detector.lambda); }},
        {"detector.merge_radius", [&] { as_double(c.detector.merge_radius); }},
        {"tracker.v_max", [&] { as_double(c.tracker.v_max); }},
        {"tracker.max_gap", [&] { as_double(c.tracker.max_gap); }},
        {"tracker.alpha", [&] { as_double(c.tracker.alpha); }},
        {"tracker.entrance_cost", [&] { as_double(c.tracker.entrance_cost); }},
        {"tracker.exit_cost", [&] { as_double(c.tracker.exit_cost); }},
        {"tracker.blind_gap", [&] { as_double(c.tracker.blind_gap); }},
        {"tracker.pos_noise", [&] { as_double(c.tracker.pos_noise); }},
        {"fusion.tau_t", [&] { as_double(c.fusion.tau_t); }},
        {"fusion.r_prox", [&] { as_double(c.fusion.r_prox); }},
        {"fusion.dwell_min", [&] { as_double(c.fusion.dwell_min); }},
        {"fusion.consume_clean_on_crossing",
         [&] { as_bool(c.fusion.consume_clean_on_crossing); }},
        {"eval.tau_match", [&] { as_double(c.eval.tau_match); }},
        {"eval.baseline_radius", [&] { as_double(c.eval.baseline_radius); }},
    };
    auto it = setters.find(key);
    if (it == setters.end()) throw UsageError("unknown config key '" + key + "'");
    it->second();
}

} // namespace wardtrack
