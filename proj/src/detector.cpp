#include "wardtrack/detector.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <numeric>

#include "wardtrack/errors.hpp"

namespace wardtrack {

int SilhouetteDictionary::min_atom_size() const {
    int m = 0;
    for (const DictAtom& a : atoms) {
        int n = static_cast<int>(a.pixels.size());
        if (m == 0 || n < m) m = n;
    }
    return m;
}

const DictAtom* SilhouetteDictionary::find(Cell c) const {
    auto it = std::lower_bound(atoms.begin(), atoms.end(), c,
                               [](const DictAtom& a, Cell b) { return a.cell < b; });
    if (it == atoms.end() || !(it->cell == c)) return nullptr;
    return &*it;
}

SilhouetteDictionary build_dictionary(const SensorModel& s, const GridSpec& g,
                                      const PersonModel& m, const FloorPlan* plan) {
    s.validate();
    g.validate();
    SilhouetteDictionary dict;
    dict.sensor_id = s.id;
    dict.image_h = s.image_h;
    dict.image_w = s.image_w;
    for (int iy = 0; iy < g.height; ++iy) {
        for (int ix = 0; ix < g.width; ++ix) {
            Cell c{ix, iy};
            BinaryImage im = project_person(c, s, m, g, plan);
            DictAtom atom;
            atom.cell = c;
            for (int i = 0; i < static_cast<int>(im.px.size()); ++i)
                if (im.px[i]) atom.pixels.push_back(i);
            if (!atom.pixels.empty()) dict.atoms.push_back(std::move(atom));
        }
    }
    return dict;
}

double resolve_tau_stop(const SilhouetteDictionary& dict, const DetectorParams& p) {
    if (p.tau_stop >= 0.0) return p.tau_stop;
    return 0.05 * dict.min_atom_size();
}

OccupancyEstimate pursue(const Observation& y, const SilhouetteDictionary& dict,
                         int eps_p, double tau_stop, double lambda) {
    if (y.silhouette.h != dict.image_h || y.silhouette.w != dict.image_w)
        throw DataError("sensor " + y.sensor_id + ": silhouette is " +
                        std::to_string(y.silhouette.w) + "x" + std::to_string(y.silhouette.h) +
                        " but the dictionary expects " + std::to_string(dict.image_w) + "x" +
                        std::to_string(dict.image_h));

    OccupancyEstimate est;
    est.sensor_id = y.sensor_id;
    est.t = y.t;

    const std::vector<uint8_t>& obs = y.silhouette.px;
    int misses = y.silhouette.count();
    int overcover = 0;

    // Atoms that never touch y can only lose; drop them up front.
    struct Candidate {
        const DictAtom* atom;
        std::vector<int> in;  // pixels inside y
        std::vector<int> out; // pixels outside y
        bool taken = false;
    };
    std::vector<Candidate> cands;
    for (const DictAtom& a : dict.atoms) {
        Candidate c{&a, {}, {}, false};
        for (int p : a.pixels)
            (obs[p] ? c.in : c.out).push_back(p);
        if (!c.in.empty()) cands.push_back(std::move(c));
    }

    std::vector<uint8_t> covered(obs.size(), 0);
    int budget = std::max(0, eps_p);
    while (static_cast<int>(est.occupied_cells.size()) < budget && misses > 0) {
        double best_gain = -std::numeric_limits<double>::infinity();
        int best = -1;
        int best_hits = 0;
        for (int i = 0; i < static_cast<int>(cands.size()); ++i) {
            Candidate& c = cands[i];
            if (c.taken) continue;
            int hits = 0;
            for (int p : c.in) hits += 1 - covered[p];
            double gain = hits - lambda * static_cast<double>(c.out.size());
            if (gain > best_gain) { // candidates are cell-ordered; first wins ties
                best_gain = gain;
                best = i;
                best_hits = hits;
            }
        }
        if (best < 0 || best_gain <= tau_stop) break;

        // Residual must strictly decrease: newly covered misses have to
        // outnumber the new false covers.
        Candidate& c = cands[best];
        int new_over = 0;
        for (int p : c.out) new_over += !covered[p];
        if (best_hits <= new_over) break;

        c.taken = true;
        for (int p : c.atom->pixels) covered[p] = 1;
        misses -= best_hits;
        overcover += new_over;
        est.occupied_cells.push_back(c.atom->cell);
    }

    std::sort(est.occupied_cells.begin(), est.occupied_cells.end());
    est.residual_energy = misses + overcover;
    return est;
}

DetectionSet detect_frame(const std::vector<Observation>& frame,
                          const std::map<std::string, SilhouetteDictionary>& dicts,
                          const GridSpec& g, const DetectorParams& params) {
    DetectionSet out;
    if (frame.empty()) return out;
    out.t = frame.front().t;

    struct Raw {
        std::string sensor_id;
        Cell cell;
        Vec2 pos;
    };
    std::vector<Raw> raw;

    std::vector<const Observation*> ordered;
    for (const Observation& o : frame) ordered.push_back(&o);
    std::sort(ordered.begin(), ordered.end(),
              [](const Observation* a, const Observation* b) {
                  return a->sensor_id < b->sensor_id;
              });

    for (const Observation* o : ordered) {
        if (o->t != out.t)
            throw DataError("detect_frame: mixed timestamps " + std::to_string(o->t) +
                            " and " + std::to_string(out.t));
        auto it = dicts.find(o->sensor_id);
        if (it == dicts.end())
            throw DataError("no dictionary for sensor " + o->sensor_id);
        OccupancyEstimate est =
            pursue(*o, it->second, params.eps_p, resolve_tau_stop(it->second, params),
                   params.lambda);
        for (Cell c : est.occupied_cells)
            raw.push_back({o->sensor_id, c, g.cell_center(c)});
    }

    // Single-linkage merge of estimates within merge_radius.
    int n = static_cast<int>(raw.size());
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int v) {
        while (parent[v] != v) v = parent[v] = parent[parent[v]];
        return v;
    };
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (distance(raw[i].pos, raw[j].pos) <= params.merge_radius)
                parent[find(i)] = find(j);

    std::map<int, std::vector<int>> groups;
    for (int i = 0; i < n; ++i) groups[find(i)].push_back(i);

    for (auto& [root, members] : groups) {
        std::sort(members.begin(), members.end(), [&](int a, int b) {
            if (raw[a].sensor_id != raw[b].sensor_id)
                return raw[a].sensor_id < raw[b].sensor_id;
            return raw[a].cell < raw[b].cell;
        });
        Vec2 centroid{0.0, 0.0};
        for (int i : members) centroid = centroid + raw[i].pos;
        centroid = centroid * (1.0 / members.size());
        Detection d;
        d.t = out.t;
        d.sensor_id = raw[members.front()].sensor_id;
        d.cell = raw[members.front()].cell;
        d.pos = centroid;
        out.detections.push_back(std::move(d));
    }

    std::sort(out.detections.begin(), out.detections.end(),
              [](const Detection& a, const Detection& b) {
                  if (a.sensor_id != b.sensor_id) return a.sensor_id < b.sensor_id;
                  return a.cell < b.cell;
              });
    return out;
}

} // namespace wardtrack
