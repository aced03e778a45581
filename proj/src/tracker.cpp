#include "wardtrack/tracker.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "wardtrack/errors.hpp"

namespace wardtrack {

double transition_cost(Vec2 a, Vec2 b, double dt, double v_max, double pos_noise) {
    double sigma = 0.5 * v_max * dt;
    double var = sigma * sigma + 2.0 * pos_noise * pos_noise;
    double d2 = dot(b - a, b - a);
    // Truncation at roughly 2 sigma keeps 1 - e^-2 of the mass, so the log
    // normalizer is a constant plus log var. Without it, moving over one
    // long gap undercuts two short ones and a single walker decomposes into
    // interleaved tracks.
    static const double log_norm = std::log(2.0 * kPi * (1.0 - std::exp(-2.0)));
    return d2 / (2.0 * var) + std::log(var) + log_norm;
}

FlowGraph build_graph(const std::vector<DetectionSet>& frames, const TrackerParams& p) {
    FlowGraph g;
    g.entrance_cost = p.entrance_cost;
    g.exit_cost = p.exit_cost;

    for (const DetectionSet& f : frames)
        for (const Detection& d : f.detections)
            g.nodes.push_back({0, d.t, d.pos, p.alpha});

    // Node ids independent of input order.
    std::sort(g.nodes.begin(), g.nodes.end(), [](const FlowNode& a, const FlowNode& b) {
        if (a.t != b.t) return a.t < b.t;
        if (a.pos.x != b.pos.x) return a.pos.x < b.pos.x;
        return a.pos.y < b.pos.y;
    });
    for (int i = 0; i < static_cast<int>(g.nodes.size()); ++i) g.nodes[i].id = i;

    for (int i = 0; i < static_cast<int>(g.nodes.size()); ++i) {
        for (int j = i + 1; j < static_cast<int>(g.nodes.size()); ++j) {
            double dt = g.nodes[j].t - g.nodes[i].t;
            if (dt <= 0.0) continue;
            if (dt > p.max_gap) break; // nodes are time-sorted
            double dist = distance(g.nodes[i].pos, g.nodes[j].pos);
            if (dist > p.v_max * dt + 2.0 * p.pos_noise) continue;
            g.edges.push_back({i, j, transition_cost(g.nodes[i].pos, g.nodes[j].pos,
                                                     dt, p.v_max, p.pos_noise)});
        }
    }
    return g;
}

namespace {

// Unit-capacity min-cost flow network with residual edges.
struct Network {
    struct Arc {
        int to;
        double cost;
        int cap;
    };
    std::vector<Arc> arcs; // arc 2k and 2k+1 are a residual pair
    std::vector<std::vector<int>> adj;

    explicit Network(int n) : adj(n) {}

    void add(int u, int v, double cost) {
        adj[u].push_back(static_cast<int>(arcs.size()));
        arcs.push_back({v, cost, 1});
        adj[v].push_back(static_cast<int>(arcs.size()));
        arcs.push_back({u, -cost, 0});
    }
};

constexpr double kInf = std::numeric_limits<double>::infinity();

} // namespace

std::vector<Trajectory> solve_flow(const FlowGraph& g, SolveStats* stats) {
    int n = static_cast<int>(g.nodes.size());

    // Cycle check on the detection graph (Kahn), which also yields the
    // topological order used to seed potentials.
    std::vector<std::vector<int>> out(n);
    std::vector<int> indeg(n, 0);
    for (const FlowEdge& e : g.edges) {
        if (e.from < 0 || e.from >= n || e.to < 0 || e.to >= n)
            throw DataError("flow edge references unknown node");
        out[e.from].push_back(e.to);
        ++indeg[e.to];
    }
    std::vector<int> topo;
    {
        std::vector<int> q;
        for (int i = 0; i < n; ++i)
            if (indeg[i] == 0) q.push_back(i);
        while (!q.empty()) {
            int v = q.back();
            q.pop_back();
            topo.push_back(v);
            for (int w : out[v])
                if (--indeg[w] == 0) q.push_back(w);
        }
        if (static_cast<int>(topo.size()) != n)
            throw InvariantError("flow graph contains a cycle");
    }

    // Node split: detection i becomes in=2i -> out=2i+1 carrying alpha.
    int source = 2 * n, sink = 2 * n + 1;
    Network net(2 * n + 2);
    for (int i = 0; i < n; ++i) {
        net.add(source, 2 * i, g.entrance_cost);
        net.add(2 * i, 2 * i + 1, g.nodes[i].local_cost);
        net.add(2 * i + 1, sink, g.exit_cost);
    }
    for (const FlowEdge& e : g.edges) net.add(2 * e.from + 1, 2 * e.to, e.cost);

    int nn = 2 * n + 2;
    std::vector<double> pot(nn, kInf);
    pot[source] = 0.0;

    // Initial potentials by relaxing forward arcs in topological order;
    // handles the negative alpha costs a Dijkstra seed could not.
    {
        std::vector<int> order;
        order.push_back(source);
        for (int v : topo) {
            order.push_back(2 * v);
            order.push_back(2 * v + 1);
        }
        order.push_back(sink);
        std::vector<double> dist(nn, kInf);
        dist[source] = 0.0;
        for (int u : order) {
            if (dist[u] == kInf) continue;
            for (int aid : net.adj[u]) {
                const auto& a = net.arcs[aid];
                if (a.cap <= 0) continue;
                if (dist[u] + a.cost < dist[a.to]) dist[a.to] = dist[u] + a.cost;
            }
        }
        pot = dist;
    }

    double total = 0.0;
    std::vector<double> path_costs;
    std::vector<int> parent_arc(nn);

    while (true) {
        // Dijkstra over reduced costs.
        std::vector<double> dist(nn, kInf);
        std::vector<bool> done(nn, false);
        dist[source] = 0.0;
        std::fill(parent_arc.begin(), parent_arc.end(), -1);
        using QE = std::pair<double, int>;
        std::priority_queue<QE, std::vector<QE>, std::greater<>> pq;
        pq.push({0.0, source});
        while (!pq.empty()) {
            auto [d, u] = pq.top();
            pq.pop();
            if (done[u]) continue;
            done[u] = true;
            if (pot[u] == kInf) continue;
            for (int aid : net.adj[u]) {
                const auto& a = net.arcs[aid];
                if (a.cap <= 0 || pot[a.to] == kInf) continue;
                // Never relax a settled node: rounding in the potential
                // updates can leave residual arcs a few ulps negative, and an
                // epsilon re-relaxation would write a cyclic parent pointer.
                if (done[a.to]) continue;
                double nd = d + a.cost + pot[u] - pot[a.to];
                if (nd < dist[a.to]) {
                    dist[a.to] = nd;
                    parent_arc[a.to] = aid;
                    pq.push({nd, a.to});
                }
            }
        }
        if (dist[sink] == kInf) break;
        double real_cost = dist[sink] + pot[sink]; // pot[source] stays 0
        if (real_cost >= -1e-12) break;

        // Nodes the search did not reach keep valid potentials via the
        // dist[sink] cap; residual arcs touching them stay nonnegative.
        for (int v = 0; v < nn; ++v)
            if (pot[v] < kInf) pot[v] += std::min(dist[v], dist[sink]);

        for (int v = sink; v != source;) {
            int aid = parent_arc[v];
            net.arcs[aid].cap -= 1;
            net.arcs[aid ^ 1].cap += 1;
            v = net.arcs[aid ^ 1].to;
        }
        total += real_cost;
        path_costs.push_back(real_cost);
    }

    // Decompose the final flow into node-disjoint chains.
    std::vector<Trajectory> tracks;
    for (int i = 0; i < n; ++i) {
        // entrance arc of node i is arc 6i (three adds per node, two arcs each)
        int ent = 6 * i;
        if (net.arcs[ent].cap != 0) continue; // unused entrance
        Trajectory tr;
        int v = i;
        while (true) {
            tr.points.push_back({g.nodes[v].t, g.nodes[v].pos});
            int next = -1;
            for (int aid : net.adj[2 * v + 1]) {
                const auto& a = net.arcs[aid];
                if (aid % 2 != 0 || a.cap != 0) continue; // forward arcs carrying flow
                next = (a.to == sink) ? -1 : a.to / 2;
                break;
            }
            if (next < 0) break;
            v = next;
        }
        tracks.push_back(std::move(tr));
    }

    std::sort(tracks.begin(), tracks.end(), [](const Trajectory& a, const Trajectory& b) {
        const TrackPoint& pa = a.points.front();
        const TrackPoint& pb = b.points.front();
        if (pa.t != pb.t) return pa.t < pb.t;
        if (pa.pos.x != pb.pos.x) return pa.pos.x < pb.pos.x;
        return pa.pos.y < pb.pos.y;
    });
    for (int i = 0; i < static_cast<int>(tracks.size()); ++i) tracks[i].id = i;

    if (stats) {
        stats->path_costs = std::move(path_costs);
        stats->total_cost = total;
    }
    return tracks;
}

std::vector<Trajectory> stitch_across_sensors(const std::vector<Trajectory>& tracks,
                                              const TrackerParams& p) {
    int n = static_cast<int>(tracks.size());
    struct Join {
        double cost;
        int a, b; // append tracks[b] after tracks[a]
    };
    std::vector<Join> joins;
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            if (a == b) continue;
            const TrackPoint& tail = tracks[a].points.back();
            const TrackPoint& head = tracks[b].points.front();
            double dt = head.t - tail.t;
            if (dt <= 0.0 || dt > p.blind_gap) continue;
            double dist = distance(tail.pos, head.pos);
            if (dist > p.v_max * dt + 2.0 * p.pos_noise) continue;
            joins.push_back(
                {transition_cost(tail.pos, head.pos, dt, p.v_max, p.pos_noise), a, b});
        }
    }
    std::sort(joins.begin(), joins.end(), [](const Join& x, const Join& y) {
        if (x.cost != y.cost) return x.cost < y.cost;
        if (x.a != y.a) return x.a < y.a;
        return x.b < y.b;
    });

    std::vector<int> next(n, -1);
    std::vector<bool> has_prev(n, false);
    for (const Join& j : joins) {
        if (next[j.a] != -1 || has_prev[j.b]) continue;
        next[j.a] = j.b;
        has_prev[j.b] = true;
    }

    std::vector<Trajectory> merged;
    for (int i = 0; i < n; ++i) {
        if (has_prev[i]) continue;
        Trajectory tr;
        for (int v = i; v != -1; v = next[v])
            tr.points.insert(tr.points.end(), tracks[v].points.begin(),
                             tracks[v].points.end());
        merged.push_back(std::move(tr));
    }

    std::sort(merged.begin(), merged.end(), [](const Trajectory& a, const Trajectory& b) {
        const TrackPoint& pa = a.points.front();
        const TrackPoint& pb = b.points.front();
        if (pa.t != pb.t) return pa.t < pb.t;
        if (pa.pos.x != pb.pos.x) return pa.pos.x < pb.pos.x;
        return pa.pos.y < pb.pos.y;
    });
    for (int i = 0; i < static_cast<int>(merged.size()); ++i) merged[i].id = i;
    return merged;
}

} // namespace wardtrack
