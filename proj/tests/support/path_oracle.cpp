#include "support/path_oracle.hpp"

#include <functional>
#include <map>
#include <vector>

namespace fdrkit::testing {

namespace {

struct Edge {
    NodeId a, b;
    bool directed;  // a -> b when true, a <-> b otherwise
    bool arrow_into(const NodeId& v) const { return !directed || b == v; }
};

}  // namespace

bool msep_by_paths(const Admg& g, const NodeSet& x, const NodeSet& y, const NodeSet& z) {
    std::vector<Edge> edges;
    for (const auto& [a, b] : g.directed_arcs()) edges.push_back({a, b, true});
    for (const auto& [a, b] : g.bidirected_arcs()) edges.push_back({a, b, false});

    std::map<NodeId, std::vector<const Edge*>> adj;
    for (const auto& e : edges) {
        adj[e.a].push_back(&e);
        adj[e.b].push_back(&e);
    }

    bool open_path = false;
    std::vector<NodeId> nodes;
    std::vector<const Edge*> trail;

    std::function<void(const NodeId&)> dfs = [&](const NodeId& cur) {
        if (open_path) return;
        if (y.count(cur) && nodes.size() > 1) {
            bool blocked = false;
            for (size_t i = 1; i + 1 < nodes.size(); ++i) {
                const NodeId& v = nodes[i];
                const bool collider = trail[i - 1]->arrow_into(v) && trail[i]->arrow_into(v);
                if (collider) {
                    if (set_intersection(g.descendants({v}), z).empty()) blocked = true;
                } else {
                    if (z.count(v)) blocked = true;
                }
                if (blocked) break;
            }
            if (!blocked) open_path = true;
            return;
        }
        for (const Edge* e : adj[cur]) {
            const NodeId& next = e->a == cur ? e->b : e->a;
            bool revisits = x.count(next) > 0;
            for (const auto& n : nodes) revisits = revisits || n == next;
            if (revisits) continue;
            nodes.push_back(next);
            trail.push_back(e);
            dfs(next);
            nodes.pop_back();
            trail.pop_back();
        }
    };

    for (const auto& s : x) {
        nodes = {s};
        trail.clear();
        dfs(s);
        if (open_path) return false;
    }
    return true;
}

bool all_directed_paths_hit(const Admg& g, const NodeSet& src, const NodeSet& dst, const NodeSet& hit) {
    bool escaped = false;
    std::vector<NodeId> path;
    std::function<void(const NodeId&)> dfs = [&](const NodeId& cur) {
        if (escaped) return;
        if (dst.count(cur)) {
            bool intercepted = false;
            for (const auto& v : path)
                if (hit.count(v)) intercepted = true;
            if (hit.count(cur)) intercepted = true;
            if (!intercepted) escaped = true;
            return;
        }
        for (const auto& [a, b] : g.directed_arcs()) {
            if (a != cur) continue;
            bool seen = false;
            for (const auto& n : path) seen = seen || n == b;
            if (seen || b == cur) continue;
            path.push_back(b);
            dfs(b);
            path.pop_back();
        }
    };
    for (const auto& s : src) {
        if (hit.count(s)) continue;
        path = {};
        dfs(s);
        if (escaped) return false;
    }
    return true;
}

}  // namespace fdrkit::testing
