#include "fdrkit/search.hpp"

#include <algorithm>
#include <functional>

#include "fdrkit/mseparation.hpp"

namespace fdrkit {

namespace {

// Visits subsets of the sorted pool by increasing cardinality, lexicographic
// within a cardinality (the canonical order). Stops when fn returns false.
// min_size 0 starts with the empty subset.
bool for_each_subset(const std::vector<NodeId>& pool, int min_size,
                     const std::function<bool(const NodeSet&)>& fn) {
    const int n = static_cast<int>(pool.size());
    for (int k = min_size; k <= n; ++k) {
        std::vector<int> idx(static_cast<size_t>(k));
        for (int i = 0; i < k; ++i) idx[static_cast<size_t>(i)] = i;
        while (true) {
            NodeSet subset;
            for (int i : idx) subset.insert(pool[static_cast<size_t>(i)]);
            if (!fn(subset)) return false;
            int i = k - 1;
            while (i >= 0 && idx[static_cast<size_t>(i)] == n - k + i) --i;
            if (i < 0) break;
            ++idx[static_cast<size_t>(i)];
            for (int j = i + 1; j < k; ++j) idx[static_cast<size_t>(j)] = idx[static_cast<size_t>(j - 1)] + 1;
        }
    }
    return true;
}

struct SearchContext {
    const Admg* original = nullptr;
    Admg shrunken;
    NodeId x, y;
    NodeSet y_star;
    std::vector<NodeId> universe_others;  // universe minus x, sorted
    bool no_directed_path = false;
};

SearchContext make_context(const Admg& g, const NodeId& x, const NodeId& y) {
    g.checked_index(x);
    g.checked_index(y);
    if (x == y) throw SameNodeError("cause and effect must differ");
    SearchContext ctx{&g, shrink_to_ancestral(g, x, y), x, y, {y}, {}, false};
    if (!ctx.shrunken.descendants({x}).count(y)) {
        ctx.no_directed_path = true;
        return ctx;
    }
    const NodeSet uni = super_cause_universe(ctx.shrunken, x, ctx.y_star);
    for (const auto& v : uni)
        if (v != x) ctx.universe_others.push_back(v);
    return ctx;
}

// Core walk shared by find and enumerate.
EnumerationOutcome run_search(const Admg& g, const NodeId& x, const NodeId& y, bool first_only,
                              std::optional<std::uint64_t> limit, std::vector<CandidateRecord>* trace) {
    SearchContext ctx = make_context(g, x, y);
    EnumerationOutcome out;
    out.shrunken_graph_size = ctx.shrunken.num_nodes();
    out.no_directed_path = ctx.no_directed_path;
    if (ctx.no_directed_path) return out;

    const Admg& gm = ctx.shrunken;
    bool done = false;
    for_each_subset(ctx.universe_others, 0, [&](const NodeSet& extra) {
        NodeSet s = extra;
        s.insert(ctx.x);
        out.stats.s_candidates_visited++;

        const NodeSet region = candidate_mediator_region(gm, s, ctx.y_star);
        out.stats.enumeration_bound += (std::uint64_t{1} << region.size()) - 1;

        const Admg gm_out = gm.cut_outgoing(s);
        const Admg gm_in = gm.cut_incoming(s);
        const std::vector<NodeId> pool(region.begin(), region.end());

        for_each_subset(pool, 1, [&](const NodeSet& m) {
            out.stats.m_candidates_visited++;
            const FdrTriple t{s, ctx.y_star, m};

            out.stats.fdr1_checks++;
            if (gm.reaches_avoiding(s, ctx.y_star, m)) {
                if (trace) trace->push_back({s, m, 1});
                return true;
            }
            out.stats.fdr2_checks++;
            if (!m_separated(gm_out, s, m, {})) {
                if (trace) trace->push_back({s, m, 2});
                return true;
            }
            bool ok3 = true;
            for (const auto& mi : m) {
                out.stats.fdr3_msep_queries++;
                NodeSet rest = m;
                rest.erase(mi);
                if (!m_separated(gm_in.cut_outgoing({mi}), ctx.y_star, {mi}, set_union(s, rest))) {
                    ok3 = false;
                    break;
                }
            }
            if (!ok3) {
                if (trace) trace->push_back({s, m, 3});
                return true;
            }

            if (trace) trace->push_back({s, m, 0});
            out.triples.push_back(t);
            if (first_only || (limit && out.triples.size() >= *limit)) {
                done = true;
                return false;
            }
            return true;
        });
        return !done;
    });

    // Every returned triple must pass the definition on the original graph.
    for (const auto& t : out.triples)
        if (!check_fdr_triple(g, t).all())
            throw Error("internal error: search returned an inadmissible triple");
    return out;
}

}  // namespace

SearchOutcome find_triple(const Admg& g, const NodeId& x, const NodeId& y) {
    EnumerationOutcome e = run_search(g, x, y, true, std::nullopt, nullptr);
    SearchOutcome out;
    out.stats = e.stats;
    out.shrunken_graph_size = e.shrunken_graph_size;
    out.no_directed_path = e.no_directed_path;
    if (!e.triples.empty()) out.result = e.triples.front();
    return out;
}

EnumerationOutcome enumerate_triples(const Admg& g, const NodeId& x, const NodeId& y,
                                     std::optional<std::uint64_t> limit, std::vector<CandidateRecord>* trace) {
    return run_search(g, x, y, false, limit, trace);
}

std::vector<FdrTriple> brute_force_triples(const Admg& g, const NodeId& x, const NodeId& y, int node_cap,
                                           MediatorScope scope) {
    g.checked_index(x);
    g.checked_index(y);
    if (x == y) throw SameNodeError("cause and effect must differ");
    if (g.num_nodes() > node_cap)
        throw CapExceededError("graph has " + std::to_string(g.num_nodes()) + " nodes, oracle cap is " +
                               std::to_string(node_cap));

    std::vector<NodeId> others;
    for (const auto& v : g.nodes())
        if (v != x && v != y) others.push_back(v);

    const NodeSet y_star{y};
    const NodeSet an_y = g.ancestors(y_star);
    std::vector<FdrTriple> found;
    for_each_subset(others, 0, [&](const NodeSet& extra) {
        NodeSet s = extra;
        s.insert(x);
        NodeSet pool_set;
        if (scope == MediatorScope::kOnCausalPaths) {
            pool_set = set_difference(set_intersection(g.descendants(s), an_y), set_union(s, y_star));
        } else {
            pool_set = set_difference(g.node_set(), set_union(s, y_star));
        }
        const std::vector<NodeId> pool(pool_set.begin(), pool_set.end());
        for_each_subset(pool, 1, [&](const NodeSet& m) {
            const FdrTriple t{s, y_star, m};
            if (check_fdr_triple(g, t).all()) found.push_back(t);
            return true;
        });
        return true;
    });
    return found;
}

std::uint64_t search_space_bound(const Admg& g, const NodeId& x, const NodeId& y) {
    SearchContext ctx = make_context(g, x, y);
    if (ctx.no_directed_path) return 0;
    std::uint64_t total = 0;
    for_each_subset(ctx.universe_others, 0, [&](const NodeSet& extra) {
        NodeSet s = extra;
        s.insert(ctx.x);
        const NodeSet region = candidate_mediator_region(ctx.shrunken, s, ctx.y_star);
        total += (std::uint64_t{1} << region.size()) - 1;
        return true;
    });
    return total;
}

}  // namespace fdrkit
