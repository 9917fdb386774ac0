#include "fdrkit/fdr.hpp"

#include "fdrkit/mseparation.hpp"

namespace fdrkit {

void validate_triple(const Admg& g, const FdrTriple& t) {
    if (t.x_star.empty() || t.y_star.empty() || t.m_star.empty())
        throw PreconditionError("triple sets must be nonempty");
    for (const auto& v : t.x_star) g.checked_index(v);
    for (const auto& v : t.y_star) g.checked_index(v);
    for (const auto& v : t.m_star) g.checked_index(v);
    if (!set_intersection(t.x_star, t.y_star).empty() || !set_intersection(t.x_star, t.m_star).empty() ||
        !set_intersection(t.y_star, t.m_star).empty())
        throw PreconditionError("triple sets must be pairwise disjoint");
}

bool check_fdr1(const Admg& g, const FdrTriple& t) {
    validate_triple(g, t);
    return !g.reaches_avoiding(t.x_star, t.y_star, t.m_star);
}

bool check_fdr2(const Admg& g, const FdrTriple& t) {
    validate_triple(g, t);
    return m_separated(g.cut_outgoing(t.x_star), t.x_star, t.m_star, {});
}

std::pair<bool, std::optional<NodeId>> check_fdr3(const Admg& g, const FdrTriple& t) {
    validate_triple(g, t);
    const Admg cut_in = g.cut_incoming(t.x_star);
    for (const auto& mi : t.m_star) {
        NodeSet rest = t.m_star;
        rest.erase(mi);
        const NodeSet given = set_union(t.x_star, rest);
        if (!m_separated(cut_in.cut_outgoing({mi}), t.y_star, {mi}, given)) return {false, mi};
    }
    return {true, std::nullopt};
}

FdrReport check_fdr_triple(const Admg& g, const FdrTriple& t) {
    FdrReport r;
    r.fdr1 = check_fdr1(g, t);
    r.fdr2 = check_fdr2(g, t);
    auto [ok3, failing] = check_fdr3(g, t);
    r.fdr3 = ok3;
    r.failing_mediator = failing;
    return r;
}

NodeSet super_cause_universe(const Admg& g, const NodeId& x, const NodeSet& y_star) {
    g.checked_index(x);
    for (const auto& v : y_star) g.checked_index(v);
    NodeSet out = set_difference(g.ancestors(y_star), y_star);
    out.insert(x);
    return out;
}

NodeSet candidate_mediator_region(const Admg& g, const NodeSet& s, const NodeSet& y_star) {
    const NodeSet core = set_intersection(g.ancestors(y_star), g.descendants(s));
    NodeSet excluded = set_union(g.bidirected_neighbors(s), g.bidirected_neighbors(y_star));
    excluded = set_union(excluded, set_union(s, y_star));
    return set_difference(core, excluded);
}

Admg shrink_to_ancestral(const Admg& g, const NodeId& x, const NodeId& y) {
    g.checked_index(x);
    g.checked_index(y);
    NodeSet keep = g.ancestors({y});
    keep.insert(x);
    return g.induced_subgraph(keep);
}

bool check_classic_frontdoor(const Admg& g, const NodeId& x, const NodeId& y, const NodeSet& m) {
    if (m.empty()) return false;
    return check_fdr_triple(g, FdrTriple{{x}, {y}, m}).all();
}

bool check_backdoor(const Admg& g, const NodeId& x, const NodeId& y, const NodeSet& u) {
    g.checked_index(x);
    g.checked_index(y);
    if (u.count(x) || u.count(y)) throw PreconditionError("adjustment set must be disjoint from {x, y}");
    for (const auto& v : u) g.checked_index(v);
    if (!set_intersection(u, g.descendants({x})).empty()) return false;
    return m_separated(g.cut_outgoing({x}), {x}, {y}, u);
}

FrontdoorProjection project_to_frontdoor(const Admg& g, const FdrTriple& t) {
    if (!check_fdr_triple(g, t).all())
        throw NotReducibleError("triple does not satisfy the reducibility conditions");
    const Admg shape = Admg::build({"Ms", "Xs", "Ys"}, {{"Xs", "Ms"}, {"Ms", "Ys"}}, {{"Xs", "Ys"}});
    FrontdoorProjection out{shape, {}};
    out.members["Xs"] = t.x_star;
    out.members["Ms"] = t.m_star;
    out.members["Ys"] = t.y_star;
    return out;
}

}  // namespace fdrkit
