#include "fdrkit/mseparation.hpp"

#include <bit>
#include <vector>

namespace fdrkit {

namespace {

std::string fresh_latent_name(const Admg& g, const NodeId& a, const NodeId& b) {
    std::string name = "L__" + a + "__" + b;
    while (g.has_node(name)) name += "_";
    return name;
}

void check_query(const Admg& g, const NodeSet& x, const NodeSet& y, const NodeSet& z) {
    if (x.empty() || y.empty()) throw PreconditionError("m-separation query sets x and y must be nonempty");
    for (const auto& v : x) g.checked_index(v);
    for (const auto& v : y) g.checked_index(v);
    for (const auto& v : z) g.checked_index(v);
    if (!set_intersection(x, y).empty() || !set_intersection(x, z).empty() || !set_intersection(y, z).empty())
        throw PreconditionError("m-separation query sets must be pairwise disjoint");
}

void check_disjoint(const Admg& g, std::initializer_list<const NodeSet*> sets) {
    NodeSet seen;
    for (const auto* s : sets) {
        for (const auto& v : *s) {
            g.checked_index(v);
            if (!seen.insert(v).second) throw PreconditionError("rule precondition sets must be pairwise disjoint");
        }
    }
}

}  // namespace

LatentizedDag latent_projection_dag(const Admg& g) {
    NodeSet nodes = g.node_set();
    ArcList directed = g.directed_arcs();
    NodeSet latents;
    for (const auto& [a, b] : g.bidirected_arcs()) {
        const std::string lat = fresh_latent_name(g, a, b);
        nodes.insert(lat);
        latents.insert(lat);
        directed.emplace_back(lat, a);
        directed.emplace_back(lat, b);
    }
    return LatentizedDag{Admg::build(nodes, directed, {}), latents};
}

// Reachability on the latentized DAG, Koller & Friedman style: a ball moves
// "up" (toward parents) or "down" (toward children); a collider passes the
// ball upward only when it has a descendant in z. Latent nodes are never
// conditioned, so they are handled inline without materializing the DAG.
bool m_separated_masks(const Admg& g, Admg::Mask x, Admg::Mask y, Admg::Mask z) {
    const int n = g.num_nodes();
    const auto& bi = g.bidirected_pairs();
    const int total = n + static_cast<int>(bi.size());

    // latent parents of each observed node, as bit offsets n + k
    std::vector<std::vector<int>> lat_pa(static_cast<size_t>(n));
    for (int k = 0; k < static_cast<int>(bi.size()); ++k) {
        lat_pa[static_cast<size_t>(bi[static_cast<size_t>(k)].first)].push_back(n + k);
        lat_pa[static_cast<size_t>(bi[static_cast<size_t>(k)].second)].push_back(n + k);
    }

    // ancestors of z in the latentized DAG (z itself included)
    std::vector<char> anc_z(static_cast<size_t>(total), 0);
    {
        std::vector<int> stack;
        for (int i = 0; i < n; ++i)
            if ((z >> i) & 1) {
                anc_z[static_cast<size_t>(i)] = 1;
                stack.push_back(i);
            }
        while (!stack.empty()) {
            const int v = stack.back();
            stack.pop_back();
            if (v >= n) continue;  // latents are roots
            Admg::Mask p = g.parents_mask(v);
            while (p) {
                const int w = std::countr_zero(p);
                p &= p - 1;
                if (!anc_z[static_cast<size_t>(w)]) {
                    anc_z[static_cast<size_t>(w)] = 1;
                    stack.push_back(w);
                }
            }
            for (int l : lat_pa[static_cast<size_t>(v)])
                if (!anc_z[static_cast<size_t>(l)]) {
                    anc_z[static_cast<size_t>(l)] = 1;
                    stack.push_back(l);
                }
        }
    }

    const auto in_z = [&](int v) { return v < n && (((z >> v) & 1) != 0); };

    // visited[v] bit 0: arrived moving up, bit 1: arrived moving down
    std::vector<char> visited(static_cast<size_t>(total), 0);
    std::vector<std::pair<int, int>> stack;  // (node, dir) with dir 0 = up, 1 = down
    for (int i = 0; i < n; ++i)
        if ((x >> i) & 1) stack.emplace_back(i, 0);

    const auto push_parents = [&](int v) {
        if (v >= n) return;  // latent nodes have no parents
        Admg::Mask p = g.parents_mask(v);
        while (p) {
            const int w = std::countr_zero(p);
            p &= p - 1;
            stack.emplace_back(w, 0);
        }
        for (int l : lat_pa[static_cast<size_t>(v)]) stack.emplace_back(l, 0);
    };
    const auto push_children = [&](int v) {
        if (v >= n) {
            const auto& [a, b] = bi[static_cast<size_t>(v - n)];
            stack.emplace_back(a, 1);
            stack.emplace_back(b, 1);
            return;
        }
        Admg::Mask c = g.children_mask(v);
        while (c) {
            const int w = std::countr_zero(c);
            c &= c - 1;
            stack.emplace_back(w, 1);
        }
    };

    while (!stack.empty()) {
        const auto [v, dir] = stack.back();
        stack.pop_back();
        const char bit = static_cast<char>(1 << dir);
        if (visited[static_cast<size_t>(v)] & bit) continue;
        visited[static_cast<size_t>(v)] |= bit;
        if (v < n && !in_z(v) && ((y >> v) & 1)) return false;
        if (dir == 0) {
            if (!in_z(v)) {
                push_parents(v);
                push_children(v);
            }
        } else {
            if (!in_z(v)) push_children(v);
            if (anc_z[static_cast<size_t>(v)]) push_parents(v);
        }
    }
    return true;
}

bool m_separated(const Admg& g, const NodeSet& x, const NodeSet& y, const NodeSet& z) {
    check_query(g, x, y, z);
    return m_separated_masks(g, g.mask_of(x), g.mask_of(y), g.mask_of(z));
}

bool rule1_precondition(const Admg& g, const NodeSet& y, const NodeSet& z, const NodeSet& x, const NodeSet& w) {
    check_disjoint(g, {&y, &z, &x, &w});
    if (y.empty() || z.empty()) return true;
    return m_separated(g.cut_incoming(x), y, z, set_union(x, w));
}

bool rule2_precondition(const Admg& g, const NodeSet& y, const NodeSet& z, const NodeSet& x, const NodeSet& w) {
    check_disjoint(g, {&y, &z, &x, &w});
    if (y.empty() || z.empty()) return true;
    return m_separated(g.cut_incoming(x).cut_outgoing(z), y, z, set_union(x, w));
}

bool rule3_precondition(const Admg& g, const NodeSet& y, const NodeSet& z, const NodeSet& x, const NodeSet& w) {
    check_disjoint(g, {&y, &z, &x, &w});
    if (y.empty() || z.empty()) return true;
    const Admg gx = g.cut_incoming(x);
    const NodeSet zw = w.empty() ? z : set_difference(z, gx.ancestors(w));
    return m_separated(gx.cut_incoming(zw), y, z, set_union(x, w));
}

}  // namespace fdrkit
