#include "fdrkit/admg.hpp"

#include <algorithm>
#include <bit>
#include <queue>

namespace fdrkit {

bool is_valid_node_name(const NodeId& name) {
    if (name.empty()) return false;
    for (char c : name) {
        const bool ok = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
        if (!ok) return false;
    }
    return true;
}

NodeSet set_union(const NodeSet& a, const NodeSet& b) {
    NodeSet out = a;
    out.insert(b.begin(), b.end());
    return out;
}

NodeSet set_difference(const NodeSet& a, const NodeSet& b) {
    NodeSet out;
    for (const auto& v : a)
        if (!b.count(v)) out.insert(v);
    return out;
}

NodeSet set_intersection(const NodeSet& a, const NodeSet& b) {
    NodeSet out;
    for (const auto& v : a)
        if (b.count(v)) out.insert(v);
    return out;
}

Admg Admg::build(const NodeSet& nodes, const ArcList& directed, const ArcList& bidirected) {
    Admg g;
    g.names_.assign(nodes.begin(), nodes.end());
    if (g.names_.size() > kMaxNodes)
        throw CapExceededError("graph exceeds the " + std::to_string(kMaxNodes) + " node limit");
    for (const auto& n : g.names_)
        if (!is_valid_node_name(n)) throw UnknownNodeError("invalid node name '" + n + "'");

    const int n = g.num_nodes();
    g.pa_.assign(static_cast<size_t>(n), 0);
    g.ch_.assign(static_cast<size_t>(n), 0);
    g.sib_.assign(static_cast<size_t>(n), 0);

    for (const auto& [tail, head] : directed) {
        const int a = g.index_of(tail), b = g.index_of(head);
        if (a < 0) throw UnknownNodeError("unknown node '" + tail + "'");
        if (b < 0) throw UnknownNodeError("unknown node '" + head + "'");
        if (a == b) throw SelfLoopError("self-loop on '" + tail + "'");
        if (g.ch_[static_cast<size_t>(a)] & (Mask{1} << b))
            throw DuplicateArcError("duplicate arc " + tail + " -> " + head);
        g.ch_[static_cast<size_t>(a)] |= Mask{1} << b;
        g.pa_[static_cast<size_t>(b)] |= Mask{1} << a;
        g.dir_pairs_.emplace_back(a, b);
    }
    for (const auto& [u, v] : bidirected) {
        const int a = g.index_of(u), b = g.index_of(v);
        if (a < 0) throw UnknownNodeError("unknown node '" + u + "'");
        if (b < 0) throw UnknownNodeError("unknown node '" + v + "'");
        if (a == b) throw SelfLoopError("self-loop on '" + u + "'");
        if (g.sib_[static_cast<size_t>(a)] & (Mask{1} << b))
            throw DuplicateArcError("duplicate arc " + u + " <-> " + v);
        g.sib_[static_cast<size_t>(a)] |= Mask{1} << b;
        g.sib_[static_cast<size_t>(b)] |= Mask{1} << a;
        g.bi_pairs_.emplace_back(std::min(a, b), std::max(a, b));
    }
    std::sort(g.dir_pairs_.begin(), g.dir_pairs_.end());
    std::sort(g.bi_pairs_.begin(), g.bi_pairs_.end());

    // Acyclicity check; on failure report one directed cycle.
    std::vector<int> state(static_cast<size_t>(n), 0);  // 0 unseen, 1 on stack, 2 done
    std::vector<int> stack, path;
    for (int start = 0; start < n; ++start) {
        if (state[static_cast<size_t>(start)]) continue;
        // iterative DFS with explicit path
        std::vector<std::pair<int, int>> frames;  // (node, next child index)
        frames.emplace_back(start, 0);
        state[static_cast<size_t>(start)] = 1;
        path.push_back(start);
        while (!frames.empty()) {
            auto& [v, it] = frames.back();
            Mask rest = g.ch_[static_cast<size_t>(v)] >> it;
            if (rest == 0) {
                state[static_cast<size_t>(v)] = 2;
                frames.pop_back();
                path.pop_back();
                continue;
            }
            const int c = it + std::countr_zero(rest);
            it = c + 1;
            if (state[static_cast<size_t>(c)] == 1) {
                std::string cyc = g.names_[static_cast<size_t>(c)];
                bool in = false;
                for (int p : path) {
                    if (p == c) in = true;
                    if (in && p != c) cyc += " -> " + g.names_[static_cast<size_t>(p)];
                }
                cyc += " -> " + g.names_[static_cast<size_t>(c)];
                throw CycleError("directed cycle: " + cyc);
            }
            if (state[static_cast<size_t>(c)] == 0) {
                state[static_cast<size_t>(c)] = 1;
                frames.emplace_back(c, 0);
                path.push_back(c);
            }
        }
    }
    return g;
}

int Admg::index_of(const NodeId& name) const {
    const auto it = std::lower_bound(names_.begin(), names_.end(), name);
    if (it == names_.end() || *it != name) return -1;
    return static_cast<int>(it - names_.begin());
}

int Admg::checked_index(const NodeId& name) const {
    const int i = index_of(name);
    if (i < 0) throw UnknownNodeError("unknown node '" + name + "'");
    return i;
}

Admg::Mask Admg::mask_of(const NodeSet& s) const {
    Mask m = 0;
    for (const auto& v : s) m |= Mask{1} << checked_index(v);
    return m;
}

NodeSet Admg::set_of(Mask m) const {
    NodeSet out;
    while (m) {
        const int i = std::countr_zero(m);
        m &= m - 1;
        out.insert(names_[static_cast<size_t>(i)]);
    }
    return out;
}

Admg::Mask Admg::full_mask() const {
    return num_nodes() == kMaxNodes ? ~Mask{0} : (Mask{1} << num_nodes()) - 1;
}

ArcList Admg::directed_arcs() const {
    ArcList out;
    out.reserve(dir_pairs_.size());
    for (auto [a, b] : dir_pairs_) out.emplace_back(names_[static_cast<size_t>(a)], names_[static_cast<size_t>(b)]);
    return out;
}

ArcList Admg::bidirected_arcs() const {
    ArcList out;
    out.reserve(bi_pairs_.size());
    for (auto [a, b] : bi_pairs_) out.emplace_back(names_[static_cast<size_t>(a)], names_[static_cast<size_t>(b)]);
    return out;
}

bool Admg::has_directed(const NodeId& tail, const NodeId& head) const {
    const int a = index_of(tail), b = index_of(head);
    if (a < 0 || b < 0) return false;
    return (ch_[static_cast<size_t>(a)] >> b) & 1;
}

bool Admg::has_bidirected(const NodeId& u, const NodeId& v) const {
    const int a = index_of(u), b = index_of(v);
    if (a < 0 || b < 0) return false;
    return (sib_[static_cast<size_t>(a)] >> b) & 1;
}

Admg::Mask Admg::ancestors_mask(Mask s) const {
    Mask out = s, frontier = s;
    while (frontier) {
        Mask next = 0;
        Mask f = frontier;
        while (f) {
            const int i = std::countr_zero(f);
            f &= f - 1;
            next |= pa_[static_cast<size_t>(i)];
        }
        frontier = next & ~out;
        out |= frontier;
    }
    return out;
}

Admg::Mask Admg::descendants_mask(Mask s) const {
    Mask out = s, frontier = s;
    while (frontier) {
        Mask next = 0;
        Mask f = frontier;
        while (f) {
            const int i = std::countr_zero(f);
            f &= f - 1;
            next |= ch_[static_cast<size_t>(i)];
        }
        frontier = next & ~out;
        out |= frontier;
    }
    return out;
}

NodeSet Admg::ancestors(const NodeSet& s) const { return set_of(ancestors_mask(mask_of(s))); }
NodeSet Admg::descendants(const NodeSet& s) const { return set_of(descendants_mask(mask_of(s))); }

std::vector<NodeId> Admg::topological_order() const {
    const int n = num_nodes();
    std::vector<int> indeg(static_cast<size_t>(n), 0);
    for (int i = 0; i < n; ++i) indeg[static_cast<size_t>(i)] = std::popcount(pa_[static_cast<size_t>(i)]);
    // min-heap on node index == lexicographic tie-break, names are sorted
    std::priority_queue<int, std::vector<int>, std::greater<>> ready;
    for (int i = 0; i < n; ++i)
        if (indeg[static_cast<size_t>(i)] == 0) ready.push(i);
    std::vector<NodeId> order;
    order.reserve(static_cast<size_t>(n));
    while (!ready.empty()) {
        const int v = ready.top();
        ready.pop();
        order.push_back(names_[static_cast<size_t>(v)]);
        Mask c = ch_[static_cast<size_t>(v)];
        while (c) {
            const int w = std::countr_zero(c);
            c &= c - 1;
            if (--indeg[static_cast<size_t>(w)] == 0) ready.push(w);
        }
    }
    return order;
}

NodeSet Admg::bidirected_neighbors(const NodeSet& a) const {
    const Mask am = mask_of(a);
    Mask out = 0;
    Mask f = am;
    while (f) {
        const int i = std::countr_zero(f);
        f &= f - 1;
        out |= sib_[static_cast<size_t>(i)];
    }
    return set_of(out & ~am);
}

Admg Admg::induced_subgraph(const NodeSet& keep) const {
    const Mask km = mask_of(keep);
    ArcList dir, bi;
    for (auto [a, b] : dir_pairs_)
        if (((km >> a) & 1) && ((km >> b) & 1))
            dir.emplace_back(names_[static_cast<size_t>(a)], names_[static_cast<size_t>(b)]);
    for (auto [a, b] : bi_pairs_)
        if (((km >> a) & 1) && ((km >> b) & 1))
            bi.emplace_back(names_[static_cast<size_t>(a)], names_[static_cast<size_t>(b)]);
    return build(keep, dir, bi);
}

Admg Admg::cut_incoming(const NodeSet& s) const {
    const Mask sm = mask_of(s);
    ArcList dir, bi;
    for (auto [a, b] : dir_pairs_)
        if (!((sm >> b) & 1)) dir.emplace_back(names_[static_cast<size_t>(a)], names_[static_cast<size_t>(b)]);
    for (auto [a, b] : bi_pairs_)
        if (!((sm >> a) & 1) && !((sm >> b) & 1))
            bi.emplace_back(names_[static_cast<size_t>(a)], names_[static_cast<size_t>(b)]);
    return build(node_set(), dir, bi);
}

Admg Admg::cut_outgoing(const NodeSet& s) const {
    const Mask sm = mask_of(s);
    ArcList dir;
    for (auto [a, b] : dir_pairs_)
        if (!((sm >> a) & 1)) dir.emplace_back(names_[static_cast<size_t>(a)], names_[static_cast<size_t>(b)]);
    return build(node_set(), dir, bidirected_arcs());
}

std::vector<NodeSet> Admg::c_components() const {
    const int n = num_nodes();
    std::vector<NodeSet> blocks;
    Mask seen = 0;
    for (int i = 0; i < n; ++i) {
        if ((seen >> i) & 1) continue;
        Mask comp = Mask{1} << i, frontier = comp;
        while (frontier) {
            Mask next = 0;
            Mask f = frontier;
            while (f) {
                const int v = std::countr_zero(f);
                f &= f - 1;
                next |= sib_[static_cast<size_t>(v)];
            }
            frontier = next & ~comp;
            comp |= frontier;
        }
        seen |= comp;
        blocks.push_back(set_of(comp));
    }
    return blocks;  // discovery order over sorted names == canonical order
}

bool Admg::reaches_avoiding(const NodeSet& src, const NodeSet& dst, const NodeSet& avoid) const {
    const Mask sm = mask_of(src), dm = mask_of(dst), am = mask_of(avoid);
    Mask reach = sm & ~am, frontier = reach;
    while (frontier) {
        Mask next = 0;
        Mask f = frontier;
        while (f) {
            const int v = std::countr_zero(f);
            f &= f - 1;
            next |= ch_[static_cast<size_t>(v)];
        }
        frontier = next & ~am & ~reach;
        reach |= frontier;
    }
    return (reach & dm) != 0;
}

bool Admg::same_structure(const Admg& other) const {
    return names_ == other.names_ && dir_pairs_ == other.dir_pairs_ && bi_pairs_ == other.bi_pairs_;
}

}  // namespace fdrkit
