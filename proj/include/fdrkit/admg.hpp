#ifndef FDRKIT_ADMG_HPP
#define FDRKIT_ADMG_HPP

#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "fdrkit/errors.hpp"

namespace fdrkit {

// Node names are tokens matching [A-Za-z0-9_]+. The canonical order used
// everywhere (iteration, tie-breaking, serialization) is lexicographic.
using NodeId = std::string;
using NodeSet = std::set<NodeId>;
using ArcList = std::vector<std::pair<NodeId, NodeId>>;

bool is_valid_node_name(const NodeId& name);

NodeSet set_union(const NodeSet& a, const NodeSet& b);
NodeSet set_difference(const NodeSet& a, const NodeSet& b);
NodeSet set_intersection(const NodeSet& a, const NodeSet& b);

// Acyclic directed mixed graph. Immutable after construction; all surgeries
// return new graphs. Directed arcs are (tail, head); bidirected arcs are
// stored with endpoints in canonical order.
class Admg {
public:
    static constexpr int kMaxNodes = 64;

    Admg() = default;  // empty graph

    // Validates and canonicalizes. Throws SelfLoopError, DuplicateArcError,
    // UnknownNodeError or CycleError (reporting one cycle).
    static Admg build(const NodeSet& nodes, const ArcList& directed, const ArcList& bidirected);

    int num_nodes() const { return static_cast<int>(names_.size()); }
    const std::vector<NodeId>& nodes() const { return names_; }
    NodeSet node_set() const { return NodeSet(names_.begin(), names_.end()); }
    bool has_node(const NodeId& name) const { return index_of(name) >= 0; }

    ArcList directed_arcs() const;
    ArcList bidirected_arcs() const;
    bool has_directed(const NodeId& tail, const NodeId& head) const;
    bool has_bidirected(const NodeId& a, const NodeId& b) const;

    // Reflexive ancestor / descendant closure of s.
    NodeSet ancestors(const NodeSet& s) const;
    NodeSet descendants(const NodeSet& s) const;

    // Deterministic topological order (canonical tie-break among ready nodes).
    std::vector<NodeId> topological_order() const;

    // First bidirected-arc-connected neighbours of a, excluding a itself.
    NodeSet bidirected_neighbors(const NodeSet& a) const;

    Admg induced_subgraph(const NodeSet& keep) const;

    // Removes every arc with an arrowhead into s: directed arcs with head in
    // s and bidirected arcs incident to s.
    Admg cut_incoming(const NodeSet& s) const;

    // Removes every directed arc with tail in s; bidirected arcs untouched.
    Admg cut_outgoing(const NodeSet& s) const;

    // Maximal bidirected-connected blocks, in canonical order.
    std::vector<NodeSet> c_components() const;

    // True iff a directed path from src to dst exists in the subgraph induced
    // on nodes outside avoid.
    bool reaches_avoiding(const NodeSet& src, const NodeSet& dst, const NodeSet& avoid) const;

    bool same_structure(const Admg& other) const;

    // --- index/mask layer (used by the search and separation internals) ---
    using Mask = std::uint64_t;

    int index_of(const NodeId& name) const;  // -1 when absent
    int checked_index(const NodeId& name) const;
    const NodeId& name_of(int i) const { return names_[static_cast<size_t>(i)]; }

    Mask mask_of(const NodeSet& s) const;
    NodeSet set_of(Mask m) const;
    Mask full_mask() const;

    Mask parents_mask(int i) const { return pa_[static_cast<size_t>(i)]; }
    Mask children_mask(int i) const { return ch_[static_cast<size_t>(i)]; }
    Mask siblings_mask(int i) const { return sib_[static_cast<size_t>(i)]; }
    const std::vector<std::pair<int, int>>& bidirected_pairs() const { return bi_pairs_; }

    Mask ancestors_mask(Mask s) const;
    Mask descendants_mask(Mask s) const;

private:
    std::vector<NodeId> names_;            // sorted
    std::vector<Mask> pa_, ch_, sib_;      // adjacency masks per node index
    std::vector<std::pair<int, int>> dir_pairs_;  // canonical order
    std::vector<std::pair<int, int>> bi_pairs_;   // (min,max), canonical order
};

}  // namespace fdrkit

#endif
