#ifndef FDRKIT_FDR_HPP
#define FDRKIT_FDR_HPP

#include <map>
#include <optional>

#include "fdrkit/admg.hpp"

namespace fdrkit {

// Super-cause, super-effect and super-mediator node sets. Valid triples are
// pairwise disjoint, nonempty, and contained in the graph's nodes.
struct FdrTriple {
    NodeSet x_star;
    NodeSet y_star;
    NodeSet m_star;

    bool operator==(const FdrTriple&) const = default;
};

struct FdrReport {
    bool fdr1 = false;
    bool fdr2 = false;
    bool fdr3 = false;
    std::optional<NodeId> failing_mediator;  // present iff fdr3 is false

    bool all() const { return fdr1 && fdr2 && fdr3; }
};

void validate_triple(const Admg& g, const FdrTriple& t);

// Condition 1: every directed path from x* to y* intersects m*, i.e.
// y* has no member reachable from x* once m* is deleted.
bool check_fdr1(const Admg& g, const FdrTriple& t);

// Condition 2: no backdoor path between x* and any mediator, decided as
// (x* _||_ m*) in the graph with x*'s outgoing arcs removed.
bool check_fdr2(const Admg& g, const FdrTriple& t);

// Condition 3: for each mediator M_i in canonical order,
// (y* _||_ M_i | x* u m*_{-i}) in the graph with arcs into x* and arcs out
// of M_i removed. Returns overall verdict and the first failing mediator.
std::pair<bool, std::optional<NodeId>> check_fdr3(const Admg& g, const FdrTriple& t);

FdrReport check_fdr_triple(const Admg& g, const FdrTriple& t);

// Base set whose supersets containing x form the candidate super-cause
// family: {x} together with the strict ancestors of y*.
NodeSet super_cause_universe(const Admg& g, const NodeId& x, const NodeSet& y_star);

// Candidate mediator region relative to a super-cause candidate s:
// (An(y*) n De(s)) minus bidirected neighbours of s and y*, s and y*.
NodeSet candidate_mediator_region(const Admg& g, const NodeSet& s, const NodeSet& y_star);

// Induced subgraph on {x} u An({y}); strict descendants of y are irrelevant
// to reducibility, so searches run here.
Admg shrink_to_ancestral(const Admg& g, const NodeId& x, const NodeId& y);

// The classical criterion is the super-node criterion restricted to
// singleton cause and effect.
bool check_classic_frontdoor(const Admg& g, const NodeId& x, const NodeId& y, const NodeSet& m);

// u admits backdoor adjustment for (x, y): u contains no descendant of x and
// blocks every backdoor path, decided as (x _||_ y | u) with x's outgoing
// arcs removed.
bool check_backdoor(const Admg& g, const NodeId& x, const NodeId& y, const NodeSet& u);

struct FrontdoorProjection {
    Admg graph;                           // Xs -> Ms -> Ys plus Xs <-> Ys
    std::map<NodeId, NodeSet> members;    // super-node name -> original nodes
};

// Projects an admissible triple onto the three-node front-door shape.
// Throws NotReducibleError when the triple does not pass all conditions.
FrontdoorProjection project_to_frontdoor(const Admg& g, const FdrTriple& t);

}  // namespace fdrkit

#endif
