#ifndef FDRKIT_MSEPARATION_HPP
#define FDRKIT_MSEPARATION_HPP

#include "fdrkit/admg.hpp"

namespace fdrkit {

// Canonical DAG used to decide m-separation via d-separation: every
// bidirected arc a <-> b becomes a fresh latent node with arcs into a and b.
struct LatentizedDag {
    Admg base;             // directed part only, plus the latent nodes
    NodeSet latent_nodes;  // fresh names, one per original bidirected arc
};

LatentizedDag latent_projection_dag(const Admg& g);

// True iff x and y are m-separated given z in g. Preconditions: x and y
// nonempty, x, y, z pairwise disjoint, all subsets of g's nodes.
bool m_separated(const Admg& g, const NodeSet& x, const NodeSet& y, const NodeSet& z);

// do-calculus rule preconditions (y, z, x, w pairwise disjoint).
// Rule 1, insertion/deletion of observations:
//   (y _||_ z | x u w) in the graph with arcs into x removed.
bool rule1_precondition(const Admg& g, const NodeSet& y, const NodeSet& z, const NodeSet& x, const NodeSet& w);

// Rule 2, intervention/observation exchange:
//   (y _||_ z | x u w) with arcs into x and arcs out of z removed.
// Empty y or z is vacuously true.
bool rule2_precondition(const Admg& g, const NodeSet& y, const NodeSet& z, const NodeSet& x, const NodeSet& w);

// Rule 3, insertion/deletion of interventions:
//   (y _||_ z | x u w) with arcs into x removed, then arcs into
//   z \ An(w) removed (ancestors taken in the x-mutilated graph).
// Empty y or z is vacuously true.
bool rule3_precondition(const Admg& g, const NodeSet& y, const NodeSet& z, const NodeSet& x, const NodeSet& w);

// Mask-level query used by the search internals; preconditions unchecked.
bool m_separated_masks(const Admg& g, Admg::Mask x, Admg::Mask y, Admg::Mask z);

}  // namespace fdrkit

#endif
