#ifndef FDRKIT_SEARCH_HPP
#define FDRKIT_SEARCH_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "fdrkit/fdr.hpp"

namespace fdrkit {

struct SearchStats {
    std::uint64_t s_candidates_visited = 0;
    std::uint64_t m_candidates_visited = 0;
    std::uint64_t fdr1_checks = 0;
    std::uint64_t fdr2_checks = 0;
    std::uint64_t fdr3_msep_queries = 0;
    // Sum over visited super-cause candidates of 2^|Z(S')| - 1; the number of
    // visited mediator candidates never exceeds it.
    std::uint64_t enumeration_bound = 0;
};

struct SearchOutcome {
    std::optional<FdrTriple> result;  // empty means FAIL
    SearchStats stats;
    int shrunken_graph_size = 0;
    bool no_directed_path = false;  // FAIL diagnostic: no directed x -> y path

    bool found() const { return result.has_value(); }
};

struct CandidateRecord {
    NodeSet s;
    NodeSet m;
    int failed_at = 0;  // 0 admissible, otherwise the first failing condition (1..3)
};

struct EnumerationOutcome {
    std::vector<FdrTriple> triples;  // canonical order; empty means FAIL
    SearchStats stats;
    int shrunken_graph_size = 0;
    bool no_directed_path = false;
};

// Deterministic search for the first admissible triple: fixes y* = {y},
// shrinks to the ancestral subgraph, and enumerates super-cause candidates
// (subsets of the universe containing x) and mediator candidates (nonempty
// subsets of the candidate region) by increasing cardinality, lexicographic
// within a cardinality. Conditions are tested in order 1, 2, 3 with
// short-circuit. The first hit is therefore the canonically smallest triple.
SearchOutcome find_triple(const Admg& g, const NodeId& x, const NodeId& y);

// Same walk without early return; collects every admissible triple (up to
// limit when given). The optional trace records every candidate visited and
// the first condition it failed.
EnumerationOutcome enumerate_triples(const Admg& g, const NodeId& x, const NodeId& y,
                                     std::optional<std::uint64_t> limit = std::nullopt,
                                     std::vector<CandidateRecord>* trace = nullptr);

// Which mediator sets the exhaustive oracle quantifies over.
enum class MediatorScope {
    // Nonempty subsets of the causal interior De(S) n An(y) \ (S u {y}).
    // Mediators are nodes on cause-to-effect paths; this is the reading under
    // which the constructive search is complete.
    kOnCausalPaths,
    // Every nonempty M disjoint from S u {y}. Admits degenerate triples whose
    // "mediators" only serve as blockers in condition 3 (see the search
    // tests for a four-node example the constructive search cannot find).
    kUnrestricted,
};

// Definition-level oracle: enumerates all pairs of disjoint nonempty sets
// (S, M) with x in S, y outside both, checking the three conditions directly
// on g (no universe, no candidate-region pruning, no shrinking).
std::vector<FdrTriple> brute_force_triples(const Admg& g, const NodeId& x, const NodeId& y,
                                           int node_cap = 10,
                                           MediatorScope scope = MediatorScope::kOnCausalPaths);

// Exact value of the enumeration-count bound: sum over every super-cause
// candidate S' in the search space of (2^|Z(S')| - 1).
std::uint64_t search_space_bound(const Admg& g, const NodeId& x, const NodeId& y);

}  // namespace fdrkit

#endif
