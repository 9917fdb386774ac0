#ifndef FDRKIT_SCM_HPP
#define FDRKIT_SCM_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fdrkit/fdr.hpp"

namespace fdrkit {

// Dense probability table over an ordered list of discrete variables. The
// first variable is the most significant index digit. A joint sums to 1;
// conditional families sum to 1 per condition row.
struct Distribution {
    std::vector<NodeId> variables;
    std::vector<int> cards;
    std::vector<double> table;

    std::size_t size() const { return table.size(); }
    std::size_t flat_index(const std::vector<int>& assignment) const;
    double at(const std::vector<int>& assignment) const { return table[flat_index(assignment)]; }
    double total_mass() const;

    // Marginal over keep (a subsequence of variables, any order given as a
    // set of names; output variables stay in this distribution's order).
    Distribution marginal(const NodeSet& keep) const;
};

struct DoAssignment {
    std::map<NodeId, int> assignments;
};

// Exact discrete semi-Markovian model: one explicit latent variable per
// bidirected arc, CPTs over the latentized parent sets.
class DiscreteSCM {
public:
    struct Node {
        NodeId name;
        int card = 2;
        bool latent = false;
        std::vector<int> parents;   // ids, canonical order
        std::vector<double> cpt;    // row per parent assignment, row length = card
    };

    // CPT rows drawn by normalizing uniform draws, clamped to >= 1e-3 and
    // renormalized; deterministic in seed. Latent cardinality is
    // max(card, 2).
    static DiscreteSCM random(const Admg& g, int card, std::uint64_t seed);

    // Explicit construction; cpts maps node name to (parent names, row-major
    // table). Missing latent entries (cards or cpts) are filled from seed.
    static DiscreteSCM from_tables(const Admg& g, const std::map<NodeId, int>& cardinalities,
                                   const std::map<NodeId, std::pair<std::vector<NodeId>, std::vector<double>>>& cpts,
                                   std::optional<std::uint64_t> seed);

    const Admg& graph() const { return graph_; }
    const std::vector<Node>& nodes() const { return nodes_; }
    int card_of(const NodeId& name) const;
    std::vector<NodeId> observed_names() const;

private:
    friend Distribution joint_distribution(const DiscreteSCM&);
    friend Distribution interventional_distribution(const DiscreteSCM&, const DoAssignment&);

    Admg graph_;                // observed part
    std::vector<Node> nodes_;   // observed (sorted) then latents
    std::map<NodeId, int> id_;
};

// Joint-table cap; overridable through the FDRKIT_MAX_JOINT environment
// variable. Exceeding it raises CapExceededError.
std::size_t max_joint_cells();

// Observational p over the observed variables, latents summed out.
Distribution joint_distribution(const DiscreteSCM& m);

// Truncated factorization: drop the intervened factors, fix their values,
// sum out latents; distribution over the remaining observed variables.
Distribution interventional_distribution(const DiscreteSCM& m, const DoAssignment& d);

// The adjustment sum: p(y*|do(x*)) = sum_m* sum_x'* p(y*|x'*,m*) p(m*|x*) p(x'*),
// evaluated from the observational joint only. x_star_value aligns with the
// canonical order of t.x_star. Throws ZeroProbabilityError when p(x*) = 0 or
// p(x'*, m*) = 0 on a term with nonzero weight.
Distribution fdr_adjustment(const DiscreteSCM& m, const FdrTriple& t, const std::vector<int>& x_star_value);

// max over x* assignments and y* values of |adjustment - truncated factorization|.
double equivalence_check(const DiscreteSCM& m, const FdrTriple& t);

struct CounterexampleHit {
    std::uint64_t seed = 0;
    double diff = 0.0;
};

// Draws models from consecutive seeds and reports the first whose adjustment
// deviates from the interventional truth by more than tol. Absence of a hit
// is evidence, not proof.
std::optional<CounterexampleHit> counterexample_search(const Admg& g, const FdrTriple& t, int trials,
                                                       std::uint64_t seed, int card, double tol);

// Reference four-node graph on which eval_conditional_frontdoor is defined.
Admg conditional_frontdoor_reference_graph();

// Evaluates p(y|do(x)) = sum_{u,v} p(u|v,x) sum_{x'} p(y|u,v,x') p(v,x') on a
// model whose graph is isomorphic to conditional_frontdoor_reference_graph(); the result is a
// conditional family over (X, Y) with one row per x value. Throws
// GraphMismatchError otherwise.
Distribution eval_conditional_frontdoor(const DiscreteSCM& m);

// Model file loader (JSON): keys `graph` (statement list in the graph file
// syntax), `cardinalities`, `cpts` (name -> {parents, table}), and `seed`
// (required when any table is omitted and filled randomly).
DiscreteSCM load_model(const std::string& json_text);
DiscreteSCM load_model_file(const std::string& path);

}  // namespace fdrkit

#endif
