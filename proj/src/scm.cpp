#include "fdrkit/scm.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "fdrkit/graph_io.hpp"
#include "fdrkit/mseparation.hpp"
#include "json.hpp"

namespace fdrkit {

namespace {

struct SplitMix64 {
    std::uint64_t state;
    explicit SplitMix64(std::uint64_t seed) : state(seed) {}
    std::uint64_t next() {
        state += 0x9E3779B97F4A7C15ull;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }
    double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xCBF29CE484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001B3ull;
    }
    return h;
}

std::vector<double> random_cpt(SplitMix64& rng, int rows, int card) {
    std::vector<double> table(static_cast<size_t>(rows) * card);
    for (int r = 0; r < rows; ++r) {
        double sum = 0.0;
        for (int v = 0; v < card; ++v) {
            const double u = rng.next_double();
            table[static_cast<size_t>(r) * card + v] = u;
            sum += u;
        }
        if (sum <= 0.0) {
            for (int v = 0; v < card; ++v) table[static_cast<size_t>(r) * card + v] = 1.0;
            sum = card;
        }
        double clamped_sum = 0.0;
        for (int v = 0; v < card; ++v) {
            double& cell = table[static_cast<size_t>(r) * card + v];
            cell = std::max(cell / sum, 1e-3);
            clamped_sum += cell;
        }
        for (int v = 0; v < card; ++v) table[static_cast<size_t>(r) * card + v] /= clamped_sum;
    }
    return table;
}

int rows_for(const DiscreteSCM::Node& node, const std::vector<DiscreteSCM::Node>& nodes) {
    int rows = 1;
    for (int p : node.parents) rows *= nodes[static_cast<size_t>(p)].card;
    return rows;
}

}  // namespace

std::size_t Distribution::flat_index(const std::vector<int>& assignment) const {
    std::size_t idx = 0;
    for (size_t i = 0; i < variables.size(); ++i) idx = idx * static_cast<size_t>(cards[i]) + static_cast<size_t>(assignment[i]);
    return idx;
}

double Distribution::total_mass() const {
    double s = 0.0;
    for (double p : table) s += p;
    return s;
}

Distribution Distribution::marginal(const NodeSet& keep) const {
    Distribution out;
    std::vector<size_t> keep_pos;
    for (size_t i = 0; i < variables.size(); ++i) {
        if (keep.count(variables[i])) {
            out.variables.push_back(variables[i]);
            out.cards.push_back(cards[i]);
            keep_pos.push_back(i);
        }
    }
    std::size_t cells = 1;
    for (int c : out.cards) cells *= static_cast<size_t>(c);
    out.table.assign(cells, 0.0);

    std::vector<int> asg(variables.size(), 0);
    for (std::size_t flat = 0; flat < table.size(); ++flat) {
        std::size_t idx = 0;
        for (size_t j = 0; j < keep_pos.size(); ++j)
            idx = idx * static_cast<size_t>(out.cards[j]) + static_cast<size_t>(asg[keep_pos[j]]);
        out.table[idx] += table[flat];
        for (size_t i = variables.size(); i-- > 0;) {
            if (++asg[i] < cards[i]) break;
            asg[i] = 0;
        }
    }
    return out;
}

std::size_t max_joint_cells() {
    if (const char* env = std::getenv("FDRKIT_MAX_JOINT")) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
    }
    return std::size_t{1} << 22;
}

DiscreteSCM DiscreteSCM::random(const Admg& g, int card, std::uint64_t seed) {
    if (card < 2) throw PreconditionError("cardinality must be at least 2");
    std::map<NodeId, int> cards;
    for (const auto& v : g.nodes()) cards[v] = card;
    return from_tables(g, cards, {}, seed);
}

DiscreteSCM DiscreteSCM::from_tables(const Admg& g, const std::map<NodeId, int>& cardinalities,
                                     const std::map<NodeId, std::pair<std::vector<NodeId>, std::vector<double>>>& cpts,
                                     std::optional<std::uint64_t> seed) {
    DiscreteSCM m;
    m.graph_ = g;

    const LatentizedDag lat = latent_projection_dag(g);
    std::vector<NodeId> order;
    for (const auto& v : g.nodes()) order.push_back(v);
    for (const auto& v : lat.latent_nodes) order.push_back(v);

    int default_latent_card = 2;
    for (const auto& v : g.nodes()) {
        const auto it = cardinalities.find(v);
        if (it != cardinalities.end()) default_latent_card = std::max(default_latent_card, it->second);
    }

    for (const auto& name : order) {
        Node node;
        node.name = name;
        node.latent = lat.latent_nodes.count(name) > 0;
        const auto it = cardinalities.find(name);
        if (it != cardinalities.end()) {
            if (it->second < 2) throw PreconditionError("cardinality of '" + name + "' must be at least 2");
            node.card = it->second;
        } else if (node.latent) {
            node.card = default_latent_card;
        } else {
            throw ParseError("missing cardinality for observed node '" + name + "'");
        }
        m.id_[name] = static_cast<int>(m.nodes_.size());
        m.nodes_.push_back(std::move(node));
    }

    // latentized parents, canonical (id) order
    for (const auto& [tail, head] : lat.base.directed_arcs())
        m.nodes_[static_cast<size_t>(m.id_.at(head))].parents.push_back(m.id_.at(tail));
    for (auto& node : m.nodes_) std::sort(node.parents.begin(), node.parents.end());

    for (auto& node : m.nodes_) {
        const int rows = rows_for(node, m.nodes_);
        const auto it = cpts.find(node.name);
        if (it == cpts.end()) {
            if (!seed) throw ParseError("no table for '" + node.name + "' and no seed to fill it");
            SplitMix64 rng(*seed ^ fnv1a(node.name));
            node.cpt = random_cpt(rng, rows, node.card);
            continue;
        }
        const auto& [file_parents, file_table] = it->second;
        // validate the parent set matches the latentized structure
        std::vector<int> file_ids;
        for (const auto& p : file_parents) {
            const auto pid = m.id_.find(p);
            if (pid == m.id_.end()) throw ParseError("table for '" + node.name + "' names unknown parent '" + p + "'");
            file_ids.push_back(pid->second);
        }
        std::vector<int> sorted_ids = file_ids;
        std::sort(sorted_ids.begin(), sorted_ids.end());
        if (sorted_ids != node.parents)
            throw ParseError("table for '" + node.name + "' does not match its parent set");
        if (file_table.size() != static_cast<size_t>(rows) * node.card)
            throw ParseError("table for '" + node.name + "' has the wrong size");

        // re-index rows from the file's parent order to canonical order
        node.cpt.assign(file_table.size(), 0.0);
        const int np = static_cast<int>(file_ids.size());
        std::vector<int> asg(static_cast<size_t>(np), 0);  // assignment in file order
        for (int row = 0; row < rows; ++row) {
            std::size_t canon_row = 0;
            for (int cp : node.parents) {
                int value = 0;
                for (int q = 0; q < np; ++q)
                    if (file_ids[static_cast<size_t>(q)] == cp) value = asg[static_cast<size_t>(q)];
                canon_row = canon_row * static_cast<size_t>(m.nodes_[static_cast<size_t>(cp)].card) +
                            static_cast<size_t>(value);
            }
            double row_sum = 0.0;
            for (int v = 0; v < node.card; ++v) {
                const double cell = file_table[static_cast<size_t>(row) * node.card + v];
                if (cell < 0.0) throw ParseError("negative probability in table for '" + node.name + "'");
                node.cpt[canon_row * static_cast<size_t>(node.card) + static_cast<size_t>(v)] = cell;
                row_sum += cell;
            }
            if (std::abs(row_sum - 1.0) > 1e-12)
                throw ParseError("a row of the table for '" + node.name + "' does not sum to 1");
            for (int q = np; q-- > 0;) {
                if (++asg[static_cast<size_t>(q)] < m.nodes_[static_cast<size_t>(file_ids[static_cast<size_t>(q)])].card)
                    break;
                asg[static_cast<size_t>(q)] = 0;
            }
        }
    }
    return m;
}

int DiscreteSCM::card_of(const NodeId& name) const {
    const auto it = id_.find(name);
    if (it == id_.end()) throw UnknownNodeError("unknown node '" + name + "'");
    return nodes_[static_cast<size_t>(it->second)].card;
}

std::vector<NodeId> DiscreteSCM::observed_names() const {
    std::vector<NodeId> out;
    for (const auto& n : nodes_)
        if (!n.latent) out.push_back(n.name);
    return out;
}

namespace {

// Shared enumeration core: walks every assignment of the non-fixed nodes,
// multiplying the factors of nodes outside `dropped`, and accumulates into a
// table over `out_vars` (observed, in canonical order).
Distribution accumulate(const DiscreteSCM& m, const std::map<NodeId, int>& fixed, bool drop_fixed_factors) {
    const auto& nodes = m.nodes();
    const int n = static_cast<int>(nodes.size());

    Distribution out;
    std::size_t out_cells = 1;
    for (const auto& node : nodes) {
        if (node.latent || fixed.count(node.name)) continue;
        out.variables.push_back(node.name);
        out.cards.push_back(node.card);
        out_cells *= static_cast<size_t>(node.card);
    }
    if (out_cells > max_joint_cells())
        throw CapExceededError("joint table would need " + std::to_string(out_cells) + " cells");
    out.table.assign(std::max<std::size_t>(out_cells, 1), 0.0);

    std::vector<int> value(static_cast<size_t>(n), 0);
    std::vector<int> free_ids;
    std::size_t space = 1;
    for (int i = 0; i < n; ++i) {
        const auto it = fixed.find(nodes[static_cast<size_t>(i)].name);
        if (it != fixed.end()) {
            value[static_cast<size_t>(i)] = it->second;
        } else {
            free_ids.push_back(i);
            space *= static_cast<size_t>(nodes[static_cast<size_t>(i)].card);
        }
    }
    if (space > (max_joint_cells() << 8))
        throw CapExceededError("assignment space too large (" + std::to_string(space) + ")");

    std::vector<int> out_ids;
    for (int i = 0; i < n; ++i)
        if (!nodes[static_cast<size_t>(i)].latent && !fixed.count(nodes[static_cast<size_t>(i)].name))
            out_ids.push_back(i);

    for (std::size_t step = 0; step < space; ++step) {
        double p = 1.0;
        for (int i = 0; i < n; ++i) {
            const auto& node = nodes[static_cast<size_t>(i)];
            if (drop_fixed_factors && fixed.count(node.name)) continue;
            std::size_t row = 0;
            for (int pa : node.parents)
                row = row * static_cast<size_t>(nodes[static_cast<size_t>(pa)].card) +
                      static_cast<size_t>(value[static_cast<size_t>(pa)]);
            p *= node.cpt[row * static_cast<size_t>(node.card) + static_cast<size_t>(value[static_cast<size_t>(i)])];
        }
        std::size_t idx = 0;
        for (size_t j = 0; j < out_ids.size(); ++j)
            idx = idx * static_cast<size_t>(out.cards[j]) + static_cast<size_t>(value[static_cast<size_t>(out_ids[j])]);
        out.table[idx] += p;

        for (size_t q = free_ids.size(); q-- > 0;) {
            int& v = value[static_cast<size_t>(free_ids[q])];
            if (++v < nodes[static_cast<size_t>(free_ids[q])].card) break;
            v = 0;
            if (q == 0) break;
        }
    }
    return out;
}

}  // namespace

Distribution joint_distribution(const DiscreteSCM& m) { return accumulate(m, {}, false); }

Distribution interventional_distribution(const DiscreteSCM& m, const DoAssignment& d) {
    for (const auto& [name, v] : d.assignments) {
        const int card = m.card_of(name);
        bool observed = false;
        for (const auto& node : m.nodes())
            if (node.name == name) observed = !node.latent;
        if (!observed) throw UnknownNodeError("cannot intervene on latent node '" + name + "'");
        if (v < 0 || v >= card) throw PreconditionError("value out of range for '" + name + "'");
    }
    return accumulate(m, d.assignments, true);
}

namespace {

std::vector<std::vector<int>> all_assignments(const DiscreteSCM& m, const NodeSet& vars) {
    std::vector<int> cards;
    for (const auto& v : vars) cards.push_back(m.card_of(v));
    std::vector<std::vector<int>> out;
    std::vector<int> cur(cards.size(), 0);
    while (true) {
        out.push_back(cur);
        size_t i = cur.size();
        while (i-- > 0) {
            if (++cur[i] < cards[i]) break;
            cur[i] = 0;
            if (i == 0) return out;
        }
        if (cur.empty()) return out;
    }
}


}  // namespace

Distribution fdr_adjustment(const DiscreteSCM& m, const FdrTriple& t, const std::vector<int>& x_star_value) {
    validate_triple(m.graph(), t);
    if (x_star_value.size() != t.x_star.size()) throw PreconditionError("x* assignment has the wrong arity");
    {
        size_t i = 0;
        for (const auto& v : t.x_star) {
            if (x_star_value[i] < 0 || x_star_value[i] >= m.card_of(v))
                throw PreconditionError("x* assignment out of range for '" + v + "'");
            ++i;
        }
    }

    const Distribution joint = joint_distribution(m);
    // marginals with variables in canonical order: x*, then m*, then y*
    const Distribution p_x = joint.marginal(t.x_star);
    const Distribution p_xm = joint.marginal(set_union(t.x_star, t.m_star));
    const Distribution p_xmy = joint.marginal(set_union(set_union(t.x_star, t.m_star), t.y_star));

    // positions to assemble assignments in each marginal's variable order
    const auto order_index = [](const Distribution& d, const NodeSet& group) {
        std::vector<size_t> pos;
        for (const auto& v : group)
            for (size_t i = 0; i < d.variables.size(); ++i)
                if (d.variables[i] == v) pos.push_back(i);
        return pos;
    };
    const auto assemble = [](const Distribution& d, const std::vector<std::pair<std::vector<size_t>, const std::vector<int>*>>& parts) {
        std::vector<int> asg(d.variables.size(), 0);
        for (const auto& [pos, values] : parts)
            for (size_t i = 0; i < pos.size(); ++i) asg[pos[i]] = (*values)[i];
        return asg;
    };

    const double px = p_x.at(x_star_value);
    if (px <= 0.0) throw ZeroProbabilityError("p(x*) = 0 for the requested assignment");

    const auto m_values = all_assignments(m, t.m_star);
    const auto x_values = all_assignments(m, t.x_star);
    const auto y_values = all_assignments(m, t.y_star);

    const auto xm_x = order_index(p_xm, t.x_star);
    const auto xm_m = order_index(p_xm, t.m_star);
    const auto xmy_x = order_index(p_xmy, t.x_star);
    const auto xmy_m = order_index(p_xmy, t.m_star);
    const auto xmy_y = order_index(p_xmy, t.y_star);

    Distribution out;
    for (const auto& v : t.y_star) {
        out.variables.push_back(v);
        out.cards.push_back(m.card_of(v));
    }
    out.table.assign(y_values.size(), 0.0);

    for (const auto& mv : m_values) {
        const double p_m_given_x = p_xm.at(assemble(p_xm, {{xm_x, &x_star_value}, {xm_m, &mv}})) / px;
        for (const auto& xv : x_values) {
            const double weight = p_m_given_x * p_x.at(xv);
            const double denom = p_xm.at(assemble(p_xm, {{xm_x, &xv}, {xm_m, &mv}}));
            if (denom <= 0.0) {
                if (weight > 0.0)
                    throw ZeroProbabilityError("p(x'*, m*) = 0 on a term with nonzero weight");
                continue;
            }
            for (size_t yi = 0; yi < y_values.size(); ++yi) {
                const double num = p_xmy.at(assemble(p_xmy, {{xmy_x, &xv}, {xmy_m, &mv}, {xmy_y, &y_values[yi]}}));
                out.table[yi] += (num / denom) * weight;
            }
        }
    }
    return out;
}

double equivalence_check(const DiscreteSCM& m, const FdrTriple& t) {
    validate_triple(m.graph(), t);
    double worst = 0.0;
    for (const auto& xv : all_assignments(m, t.x_star)) {
        const Distribution adj = fdr_adjustment(m, t, xv);
        DoAssignment d;
        {
            size_t i = 0;
            for (const auto& v : t.x_star) d.assignments[v] = xv[i++];
        }
        const Distribution truth = interventional_distribution(m, d).marginal(t.y_star);
        for (std::size_t i = 0; i < adj.table.size(); ++i)
            worst = std::max(worst, std::abs(adj.table[i] - truth.table[i]));
    }
    return worst;
}

std::optional<CounterexampleHit> counterexample_search(const Admg& g, const FdrTriple& t, int trials,
                                                       std::uint64_t seed, int card, double tol) {
    validate_triple(g, t);
    for (int i = 0; i < trials; ++i) {
        const DiscreteSCM m = DiscreteSCM::random(g, card, seed + static_cast<std::uint64_t>(i));
        const double diff = equivalence_check(m, t);
        if (diff > tol) return CounterexampleHit{seed + static_cast<std::uint64_t>(i), diff};
    }
    return std::nullopt;
}

Admg conditional_frontdoor_reference_graph() {
    return Admg::build({"U", "V", "X", "Y"},
                       {{"V", "X"}, {"V", "U"}, {"V", "Y"}, {"X", "U"}, {"U", "Y"}},
                       {{"X", "Y"}});
}

namespace {

// Bijection from g's nodes onto ref's nodes preserving both arc sets.
std::optional<std::map<NodeId, NodeId>> find_isomorphism(const Admg& g, const Admg& ref) {
    if (g.num_nodes() != ref.num_nodes()) return std::nullopt;
    std::vector<NodeId> perm = g.nodes();
    std::sort(perm.begin(), perm.end());
    do {
        // map perm[i] -> ref.nodes()[i]
        std::map<NodeId, NodeId> phi;
        for (size_t i = 0; i < perm.size(); ++i) phi[perm[i]] = ref.nodes()[i];
        bool ok = static_cast<int>(g.directed_arcs().size()) == static_cast<int>(ref.directed_arcs().size()) &&
                  g.bidirected_arcs().size() == ref.bidirected_arcs().size();
        for (const auto& [a, b] : g.directed_arcs())
            if (!ok || !ref.has_directed(phi[a], phi[b])) ok = false;
        for (const auto& [a, b] : g.bidirected_arcs())
            if (!ok || !ref.has_bidirected(phi[a], phi[b])) ok = false;
        if (ok) return phi;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return std::nullopt;
}

}  // namespace

Distribution eval_conditional_frontdoor(const DiscreteSCM& m) {
    const Admg ref = conditional_frontdoor_reference_graph();
    const auto phi = find_isomorphism(m.graph(), ref);
    if (!phi) throw GraphMismatchError("model graph is not isomorphic to the reference graph");
    // invert: which model node plays each reference role
    NodeId nu, nv, nx, ny;
    for (const auto& [from, to] : *phi) {
        if (to == "U") nu = from;
        if (to == "V") nv = from;
        if (to == "X") nx = from;
        if (to == "Y") ny = from;
    }

    const Distribution joint = joint_distribution(m);
    const Distribution p_vx = joint.marginal({nv, nx});
    const Distribution p_uvx = joint.marginal({nu, nv, nx});
    const Distribution p_uvxy = joint.marginal({nu, nv, nx, ny});

    const auto at = [&](const Distribution& d, const std::map<NodeId, int>& asg) {
        std::vector<int> v;
        for (const auto& name : d.variables) v.push_back(asg.at(name));
        return d.at(v);
    };

    Distribution out;
    out.variables = {nx, ny};
    out.cards = {m.card_of(nx), m.card_of(ny)};
    out.table.assign(static_cast<size_t>(out.cards[0]) * out.cards[1], 0.0);

    for (int x = 0; x < m.card_of(nx); ++x)
        for (int y = 0; y < m.card_of(ny); ++y) {
            double total = 0.0;
            for (int u = 0; u < m.card_of(nu); ++u)
                for (int v = 0; v < m.card_of(nv); ++v) {
                    const double pvx = at(p_vx, {{nv, v}, {nx, x}});
                    const double pu = pvx > 0.0 ? at(p_uvx, {{nu, u}, {nv, v}, {nx, x}}) / pvx : 0.0;
                    for (int x2 = 0; x2 < m.card_of(nx); ++x2) {
                        const double pvx2 = at(p_vx, {{nv, v}, {nx, x2}});
                        const double den = at(p_uvx, {{nu, u}, {nv, v}, {nx, x2}});
                        const double py = den > 0.0 ? at(p_uvxy, {{nu, u}, {nv, v}, {nx, x2}, {ny, y}}) / den : 0.0;
                        total += py * pu * pvx2;
                    }
                }
            out.table[static_cast<size_t>(x) * out.cards[1] + static_cast<size_t>(y)] = total;
        }
    return out;
}

DiscreteSCM load_model(const std::string& json_text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("model file is not valid JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("graph") || !doc.contains("cardinalities") || !doc.contains("cpts"))
        throw ParseError("model file needs keys 'graph', 'cardinalities' and 'cpts'");

    std::string text;
    for (const auto& line : doc.at("graph")) text += line.get<std::string>() + "\n";
    const Admg g = parse_graph(text).parsed;

    std::map<NodeId, int> cards;
    for (const auto& [name, v] : doc.at("cardinalities").items()) cards[name] = v.get<int>();

    std::map<NodeId, std::pair<std::vector<NodeId>, std::vector<double>>> cpts;
    for (const auto& [name, entry] : doc.at("cpts").items()) {
        std::vector<NodeId> parents;
        for (const auto& p : entry.at("parents")) parents.push_back(p.get<std::string>());
        std::vector<double> table;
        for (const auto& x : entry.at("table")) table.push_back(x.get<double>());
        cpts[name] = {std::move(parents), std::move(table)};
    }

    std::optional<std::uint64_t> seed;
    if (doc.contains("seed")) seed = doc.at("seed").get<std::uint64_t>();
    return DiscreteSCM::from_tables(g, cards, cpts, seed);
}

DiscreteSCM load_model_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open model file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return load_model(ss.str());
}

}  // namespace fdrkit
