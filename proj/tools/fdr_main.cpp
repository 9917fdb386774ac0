#include <cstdint>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "fdrkit/graph_io.hpp"
#include "fdrkit/mseparation.hpp"
#include "fdrkit/scm.hpp"
#include "fdrkit/search.hpp"
#include "json.hpp"

namespace {

using namespace fdrkit;
using nlohmann::json;

constexpr int kExitFound = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitCap = 3;

NodeSet parse_set(const std::string& csv, const char* flag, bool allow_empty = false) {
    NodeSet out;
    std::string item;
    std::istringstream in(csv);
    while (std::getline(in, item, ',')) {
        if (item.empty()) throw ParseError(std::string("empty name in ") + flag);
        out.insert(item);
    }
    if (out.empty() && !allow_empty) throw ParseError(std::string(flag) + " must name at least one node");
    return out;
}

std::string brace_list(const NodeSet& s) {
    std::string out = "{";
    bool first = true;
    for (const auto& v : s) {
        if (!first) out += ",";
        out += v;
        first = false;
    }
    return out + "}";
}

json json_set(const NodeSet& s) { return json(std::vector<std::string>(s.begin(), s.end())); }

json json_stats(const SearchStats& st) {
    return json{{"s_candidates_visited", st.s_candidates_visited},
                {"m_candidates_visited", st.m_candidates_visited},
                {"fdr1_checks", st.fdr1_checks},
                {"fdr2_checks", st.fdr2_checks},
                {"fdr3_msep_queries", st.fdr3_msep_queries},
                {"enumeration_bound", st.enumeration_bound}};
}

void print_stats(const SearchStats& st) {
    std::cout << "stats: S'=" << st.s_candidates_visited << " M'=" << st.m_candidates_visited
              << " fdr1=" << st.fdr1_checks << " fdr2=" << st.fdr2_checks
              << " fdr3_queries=" << st.fdr3_msep_queries << " bound=" << st.enumeration_bound << "\n";
}

std::string triple_line(const FdrTriple& t) {
    return "X*=" + brace_list(t.x_star) + " Y*=" + brace_list(t.y_star) + " M*=" + brace_list(t.m_star);
}

int cmd_check(const std::string& file, const std::string& cause, const std::string& effect,
              const std::string& xstar, const std::string& mstar, const std::string& ystar, bool as_json) {
    const Admg g = parse_graph_file(file).parsed;
    g.checked_index(cause);
    g.checked_index(effect);
    FdrTriple t;
    t.x_star = parse_set(xstar, "--xstar");
    t.m_star = parse_set(mstar, "--mstar");
    t.y_star = ystar.empty() ? NodeSet{effect} : parse_set(ystar, "--ystar");
    const FdrReport r = check_fdr_triple(g, t);
    if (as_json) {
        json out{{"xstar", json_set(t.x_star)},
                 {"ystar", json_set(t.y_star)},
                 {"mstar", json_set(t.m_star)},
                 {"verdicts", json{{"fdr1", r.fdr1}, {"fdr2", r.fdr2}, {"fdr3", r.fdr3}}}};
        if (r.failing_mediator) out["failing_mediator"] = *r.failing_mediator;
        std::cout << out.dump() << "\n";
    } else {
        std::cout << "FDR1 " << (r.fdr1 ? "pass" : "fail") << "\n";
        std::cout << "FDR2 " << (r.fdr2 ? "pass" : "fail") << "\n";
        std::cout << "FDR3 " << (r.fdr3 ? "pass" : "fail");
        if (r.failing_mediator) std::cout << " (first failing mediator: " << *r.failing_mediator << ")";
        std::cout << "\n";
        std::cout << (r.all() ? "reducible with the given triple" : "not reducible with the given triple") << "\n";
    }
    return r.all() ? kExitFound : kExitFail;
}

int cmd_find(const std::string& file, const std::string& cause, const std::string& effect, bool stats,
             bool as_json) {
    const Admg g = parse_graph_file(file).parsed;
    const SearchOutcome out = find_triple(g, cause, effect);
    if (as_json) {
        json j{{"stats", json_stats(out.stats)}};
        if (out.found()) {
            j["xstar"] = json_set(out.result->x_star);
            j["ystar"] = json_set(out.result->y_star);
            j["mstar"] = json_set(out.result->m_star);
        } else {
            j["result"] = "FAIL";
            j["no_directed_path"] = out.no_directed_path;
        }
        std::cout << j.dump() << "\n";
    } else {
        if (out.found())
            std::cout << triple_line(*out.result) << "\n";
        else
            std::cout << "FAIL" << (out.no_directed_path ? " (no directed path from cause to effect)" : "") << "\n";
        if (stats) {
            print_stats(out.stats);
            std::cout << "search-space bound: " << search_space_bound(g, cause, effect) << "\n";
        }
    }
    return out.found() ? kExitFound : kExitFail;
}

int cmd_enumerate(const std::string& file, const std::string& cause, const std::string& effect,
                  std::uint64_t limit, bool stats, bool as_json) {
    const Admg g = parse_graph_file(file).parsed;
    const std::optional<std::uint64_t> lim = limit > 0 ? std::optional<std::uint64_t>(limit) : std::nullopt;
    const EnumerationOutcome out = enumerate_triples(g, cause, effect, lim);
    if (as_json) {
        json arr = json::array();
        for (const auto& t : out.triples)
            arr.push_back(json{{"xstar", json_set(t.x_star)}, {"ystar", json_set(t.y_star)}, {"mstar", json_set(t.m_star)}});
        std::cout << json{{"triples", arr}, {"stats", json_stats(out.stats)}}.dump() << "\n";
    } else {
        for (const auto& t : out.triples) std::cout << triple_line(t) << "\n";
        if (out.triples.empty())
            std::cout << "FAIL" << (out.no_directed_path ? " (no directed path from cause to effect)" : "") << "\n";
        if (stats) {
            print_stats(out.stats);
            std::cout << "search-space bound: " << search_space_bound(g, cause, effect) << "\n";
        }
    }
    return out.triples.empty() ? kExitFail : kExitFound;
}

int cmd_msep(const std::string& file, const std::string& xs, const std::string& ys, const std::string& given,
             const std::string& cut_in, const std::string& cut_out) {
    Admg g = parse_graph_file(file).parsed;
    const NodeSet x = parse_set(xs, "--x");
    const NodeSet y = parse_set(ys, "--y");
    const NodeSet z = given.empty() ? NodeSet{} : parse_set(given, "--given", true);
    if (!cut_in.empty()) g = g.cut_incoming(parse_set(cut_in, "--cut-in"));
    if (!cut_out.empty()) g = g.cut_outgoing(parse_set(cut_out, "--cut-out"));
    const bool sep = m_separated(g, x, y, z);
    std::cout << (sep ? "separated" : "connected") << "\n";
    return sep ? kExitFound : kExitFail;
}

int cmd_verify(const std::string& file, const std::string& cause, const std::string& effect, int trials,
               std::uint64_t seed, int card, double tol, bool as_json) {
    const Admg g = parse_graph_file(file).parsed;
    const SearchOutcome found = find_triple(g, cause, effect);
    if (!found.found()) {
        if (as_json)
            std::cout << json{{"result", "FAIL"}, {"no_directed_path", found.no_directed_path}}.dump() << "\n";
        else
            std::cout << "FAIL: graph is not reducible for this cause/effect pair\n";
        return kExitFail;
    }
    double worst = 0.0;
    for (int i = 0; i < trials; ++i) {
        const DiscreteSCM m = DiscreteSCM::random(g, card, seed + static_cast<std::uint64_t>(i));
        worst = std::max(worst, equivalence_check(m, *found.result));
    }
    const bool pass = worst <= tol;
    if (as_json) {
        std::cout << json{{"xstar", json_set(found.result->x_star)},
                          {"ystar", json_set(found.result->y_star)},
                          {"mstar", json_set(found.result->m_star)},
                          {"trials", trials},
                          {"max_abs_diff", worst},
                          {"pass", pass}}
                         .dump()
                  << "\n";
    } else {
        std::cout << triple_line(*found.result) << "\n";
        if (trials == 0) std::cout << "warning: 0 trials requested, vacuous pass\n";
        std::cout << "max |adjustment - interventional| over " << trials << " trials: " << worst << "\n";
        std::cout << (pass ? "PASS" : "FAIL") << " (tolerance " << tol << ")\n";
    }
    return pass ? kExitFound : kExitFail;
}

int cmd_adjust(const std::string& file, const std::string& xstar, const std::string& ystar,
               const std::string& mstar, bool as_json) {
    const DiscreteSCM m = load_model_file(file);
    FdrTriple t;
    t.x_star = parse_set(xstar, "--xstar");
    t.y_star = parse_set(ystar, "--ystar");
    t.m_star = parse_set(mstar, "--mstar");
    validate_triple(m.graph(), t);

    double worst = 0.0;
    json rows = json::array();
    std::vector<int> xv(t.x_star.size(), 0);
    std::vector<int> cards;
    for (const auto& v : t.x_star) cards.push_back(m.card_of(v));
    bool more = true;
    while (more) {
        const Distribution adj = fdr_adjustment(m, t, xv);
        DoAssignment d;
        {
            size_t i = 0;
            for (const auto& v : t.x_star) d.assignments[v] = xv[i++];
        }
        const Distribution truth = interventional_distribution(m, d).marginal(t.y_star);
        double diff = 0.0;
        for (std::size_t i = 0; i < adj.table.size(); ++i)
            diff = std::max(diff, std::abs(adj.table[i] - truth.table[i]));
        worst = std::max(worst, diff);

        if (as_json) {
            rows.push_back(json{{"x", xv}, {"adjustment", adj.table}, {"interventional", truth.table}, {"max_abs_diff", diff}});
        } else {
            std::cout << "do(" << brace_list(t.x_star) << " = [";
            for (size_t i = 0; i < xv.size(); ++i) std::cout << (i ? "," : "") << xv[i];
            std::cout << "])\n";
            for (std::size_t i = 0; i < adj.table.size(); ++i)
                std::cout << "  y index " << i << ": adjustment " << adj.table[i] << "  interventional "
                          << truth.table[i] << "\n";
            std::cout << "  max abs diff " << diff << "\n";
        }
        more = false;
        for (size_t i = xv.size(); i-- > 0;) {
            if (++xv[i] < cards[i]) {
                more = true;
                break;
            }
            xv[i] = 0;
        }
    }
    if (as_json)
        std::cout << json{{"xstar", json_set(t.x_star)},
                          {"ystar", json_set(t.y_star)},
                          {"mstar", json_set(t.m_star)},
                          {"rows", rows},
                          {"max_abs_diff", worst}}
                         .dump()
                  << "\n";
    else
        std::cout << "overall max abs diff " << worst << "\n";
    return kExitFound;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"front-door reducibility toolkit"};
    app.require_subcommand(1);

    std::string file, cause, effect, xstar, mstar, ystar, xs, ys, given, cut_in, cut_out;
    bool as_json = false, stats = false;
    std::uint64_t limit = 0, seed = 1;
    int trials = 20, card = 2;
    double tol = 1e-9;

    auto* check = app.add_subcommand("check", "test a given triple against the three conditions");
    check->add_option("graph", file)->required();
    check->add_option("--cause", cause)->required();
    check->add_option("--effect", effect)->required();
    check->add_option("--xstar", xstar)->required();
    check->add_option("--mstar", mstar)->required();
    check->add_option("--ystar", ystar);
    check->add_flag("--json", as_json);

    auto* find = app.add_subcommand("find", "search for the first admissible triple");
    find->add_option("graph", file)->required();
    find->add_option("--cause", cause)->required();
    find->add_option("--effect", effect)->required();
    find->add_flag("--stats", stats);
    find->add_flag("--json", as_json);

    auto* enumerate = app.add_subcommand("enumerate", "list every admissible triple");
    enumerate->add_option("graph", file)->required();
    enumerate->add_option("--cause", cause)->required();
    enumerate->add_option("--effect", effect)->required();
    enumerate->add_option("--limit", limit);
    enumerate->add_flag("--stats", stats);
    enumerate->add_flag("--json", as_json);

    auto* msep = app.add_subcommand("msep", "m-separation query, optionally after graph surgery");
    msep->add_option("graph", file)->required();
    msep->add_option("--x", xs)->required();
    msep->add_option("--y", ys)->required();
    msep->add_option("--given", given);
    msep->add_option("--cut-in", cut_in);
    msep->add_option("--cut-out", cut_out);

    auto* verify = app.add_subcommand("verify", "numeric adjustment check over random models");
    verify->add_option("graph", file)->required();
    verify->add_option("--cause", cause)->required();
    verify->add_option("--effect", effect)->required();
    verify->add_option("--trials", trials);
    verify->add_option("--seed", seed);
    verify->add_option("--card", card);
    verify->add_option("--tol", tol);
    verify->add_flag("--json", as_json);

    auto* adjust = app.add_subcommand("adjust", "evaluate the adjustment formula on a model file");
    adjust->add_option("model", file)->required();
    adjust->add_option("--xstar", xstar)->required();
    adjust->add_option("--ystar", ystar)->required();
    adjust->add_option("--mstar", mstar)->required();
    adjust->add_flag("--json", as_json);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (check->parsed()) return cmd_check(file, cause, effect, xstar, mstar, ystar, as_json);
        if (find->parsed()) return cmd_find(file, cause, effect, stats, as_json);
        if (enumerate->parsed()) return cmd_enumerate(file, cause, effect, limit, stats, as_json);
        if (msep->parsed()) return cmd_msep(file, xs, ys, given, cut_in, cut_out);
        if (verify->parsed()) return cmd_verify(file, cause, effect, trials, seed, card, tol, as_json);
        if (adjust->parsed()) return cmd_adjust(file, xstar, ystar, mstar, as_json);
    } catch (const CapExceededError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitCap;
    } catch (const ZeroProbabilityError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitCap;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
