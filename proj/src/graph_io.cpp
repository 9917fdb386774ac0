#include "fdrkit/graph_io.hpp"

#include <fstream>
#include <sstream>
#include <vector>

namespace fdrkit {

namespace {

struct Token {
    enum Kind { kName, kArrow, kBiArrow } kind;
    std::string text;
};

std::vector<Token> lex_line(const std::string& line, int line_no) {
    std::vector<Token> out;
    size_t i = 0;
    while (i < line.size()) {
        const char c = line[i];
        if (c == '#') break;
        if (c == ' ' || c == '\t' || c == '\r') {
            ++i;
            continue;
        }
        if (c == '<') {
            if (line.compare(i, 3, "<->") == 0) {
                out.push_back({Token::kBiArrow, "<->"});
                i += 3;
                continue;
            }
            throw ParseError("line " + std::to_string(line_no) + ": expected '<->'");
        }
        if (c == '-') {
            if (line.compare(i, 2, "->") == 0) {
                out.push_back({Token::kArrow, "->"});
                i += 2;
                continue;
            }
            throw ParseError("line " + std::to_string(line_no) + ": expected '->'");
        }
        if ((c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_') {
            size_t j = i;
            while (j < line.size() && ((line[j] >= 'A' && line[j] <= 'Z') || (line[j] >= 'a' && line[j] <= 'z') ||
                                       (line[j] >= '0' && line[j] <= '9') || line[j] == '_'))
                ++j;
            out.push_back({Token::kName, line.substr(i, j - i)});
            i = j;
            continue;
        }
        throw ParseError("line " + std::to_string(line_no) + ": unexpected character '" + std::string(1, c) + "'");
    }
    return out;
}

}  // namespace

GraphDocument parse_graph(const std::string& text, const std::string& source_path) {
    NodeSet nodes;
    ArcList directed, bidirected;
    std::map<std::pair<NodeId, NodeId>, int> line_map;

    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::vector<Token> toks = lex_line(line, line_no);
        if (toks.empty()) continue;

        if (toks.size() == 2 && toks[0].kind == Token::kName && toks[0].text == "node" &&
            toks[1].kind == Token::kName) {
            nodes.insert(toks[1].text);
            continue;
        }
        if (toks.size() == 3 && toks[0].kind == Token::kName && toks[2].kind == Token::kName &&
            (toks[1].kind == Token::kArrow || toks[1].kind == Token::kBiArrow)) {
            nodes.insert(toks[0].text);
            nodes.insert(toks[2].text);
            const auto arc = std::make_pair(toks[0].text, toks[2].text);
            if (toks[1].kind == Token::kArrow)
                directed.push_back(arc);
            else
                bidirected.push_back(arc);
            line_map.emplace(arc, line_no);
            continue;
        }
        throw ParseError("line " + std::to_string(line_no) +
                         ": expected 'node NAME', 'A -> B' or 'A <-> B'");
    }

    GraphDocument doc;
    doc.source_path = source_path;
    doc.line_map = std::move(line_map);

    // Validation errors keep their type but gain line provenance when the
    // offending arc can be located.
    const auto with_line = [&doc](const std::string& what) {
        for (const auto& [arc, ln] : doc.line_map)
            if (what.find(arc.first) != std::string::npos && what.find(arc.second) != std::string::npos)
                return "line " + std::to_string(ln) + ": " + what;
        return what;
    };
    try {
        doc.parsed = Admg::build(nodes, directed, bidirected);
    } catch (const SelfLoopError& e) {
        throw SelfLoopError(with_line(e.what()));
    } catch (const DuplicateArcError& e) {
        throw DuplicateArcError(with_line(e.what()));
    }
    return doc;
}

GraphDocument parse_graph_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open graph file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_graph(ss.str(), path);
}

std::string serialize(const Admg& g) {
    std::string out;
    for (const auto& n : g.nodes()) out += "node " + n + "\n";
    for (const auto& [a, b] : g.directed_arcs()) out += a + " -> " + b + "\n";
    for (const auto& [a, b] : g.bidirected_arcs()) out += a + " <-> " + b + "\n";
    return out;
}

}  // namespace fdrkit
