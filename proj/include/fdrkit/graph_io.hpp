#ifndef FDRKIT_GRAPH_IO_HPP
#define FDRKIT_GRAPH_IO_HPP

#include <map>
#include <string>

#include "fdrkit/admg.hpp"

namespace fdrkit {

// One statement per line: `node NAME`, `NAME -> NAME` or `NAME <-> NAME`.
// `#` starts a comment; whitespace around tokens is ignored; nodes are
// declared implicitly by their first arc mention.
struct GraphDocument {
    std::string source_path;
    Admg parsed;
    // arc (as written, tail/head or canonical pair) -> 1-based source line
    std::map<std::pair<NodeId, NodeId>, int> line_map;
};

GraphDocument parse_graph(const std::string& text, const std::string& source_path = "<string>");
GraphDocument parse_graph_file(const std::string& path);

// Canonical form: every node declared, then directed arcs, then bidirected
// arcs, each group in canonical order. parse(serialize(g)) reproduces g and
// serialize(parse(t)) is a fixed point.
std::string serialize(const Admg& g);

}  // namespace fdrkit

#endif
