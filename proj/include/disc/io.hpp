#pragma once

#include <iosfwd>
#include <string>

#include "disc/graph.hpp"

namespace disc {

// Text format:
//   # comment
//   graph <n>        (or: coloring <n>)
//   e <u> <v>        with 0 <= u < v < n, each pair at most once
// A coloring file lists its red edges; absent pairs are blue.
Graph parse_graph(std::istream& in);
Coloring parse_coloring(std::istream& in);
Graph parse_graph_string(const std::string& text);
Coloring parse_coloring_string(const std::string& text);

void write_graph(std::ostream& out, const Graph& g);
void write_coloring(std::ostream& out, const Coloring& c);
std::string graph_to_string(const Graph& g);
std::string coloring_to_string(const Coloring& c);

Graph load_graph(const std::string& path);
Coloring load_coloring(const std::string& path);

}  // namespace disc
