#include "disc/io.hpp"

#include <fstream>
#include <sstream>

#include "disc/error.hpp"

namespace disc {

namespace {

Graph parse_edges(std::istream& in, const std::string& header) {
  std::string line;
  int lineno = 0;
  int n = -1;
  Graph g;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok)) continue;
    if (n < 0) {
      if (tok != header) throw ParseError(lineno, "expected '" + header + " <n>'");
      long long v;
      if (!(ls >> v) || v < 0 || v > 1'000'000) throw ParseError(lineno, "bad vertex count");
      n = static_cast<int>(v);
      g = Graph(n);
    } else {
      if (tok != "e") throw ParseError(lineno, "unknown record '" + tok + "'");
      long long u, v;
      if (!(ls >> u >> v)) throw ParseError(lineno, "edge needs two endpoints");
      if (u == v) throw ParseError(lineno, "self-loop");
      if (u < 0 || v < 0 || u >= n || v >= n) throw ParseError(lineno, "vertex out of range");
      if (u > v) throw ParseError(lineno, "edge endpoints must satisfy u < v");
      if (g.has_edge(int(u), int(v))) throw ParseError(lineno, "duplicate edge");
      g.add_edge(int(u), int(v));
    }
    std::string extra;
    if (ls >> extra) throw ParseError(lineno, "trailing token '" + extra + "'");
  }
  if (n < 0) throw ParseError(lineno, "missing '" + header + "' header");
  return g;
}

void write_edges(std::ostream& out, const char* header, const Graph& g) {
  out << header << ' ' << g.n() << '\n';
  for (auto [u, v] : g.edges()) out << "e " << u << ' ' << v << '\n';
}

std::ifstream open(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error("cannot open '" + path + "'");
  return f;
}

}  // namespace

Graph parse_graph(std::istream& in) { return parse_edges(in, "graph"); }

Coloring parse_coloring(std::istream& in) { return Coloring(parse_edges(in, "coloring")); }

Graph parse_graph_string(const std::string& text) {
  std::istringstream in(text);
  return parse_graph(in);
}

Coloring parse_coloring_string(const std::string& text) {
  std::istringstream in(text);
  return parse_coloring(in);
}

void write_graph(std::ostream& out, const Graph& g) { write_edges(out, "graph", g); }

void write_coloring(std::ostream& out, const Coloring& c) { write_edges(out, "coloring", c.red()); }

std::string graph_to_string(const Graph& g) {
  std::ostringstream s;
  write_graph(s, g);
  return s.str();
}

std::string coloring_to_string(const Coloring& c) {
  std::ostringstream s;
  write_coloring(s, c);
  return s.str();
}

Graph load_graph(const std::string& path) {
  auto f = open(path);
  return parse_graph(f);
}

Coloring load_coloring(const std::string& path) {
  auto f = open(path);
  return parse_coloring(f);
}

}  // namespace disc
