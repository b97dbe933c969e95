#include "disc/json_io.hpp"

#include "disc/error.hpp"

namespace disc {

namespace {

Json edge_list(const Graph& g) {
  Json a = Json::array();
  for (auto [u, v] : g.edges()) a.push_back({u, v});
  return a;
}

Graph edges_from(const Json& j, const char* key) {
  if (!j.contains("n") || !j.contains(key)) throw ParameterError(std::string("json object needs 'n' and '") + key + "'");
  Graph g(j.at("n").get<int>());
  for (const auto& e : j.at(key)) {
    int u = e.at(0).get<int>(), v = e.at(1).get<int>();
    if (u == v || u < 0 || v < 0 || u >= g.n() || v >= g.n()) throw ParameterError("bad edge in json");
    g.add_edge(u, v);
  }
  return g;
}

}  // namespace

Json graph_json(const Graph& g) { return {{"n", g.n()}, {"edges", edge_list(g)}}; }

Json coloring_json(const Coloring& c) { return {{"n", c.n()}, {"red_edges", edge_list(c.red())}}; }

Json embedding_json(const Embedding& e) { return e.map(); }

Json report_json(const DiscrepancyReport& r) {
  return {{"mono_plus", r.mono_plus}, {"mono_minus", r.mono_minus}, {"discrepancy", r.discrepancy}, {"e_f", r.e_f}};
}

Json rational_json(const Rational& r) { return to_string(r); }

Graph graph_from_json(const Json& j) { return edges_from(j, "edges"); }

Coloring coloring_from_json(const Json& j) { return Coloring(edges_from(j, "red_edges")); }

}  // namespace disc
