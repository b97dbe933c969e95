#pragma once

#include <json.hpp>

#include "disc/graph.hpp"
#include "disc/rational.hpp"

namespace disc {

using Json = nlohmann::json;

// {"n": ..., "edges": [[u, v], ...]}
Json graph_json(const Graph& g);
// {"n": ..., "red_edges": [[u, v], ...]}
Json coloring_json(const Coloring& c);
Json embedding_json(const Embedding& e);
Json report_json(const DiscrepancyReport& r);
Json rational_json(const Rational& r);

Graph graph_from_json(const Json& j);
Coloring coloring_from_json(const Json& j);

}  // namespace disc
