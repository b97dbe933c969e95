#pragma once

#include <cstdint>
#include <vector>

#include "disc/factors.hpp"
#include "disc/graph.hpp"
#include "disc/json_io.hpp"

namespace disc {

// Orbits of Aut(f), each sorted, ordered by smallest member.
std::vector<std::vector<int>> automorphism_orbits(const Graph& f);

struct ColorMax {
  std::int64_t best = 0;
  Embedding embedding;
  std::int64_t leaves = 0;
};

// Maximum number of colour-c guest edges over all bijections. Branch and
// bound; the representative of the largest Aut(f) orbit takes the smallest
// host among its orbit.
ColorMax oracle_max_color(const Graph& f, const Coloring& coloring, Color c);

struct OracleDisc {
  Embedding embedding;  // lexicographically smallest optimal map
  DiscrepancyReport report;
  std::int64_t best_red = 0;
  std::int64_t best_blue = 0;
};

// n <= 9, or n <= 11 when the largest guest orbit covers at least half the vertices.
OracleDisc oracle_max_disc(const Graph& f, const Coloring& coloring);

struct OracleFactor {
  std::int64_t best_red = 0;
  std::int64_t best_blue = 0;
  KkFactor red_factor;
  KkFactor blue_factor;
  std::int64_t enumerated = 0;
};

// All K_k-factors, n <= 12.
OracleFactor oracle_best_factor(const Coloring& coloring, int k);

struct OracleTwoFactor {
  std::int64_t best_red = 0;
  std::int64_t best_blue = 0;
  Embedding red_embedding;
  Embedding blue_embedding;
};

// All embeddings of the given 2-factor shape, n <= 9.
OracleTwoFactor oracle_best_factor(const Coloring& coloring, const TwoFactor& shape);

Json oracle_disc_json(const OracleDisc& r);
Json oracle_factor_json(const OracleFactor& r);
Json oracle_two_factor_json(const OracleTwoFactor& r);

}  // namespace disc
