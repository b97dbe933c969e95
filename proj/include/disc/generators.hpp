#pragma once

#include <cstdint>
#include <vector>

#include "disc/graph.hpp"
#include "disc/rational.hpp"
#include "disc/rng.hpp"

namespace disc {

// X = {0, ..., floor(rho n) - 1}; every pair touching X is red, pairs inside Y are blue.
Coloring bipartite_construction(int n, std::int64_t rho_num, std::int64_t rho_den);
Coloring bipartite_construction(int n, const Rational& rho);

// Two cliques on {0..m-1} and {m..2m-1}; with red_cliques the cliques are red
// and the bipartite pairs blue, otherwise the other way round.
Coloring two_cliques_coloring(int m, bool red_cliques);

Coloring random_coloring(int n, std::int64_t p_num, std::int64_t p_den, Seed seed);
Coloring monochromatic_coloring(int n, Color c);

// Uniform-ish simple d-regular graph: pairing model with restarts, then an
// edge-switching walk from a circulant graph after 1000 failed restarts.
Graph random_regular_graph(int n, int d, Seed seed);

// Star with floor((1 - eps) n) leaves, a clique K_k, and a path on the rest.
Graph star_clique_path_guest(int n, std::int64_t eps_num, std::int64_t eps_den, int k);

Graph complete_graph(int n);
Graph empty_graph(int n);
Graph path_graph(int n);
Graph cycle_graph(int n);
Graph star_graph(int n);
Graph perfect_matching(int n);
// Disjoint cycles of the given lengths on consecutive vertices.
Graph cycles_graph(const std::vector<int>& lengths);
// Disjoint copies of K_k covering n vertices.
Graph clique_factor_graph(int n, int k);
Graph random_graph(int n, std::int64_t p_num, std::int64_t p_den, Seed seed);

}  // namespace disc
