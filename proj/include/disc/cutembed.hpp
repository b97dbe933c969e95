#pragma once

#include <utility>
#include <vector>

#include "disc/bisect.hpp"
#include "disc/graph.hpp"
#include "disc/rational.hpp"
#include "disc/rng.hpp"

namespace disc {

// Class-respecting derandomised embedding. Guest vertex v may only be mapped
// to hosts h with host_class[h] == guest_class[v]; class sizes must agree.
// Pinned pairs are fixed first. Remaining vertices are placed in decreasing
// degree order (ties: lowest index) at the host maximising the exact
// conditional expectation of the number of target-colour edges under a
// uniform class-respecting completion (ties: lowest host index).
struct ConditionalEmbed {
  Embedding embedding;
  Rational initial_expectation;  // after pins, before any choice
  std::int64_t achieved = 0;     // target-colour edges in the result
};

ConditionalEmbed conditional_expectation_embed(const Graph& f, const Coloring& coloring, Color target,
                                               const std::vector<int>& guest_class,
                                               const std::vector<int>& host_class,
                                               const std::vector<std::pair<int, int>>& pins = {});

// Exact expected target-colour count of a uniform class-respecting completion.
Rational class_expectation(const Graph& f, const Coloring& coloring, Color target,
                           const std::vector<int>& guest_class, const std::vector<int>& host_class,
                           const std::vector<std::pair<int, int>>& pins = {});

// At least ceil(p e(F)) target-colour edges, p the target density.
Embedding greedy_expectation_embed(const Graph& f, const Coloring& coloring, Color target);

// e(U) d_X + e(V) d_Y + e(U,V) d_{X,Y} for the colour-c graph of the host.
Rational cut_expectation(const Graph& f, const Bitset& u, const Coloring& coloring, const Bitset& x, Color c);

enum class EmbedMode { derandomized, sampled };

struct CutEmbedResult {
  Embedding embedding;
  Color target = Color::red;
  bool u_to_x = true;  // U mapped into X (else into Y)
  std::int64_t achieved = 0;
  Rational expectation;
  DiscrepancyReport report;
  int pinned_guest = -1;  // odd n: min-degree vertex of V
  int pinned_host = -1;
  bool precondition_met = false;  // gamma t >= 10 e(F)/n
};

CutEmbedResult cut_embed(const Graph& f, const Bisection& f_bis, const Coloring& coloring, const Bisection& g_bis,
                         Seed seed, EmbedMode mode = EmbedMode::derandomized, int samples = 64);

// (xu + yv)/2 - ((x+y)/2)((u+v)/2); nonnegative whenever x >= y and u >= v.
Rational chebyshev_gap(const Rational& x, const Rational& y, const Rational& u, const Rational& v);

}  // namespace disc
