#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <sstream>

#include "disc/error.hpp"
#include "disc/generators.hpp"
#include "disc/io.hpp"
#include "disc/json_io.hpp"

using namespace disc;

namespace {

// Independent recount over an explicit pair list.
std::int64_t red_pairs(const Coloring& c) {
  std::int64_t r = 0;
  for (int u = 0; u < c.n(); ++u)
    for (int v = u + 1; v < c.n(); ++v) r += c.is_red(u, v);
  return r;
}

}  // namespace

TEST_CASE("bitset basics") {
  Bitset a = Bitset::of(130, {0, 64, 129});
  Bitset b = Bitset::of(130, {64, 100});
  CHECK(a.count() == 3);
  CHECK(a.count_and(b) == 1);
  CHECK(a.count_andnot(b) == 2);
  CHECK(a.count_xor(b) == 3);
  CHECK(a.members() == std::vector<int>{0, 64, 129});
  CHECK(a.complement().count() == 127);
  CHECK(Bitset::full(130).count() == 130);
  CHECK(Bitset::of(4, {0, 3}).lex_less(Bitset::of(4, {1, 2})));
  CHECK_FALSE(Bitset::of(4, {1, 2}).lex_less(Bitset::of(4, {0, 3})));
  CHECK(Bitset::of(4, {1, 2}).lex_less(Bitset::of(4, {1, 3})));
}

TEST_CASE("graph invariants") {
  Graph g = cycle_graph(5);
  CHECK(g.edge_count() == 5);
  int degsum = 0;
  for (int v = 0; v < 5; ++v) degsum += g.degree(v);
  CHECK(degsum == 2 * g.edge_count());
  CHECK(g.regular_degree() == 2);
  Graph c = g.complement();
  CHECK(c.edge_count() == 5);
  CHECK(c.complement() == g);
  CHECK_THROWS_AS(g.add_edge(1, 1), ParameterError);
}

TEST_CASE("discrepancy examples") {
  SUBCASE("all red K_4, C_4") {
    auto r = discrepancy(monochromatic_coloring(4, Color::red), cycle_graph(4), Embedding::identity(4));
    CHECK(r.discrepancy == 4);
    CHECK(r.mono_plus == 4);
  }
  SUBCASE("bipartite n=4, matching") {
    auto r = discrepancy(bipartite_construction(4, 1, 2), perfect_matching(4), Embedding::identity(4));
    CHECK(r.mono_plus == 1);
    CHECK(r.mono_minus == 1);
    CHECK(r.discrepancy == 0);
  }
  SUBCASE("bipartite n=6, cycle 0-2-1-3-4-5") {
    // guest C_6 on 0..5 with vertex i mapped to the i-th entry of the cycle order
    auto r = discrepancy(bipartite_construction(6, 1, 3), cycle_graph(6), Embedding({0, 2, 1, 3, 4, 5}));
    CHECK(r.mono_plus == 4);
    CHECK(r.mono_minus == 2);
    CHECK(r.discrepancy == 2);
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(discrepancy(Coloring(4), cycle_graph(5), Embedding::identity(5)), DimensionError);
    CHECK_THROWS_AS(Embedding({0, 0, 1}), InvalidEmbedding);
  }
}

TEST_CASE("discrepancy is invariant under guest automorphisms") {
  Coloring c = random_coloring(7, 1, 2, Seed{3});
  Graph f = cycle_graph(7);
  Embedding e({3, 1, 4, 0, 6, 5, 2});
  // rotation v -> v+1 is an automorphism of C_7
  std::vector<int> m(7);
  for (int v = 0; v < 7; ++v) m[v] = e((v + 1) % 7);
  CHECK(discrepancy(c, f, e) == discrepancy(c, f, Embedding(m)));
}

TEST_CASE("bipartite construction") {
  Coloring c = bipartite_construction(6, 1, 3);
  CHECK(c.red_count() == 9);
  CHECK(c.blue_count() == 6);
  CHECK(red_pairs(c) == 9);
  for (int v = 0; v < 6; ++v) CHECK(c.red().degree(v) == (v < 2 ? 5 : 2));
  CHECK(bipartite_construction(5, 0, 1).blue_count() == 10);
  CHECK(bipartite_construction(5, 1, 1).red_count() == 10);
  CHECK_THROWS_AS(bipartite_construction(5, 3, 2), ParameterError);
}

TEST_CASE("two cliques colouring") {
  Coloring c = two_cliques_coloring(2, true);
  CHECK(c.red().edges() == std::vector<Edge>{{0, 1}, {2, 3}});
  CHECK(c.blue_count() == 4);
  CHECK(two_cliques_coloring(1, true).blue_count() == 1);
  Coloring c3 = two_cliques_coloring(3, true);
  CHECK(c3.red_count() == 6);
  CHECK(c3.blue_count() == 9);
  CHECK(two_cliques_coloring(3, false).red_count() == 9);
  CHECK_THROWS_AS(two_cliques_coloring(0, true), ParameterError);
}

TEST_CASE("random colouring") {
  CHECK(random_coloring(10, 1, 1, Seed{1}).red_count() == 45);
  CHECK(random_coloring(10, 0, 1, Seed{1}).red_count() == 0);
  CHECK(random_coloring(30, 1, 2, Seed{9}) == random_coloring(30, 1, 2, Seed{9}));
  // n = 1000: |red - N/2| <= 4 sqrt(N)/2, checked by squaring
  const std::int64_t pairs = 1000 * 999 / 2;
  for (std::uint64_t s = 0; s < 100; ++s) {
    std::int64_t dev = 2 * random_coloring(1000, 1, 2, Seed{s}).red_count() - pairs;
    CHECK(dev * dev <= 16 * pairs);
  }
}

TEST_CASE("random regular graph") {
  CHECK(random_regular_graph(4, 3, Seed{1}) == complete_graph(4));
  for (std::uint64_t s = 0; s < 20; ++s) {
    Graph g = random_regular_graph(6, 2, Seed{s});
    CHECK(g.regular_degree() == 2);
    Graph m = random_regular_graph(4, 1, Seed{s});
    CHECK(m.regular_degree() == 1);
    CHECK(m.edge_count() == 2);
  }
  for (int d : {3, 6, 10}) {
    Graph g = random_regular_graph(60, d, Seed{std::uint64_t(d)});
    CHECK(g.regular_degree() == d);
    CHECK(g.edge_count() == 30 * d);
  }
  // forces the switching fallback: pairing almost never succeeds at this d
  Graph dense = random_regular_graph(40, 30, Seed{5});
  CHECK(dense.regular_degree() == 30);
  CHECK_THROWS_AS(random_regular_graph(5, 3, Seed{0}), InfeasibleDegree);
  CHECK_THROWS_AS(random_regular_graph(4, 4, Seed{0}), InfeasibleDegree);
}

TEST_CASE("star clique path guest") {
  CHECK_THROWS_AS(star_clique_path_guest(10, 1, 2, 3), ParameterError);
  Graph g = star_clique_path_guest(10, 1, 2, 4);
  CHECK(g.edge_count() == 11);
  CHECK(g.degree(0) == 5);
  Graph h = star_clique_path_guest(8, 1, 2, 0);
  CHECK(h.edge_count() == 6);
  CHECK(h.min_degree() >= 1);
  CHECK_THROWS_AS(star_clique_path_guest(8, 1, 1, 0), ParameterError);
}

TEST_CASE("file round trip") {
  std::string k3 = graph_to_string(complete_graph(3));
  CHECK(k3 == "graph 3\ne 0 1\ne 0 2\ne 1 2\n");
  CHECK(parse_graph_string(k3) == complete_graph(3));
  Coloring b = bipartite_construction(6, 1, 3);
  CHECK(parse_coloring_string(coloring_to_string(b)) == b);
  CHECK(parse_coloring_string("# red edges of the construction\ncoloring 6\n"
                              "e 0 1\ne 0 2\ne 0 3\ne 0 4\ne 0 5\ne 1 2\ne 1 3\ne 1 4\ne 1 5\n") == b);
  for (std::uint64_t s = 0; s < 5; ++s) {
    Graph g = random_regular_graph(20, 3, Seed{s});
    CHECK(parse_graph_string(graph_to_string(g)) == g);
    CHECK(graph_from_json(graph_json(g)) == g);
    Coloring c = random_coloring(12, 1, 3, Seed{s});
    CHECK(coloring_from_json(coloring_json(c)) == c);
  }
}

TEST_CASE("parse errors carry line numbers") {
  auto line_of = [](const std::string& text) {
    try {
      parse_graph_string(text);
    } catch (const ParseError& e) {
      return e.line();
    }
    return -1;
  };
  CHECK(line_of("graph 3\ne 2 2\n") == 2);
  CHECK(line_of("graph 3\ne 0 1\n# dup\ne 0 1\n") == 4);
  CHECK(line_of("graph 3\ne 0 7\n") == 2);
  CHECK(line_of("graph 3\ne 2 1\n") == 2);
  CHECK(line_of("graph 3\nx 0 1\n") == 2);
  CHECK(line_of("coloring 3\n") == 1);
}

TEST_CASE("seed derivation") {
  CHECK(derive(Seed{1}, 0).value != derive(Seed{1}, 1).value);
  CHECK(derive(Seed{1}, 5).value == derive(Seed{1}, 5).value);
  Rng r(Seed{4});
  for (int i = 0; i < 1000; ++i) CHECK(r.below(7) < 7);
}

TEST_CASE("rational parsing") {
  CHECK(parse_rational("1/3") == rat(1, 3));
  CHECK(parse_rational("0.05") == rat(1, 20));
  CHECK(parse_rational("2") == rat(2));
  CHECK(parse_rational("-2/4") == rat(-1, 2));
  CHECK(floor(rat(-1, 2)) == -1);
  CHECK(ceil(rat(7, 3)) == 3);
  CHECK(binomial(20, 10) == 184756);
  CHECK_THROWS_AS(parse_rational("x"), ParameterError);
}
