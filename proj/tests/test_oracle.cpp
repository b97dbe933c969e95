#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "disc/error.hpp"
#include "disc/generators.hpp"
#include "disc/oracle.hpp"

using namespace disc;

namespace {

struct Naive {
  std::int64_t disc = -1;
  std::vector<int> map;
  std::int64_t red = -1, blue = -1;
};

// Plain scan of all permutations in lexicographic order.
Naive naive(const Graph& f, const Coloring& c) {
  std::vector<int> p(f.n());
  std::iota(p.begin(), p.end(), 0);
  auto edges = f.edges();
  std::int64_t e = static_cast<std::int64_t>(edges.size());
  Naive out;
  do {
    std::int64_t r = 0;
    for (auto [u, v] : edges) r += c.is_red(p[u], p[v]);
    std::int64_t d = std::abs(2 * r - e);
    if (d > out.disc) out.disc = d, out.map = p;
    out.red = std::max(out.red, r);
    out.blue = std::max(out.blue, e - r);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

std::vector<int> random_perm(int n, Rng& rng) {
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  rng.shuffle(p);
  return p;
}

}  // namespace

TEST_CASE("automorphism orbits") {
  CHECK(automorphism_orbits(cycle_graph(7)).size() == 1);
  auto star = automorphism_orbits(star_graph(6));
  REQUIRE(star.size() == 2);
  CHECK(star[0] == std::vector<int>{0});
  CHECK(star[1] == std::vector<int>{1, 2, 3, 4, 5});
  auto path = automorphism_orbits(path_graph(5));
  CHECK(path == std::vector<std::vector<int>>{{0, 4}, {1, 3}, {2}});
  CHECK(automorphism_orbits(empty_graph(5)).size() == 1);
}

TEST_CASE("maximum discrepancy examples") {
  OracleDisc a = oracle_max_disc(cycle_graph(4), monochromatic_coloring(4, Color::red));
  CHECK(a.report.discrepancy == 4);

  OracleDisc b = oracle_max_disc(cycle_graph(6), bipartite_construction(6, 1, 3));
  CHECK(b.report.discrepancy == 2);
  CHECK(b.report.mono_plus == 4);
  CHECK(b.best_red == 4);

  Graph f = random_graph(8, 1, 2, Seed{5});
  OracleDisc c = oracle_max_disc(f, Coloring(f));
  CHECK(c.report.discrepancy == f.edge_count());
  CHECK(c.embedding == Embedding::identity(8));
}

TEST_CASE("agrees with a plain permutation scan") {
  Rng rng(Seed{17});
  for (int t = 0; t < 60; ++t) {
    int n = 3 + t % 5;
    Graph f = random_graph(n, 1 + t % 3, 4, Seed{std::uint64_t(t)});
    Coloring c = random_coloring(n, 1, 2, Seed{std::uint64_t(1000 + t)});
    Naive nv = naive(f, c);
    OracleDisc o = oracle_max_disc(f, c);
    CHECK(o.report.discrepancy == nv.disc);
    CHECK(o.embedding.map() == nv.map);
    CHECK(o.best_red == nv.red);
    CHECK(o.best_blue == nv.blue);
    CHECK(discrepancy(c, f, o.embedding) == o.report);
  }
  (void)rng;
}

TEST_CASE("relabelling invariance") {
  Rng rng(Seed{3});
  for (int t = 0; t < 20; ++t) {
    int n = 6 + t % 3;
    Graph f = random_graph(n, 1, 3, Seed{std::uint64_t(t)});
    Coloring c = random_coloring(n, 1, 2, Seed{std::uint64_t(50 + t)});
    auto p = random_perm(n, rng);
    OracleDisc a = oracle_max_disc(f, c);
    OracleDisc b = oracle_max_disc(f.relabel(p), Coloring(c.red().relabel(p)));
    CHECK(a.report.discrepancy == b.report.discrepancy);
    CHECK(a.best_red == b.best_red);
    CHECK(a.best_blue == b.best_blue);
  }
}

TEST_CASE("capacity") {
  CHECK_THROWS_AS(oracle_max_disc(random_graph(10, 1, 2, Seed{1}), random_coloring(10, 1, 2, Seed{2})),
                  CapacityError);
  // a large orbit admits n = 10
  CHECK(oracle_max_disc(cycle_graph(10), bipartite_construction(10, 1, 2)).report.discrepancy >= 0);
  CHECK_THROWS_AS(oracle_max_disc(cycle_graph(5), random_coloring(6, 1, 2, Seed{})), DimensionError);
  CHECK_THROWS_AS(oracle_best_factor(random_coloring(14, 1, 2, Seed{}), 2), CapacityError);
  CHECK_THROWS_AS(oracle_best_factor(random_coloring(9, 1, 2, Seed{}), 2), ParameterError);
  CHECK_THROWS_AS(oracle_best_factor(random_coloring(10, 1, 2, Seed{}), two_factor_from_lengths({10})), CapacityError);
}

TEST_CASE("best factors") {
  OracleFactor a = oracle_best_factor(bipartite_construction(6, 1, 3), 3);
  CHECK(a.enumerated == 10);
  CHECK(a.best_red == 4);
  CHECK(a.best_blue == 3);
  OracleFactor b = oracle_best_factor(two_cliques_coloring(2, true), 2);
  CHECK(b.enumerated == 3);
  CHECK(b.best_red == 2);
  CHECK(b.best_blue == 2);
  CHECK(oracle_best_factor(random_coloring(12, 1, 2, Seed{}), 2).enumerated == 10395);
  CHECK(oracle_best_factor(random_coloring(12, 1, 2, Seed{}), 3).enumerated == 15400);
  CHECK(oracle_best_factor(random_coloring(12, 1, 2, Seed{}), 4).enumerated == 5775);

  // a K_k-factor is an embedding of clique_factor_graph, so the plain scan applies
  for (std::uint64_t s = 0; s < 5; ++s) {
    Coloring c = random_coloring(6, 1, 2, Seed{s});
    Naive nv = naive(clique_factor_graph(6, 3), c);
    OracleFactor o = oracle_best_factor(c, 3);
    CHECK(o.best_red == nv.red);
    CHECK(o.best_blue == nv.blue);
    CHECK(o.red_factor.red_count == o.best_red);
  }

  OracleTwoFactor t = oracle_best_factor(bipartite_construction(6, 1, 3), two_factor_from_lengths({6}));
  CHECK(t.best_red <= 4);
  CHECK(t.best_blue <= 4);
  for (std::uint64_t s = 0; s < 5; ++s) {
    Coloring c = random_coloring(8, 1, 2, Seed{s});
    TwoFactor f = two_factor_from_lengths({3, 5});
    Naive nv = naive(f.graph(), c);
    OracleTwoFactor o = oracle_best_factor(c, f);
    CHECK(o.best_red == nv.red);
    CHECK(o.best_blue == nv.blue);
    CHECK(count_color(c, f.graph(), o.red_embedding, Color::red) == o.best_red);
  }
}
