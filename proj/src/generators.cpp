#include "disc/generators.hpp"

#include <algorithm>

#include "disc/error.hpp"

namespace disc {

Coloring bipartite_construction(int n, std::int64_t rho_num, std::int64_t rho_den) {
  if (rho_den <= 0 || rho_num < 0 || rho_num > rho_den) throw ParameterError("ratio outside [0,1]");
  int x = static_cast<int>((std::int64_t{n} * rho_num) / rho_den);
  Graph red(n);
  for (int u = 0; u < x; ++u)
    for (int v = u + 1; v < n; ++v) red.add_edge(u, v);
  return Coloring(std::move(red));
}

Coloring bipartite_construction(int n, const Rational& rho) {
  if (rho < 0 || rho > 1) throw ParameterError("ratio outside [0,1]");
  return bipartite_construction(n, to_int64(rho.get_num()), to_int64(rho.get_den()));
}

Coloring two_cliques_coloring(int m, bool red_cliques) {
  if (m < 1) throw ParameterError("two-cliques colouring needs m >= 1");
  Graph red(2 * m);
  for (int u = 0; u < 2 * m; ++u)
    for (int v = u + 1; v < 2 * m; ++v)
      if (((u < m) == (v < m)) == red_cliques) red.add_edge(u, v);
  return Coloring(std::move(red));
}

Coloring random_coloring(int n, std::int64_t p_num, std::int64_t p_den, Seed seed) {
  if (p_den <= 0 || p_num < 0 || p_num > p_den) throw ParameterError("probability outside [0,1]");
  return Coloring(random_graph(n, p_num, p_den, seed));
}

Coloring monochromatic_coloring(int n, Color c) {
  return c == Color::red ? Coloring(complete_graph(n)) : Coloring(n);
}

Graph random_graph(int n, std::int64_t p_num, std::int64_t p_den, Seed seed) {
  Rng rng(seed);
  Graph g(n);
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (rng.bernoulli(p_num, p_den)) g.add_edge(u, v);
  return g;
}

namespace {

bool try_pairing(int n, int d, Rng& rng, Graph& out) {
  std::vector<int> points;
  points.reserve(std::size_t(n) * d);
  for (int v = 0; v < n; ++v)
    for (int j = 0; j < d; ++j) points.push_back(v);
  rng.shuffle(points);
  Graph g(n);
  for (std::size_t i = 0; i < points.size(); i += 2) {
    int u = points[i], v = points[i + 1];
    if (u == v || g.has_edge(u, v)) return false;
    g.add_edge(u, v);
  }
  out = std::move(g);
  return true;
}

Graph circulant(int n, int d) {
  Graph g(n);
  for (int v = 0; v < n; ++v) {
    for (int j = 1; j <= d / 2; ++j) g.add_edge(v, (v + j) % n);
    if (d % 2) g.add_edge(v, (v + n / 2) % n);
  }
  return g;
}

void switch_walk(Graph& g, Rng& rng, int steps) {
  auto edges = g.edges();
  if (edges.size() < 2) return;
  for (int s = 0; s < steps; ++s) {
    std::size_t i = rng.below(edges.size()), j = rng.below(edges.size());
    if (i == j) continue;
    auto [a, b] = edges[i];
    auto [c, e] = edges[j];
    if (rng.below(2)) std::swap(c, e);
    // a-b, c-e  ->  a-c, b-e
    if (a == c || b == e || a == e || b == c) continue;
    if (g.has_edge(a, c) || g.has_edge(b, e)) continue;
    g.remove_edge(a, b);
    g.remove_edge(c, e);
    g.add_edge(a, c);
    g.add_edge(b, e);
    edges[i] = {std::min(a, c), std::max(a, c)};
    edges[j] = {std::min(b, e), std::max(b, e)};
  }
}

}  // namespace

Graph random_regular_graph(int n, int d, Seed seed) {
  if (d < 0 || d >= n || (std::int64_t{n} * d) % 2) throw InfeasibleDegree("no simple d-regular graph for these n, d");
  Rng rng(seed);
  Graph g;
  for (int attempt = 0; attempt < 1000; ++attempt)
    if (try_pairing(n, d, rng, g)) return g;
  g = circulant(n, d);
  switch_walk(g, rng, 20 * static_cast<int>(g.edge_count()) + 100);
  return g;
}

Graph star_clique_path_guest(int n, std::int64_t eps_num, std::int64_t eps_den, int k) {
  if (eps_den <= 0 || eps_num < 0 || eps_num > eps_den) throw ParameterError("eps outside [0,1]");
  if (k < 0) throw ParameterError("negative clique size");
  int leaves = static_cast<int>((std::int64_t{n} * (eps_den - eps_num)) / eps_den);
  if (leaves < 1) throw ParameterError("star needs at least one leaf");
  int rest = n - (leaves + 1) - k;
  if (rest < 0) throw ParameterError("components do not fit in n vertices");
  if (k == 1 || rest == 1) throw ParameterError("component would be an isolated vertex");
  Graph g(n);
  for (int i = 1; i <= leaves; ++i) g.add_edge(0, i);
  int base = leaves + 1;
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) g.add_edge(base + i, base + j);
  base += k;
  for (int i = 0; i + 1 < rest; ++i) g.add_edge(base + i, base + i + 1);
  return g;
}

Graph complete_graph(int n) { return Coloring(n).blue(); }

Graph empty_graph(int n) { return Graph(n); }

Graph path_graph(int n) {
  Graph g(n);
  for (int i = 0; i + 1 < n; ++i) g.add_edge(i, i + 1);
  return g;
}

Graph cycle_graph(int n) {
  if (n < 3) throw ParameterError("cycle needs n >= 3");
  Graph g = path_graph(n);
  g.add_edge(0, n - 1);
  return g;
}

Graph star_graph(int n) {
  Graph g(n);
  for (int i = 1; i < n; ++i) g.add_edge(0, i);
  return g;
}

Graph perfect_matching(int n) {
  if (n % 2) throw ParameterError("perfect matching needs even n");
  Graph g(n);
  for (int i = 0; i < n; i += 2) g.add_edge(i, i + 1);
  return g;
}

Graph cycles_graph(const std::vector<int>& lengths) {
  int n = 0;
  for (int l : lengths) {
    if (l < 3) throw ParameterError("cycle lengths must be >= 3");
    n += l;
  }
  Graph g(n);
  int base = 0;
  for (int l : lengths) {
    for (int i = 0; i < l; ++i) g.add_edge(base + i, base + (i + 1) % l);
    base += l;
  }
  return g;
}

Graph clique_factor_graph(int n, int k) {
  if (k < 1 || n % k) throw ParameterError("k must divide n");
  Graph g(n);
  for (int b = 0; b < n; b += k)
    for (int i = 0; i < k; ++i)
      for (int j = i + 1; j < k; ++j) g.add_edge(b + i, b + j);
  return g;
}

}  // namespace disc
