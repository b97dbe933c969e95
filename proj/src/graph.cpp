#include "disc/graph.hpp"

#include <algorithm>
#include <cstdlib>

#include "disc/error.hpp"

namespace disc {

Graph::Graph(int n) : n_(n), adj_(n, Bitset(n)) {
  if (n < 0) throw ParameterError("negative vertex count");
}

Graph Graph::from_edges(int n, const std::vector<Edge>& edges) {
  Graph g(n);
  for (auto [u, v] : edges) g.add_edge(u, v);
  return g;
}

void Graph::add_edge(int u, int v) {
  if (u < 0 || v < 0 || u >= n_ || v >= n_) throw ParameterError("vertex out of range");
  if (u == v) throw ParameterError("self-loop");
  if (adj_[u].test(v)) return;
  adj_[u].set(v);
  adj_[v].set(u);
  ++e_;
}

void Graph::remove_edge(int u, int v) {
  if (!adj_[u].test(v)) return;
  adj_[u].reset(v);
  adj_[v].reset(u);
  --e_;
}

int Graph::max_degree() const {
  int d = 0;
  for (int v = 0; v < n_; ++v) d = std::max(d, degree(v));
  return d;
}

int Graph::min_degree() const {
  if (n_ == 0) return 0;
  int d = n_;
  for (int v = 0; v < n_; ++v) d = std::min(d, degree(v));
  return d;
}

int Graph::regular_degree() const {
  if (n_ == 0) return 0;
  int d = degree(0);
  for (int v = 1; v < n_; ++v)
    if (degree(v) != d) return -1;
  return d;
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  out.reserve(e_);
  for (int u = 0; u < n_; ++u)
    adj_[u].for_each([&](int v) {
      if (u < v) out.emplace_back(u, v);
    });
  return out;
}

std::int64_t Graph::edges_within(const Bitset& s) const {
  std::int64_t twice = 0;
  s.for_each([&](int v) { twice += adj_[v].count_and(s); });
  return twice / 2;
}

std::int64_t Graph::edges_between(const Bitset& a, const Bitset& b) const {
  std::int64_t c = 0;
  a.for_each([&](int v) { c += adj_[v].count_and(b); });
  return c;
}

Graph Graph::complement() const {
  Graph g(n_);
  for (int v = 0; v < n_; ++v) {
    g.adj_[v] = adj_[v].complement();
    g.adj_[v].reset(v);
  }
  g.e_ = std::int64_t{n_} * (n_ - 1) / 2 - e_;
  return g;
}

Graph Graph::induced(const std::vector<int>& vs) const {
  int k = static_cast<int>(vs.size());
  Graph g(k);
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j)
      if (has_edge(vs[i], vs[j])) g.add_edge(i, j);
  return g;
}

Graph Graph::relabel(const std::vector<int>& perm) const {
  Graph g(n_);
  for (auto [u, v] : edges()) g.add_edge(perm[u], perm[v]);
  return g;
}

const char* name(Color c) { return c == Color::red ? "red" : "blue"; }

Color parse_color(const std::string& s) {
  if (s == "red" || s == "+1" || s == "plus") return Color::red;
  if (s == "blue" || s == "-1" || s == "minus") return Color::blue;
  throw ParameterError("unknown colour '" + s + "'");
}

Embedding::Embedding(std::vector<int> map) : map_(std::move(map)), inv_(map_.size(), -1) {
  int n = static_cast<int>(map_.size());
  for (int v = 0; v < n; ++v) {
    int h = map_[v];
    if (h < 0 || h >= n || inv_[h] != -1) throw InvalidEmbedding("map is not a bijection");
    inv_[h] = v;
  }
}

Embedding Embedding::identity(int n) {
  std::vector<int> m(n);
  for (int i = 0; i < n; ++i) m[i] = i;
  return Embedding(std::move(m));
}

std::int64_t count_color(const Coloring& coloring, const Graph& guest, const Embedding& emb, Color c) {
  if (guest.n() != coloring.n() || emb.n() != coloring.n())
    throw DimensionError("guest, coloring and embedding sizes differ");
  std::int64_t red = 0;
  for (auto [u, v] : guest.edges()) red += coloring.is_red(emb(u), emb(v));
  return c == Color::red ? red : guest.edge_count() - red;
}

DiscrepancyReport discrepancy(const Coloring& coloring, const Graph& guest, const Embedding& emb) {
  DiscrepancyReport r;
  r.e_f = guest.edge_count();
  r.mono_plus = count_color(coloring, guest, emb, Color::red);
  r.mono_minus = r.e_f - r.mono_plus;
  r.discrepancy = std::llabs(r.mono_plus - r.mono_minus);
  return r;
}

}  // namespace disc
