#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "disc/bitset.hpp"

namespace disc {

using Edge = std::pair<int, int>;

class Graph {
 public:
  Graph() = default;
  explicit Graph(int n);
  static Graph from_edges(int n, const std::vector<Edge>& edges);

  int n() const { return n_; }
  std::int64_t edge_count() const { return e_; }

  void add_edge(int u, int v);
  void remove_edge(int u, int v);
  bool has_edge(int u, int v) const { return adj_[u].test(v); }

  const Bitset& neighbors(int v) const { return adj_[v]; }
  int degree(int v) const { return adj_[v].count(); }
  int max_degree() const;
  int min_degree() const;
  // Returns d if every vertex has degree d, else -1.
  int regular_degree() const;

  // Edges (u, v) with u < v in lexicographic order.
  std::vector<Edge> edges() const;
  // Number of edges with both ends in s.
  std::int64_t edges_within(const Bitset& s) const;
  std::int64_t edges_between(const Bitset& a, const Bitset& b) const;

  Graph complement() const;
  // Induced subgraph on vs, relabelled so that vs[i] becomes i.
  Graph induced(const std::vector<int>& vs) const;
  // Graph with vertex v renamed perm[v].
  Graph relabel(const std::vector<int>& perm) const;

  friend bool operator==(const Graph& a, const Graph& b) { return a.n_ == b.n_ && a.adj_ == b.adj_; }

 private:
  int n_ = 0;
  std::int64_t e_ = 0;
  std::vector<Bitset> adj_;
};

enum class Color { red, blue };

inline Color other(Color c) { return c == Color::red ? Color::blue : Color::red; }
const char* name(Color c);
Color parse_color(const std::string& s);

// 2-edge-colouring of K_n; only the red graph is stored.
class Coloring {
 public:
  Coloring() = default;
  explicit Coloring(int n) : red_(n) {}
  explicit Coloring(Graph red) : red_(std::move(red)) {}

  int n() const { return red_.n(); }
  const Graph& red() const { return red_; }
  Graph blue() const { return red_.complement(); }
  Graph graph_of(Color c) const { return c == Color::red ? red_ : blue(); }

  bool is_red(int u, int v) const { return red_.has_edge(u, v); }
  bool is(Color c, int u, int v) const { return is_red(u, v) == (c == Color::red); }
  std::int64_t total_pairs() const { return std::int64_t{n()} * (n() - 1) / 2; }
  std::int64_t red_count() const { return red_.edge_count(); }
  std::int64_t blue_count() const { return total_pairs() - red_count(); }
  std::int64_t count(Color c) const { return c == Color::red ? red_count() : blue_count(); }

  Coloring swapped() const { return Coloring(red_.complement()); }
  Coloring induced(const std::vector<int>& vs) const { return Coloring(red_.induced(vs)); }

  friend bool operator==(const Coloring& a, const Coloring& b) = default;

 private:
  Graph red_;
};

// Bijection guest vertex -> host vertex.
class Embedding {
 public:
  Embedding() = default;
  explicit Embedding(std::vector<int> map);
  static Embedding identity(int n);

  int n() const { return static_cast<int>(map_.size()); }
  int operator()(int v) const { return map_[v]; }
  int preimage(int h) const { return inv_[h]; }
  const std::vector<int>& map() const { return map_; }
  const std::vector<int>& inverse() const { return inv_; }

  friend bool operator==(const Embedding& a, const Embedding& b) { return a.map_ == b.map_; }

 private:
  std::vector<int> map_;
  std::vector<int> inv_;
};

struct DiscrepancyReport {
  std::int64_t mono_plus = 0;
  std::int64_t mono_minus = 0;
  std::int64_t discrepancy = 0;
  std::int64_t e_f = 0;

  std::int64_t count(Color c) const { return c == Color::red ? mono_plus : mono_minus; }
  friend bool operator==(const DiscrepancyReport&, const DiscrepancyReport&) = default;
};

DiscrepancyReport discrepancy(const Coloring& coloring, const Graph& guest, const Embedding& emb);

// Number of guest edges whose image has colour c.
std::int64_t count_color(const Coloring& coloring, const Graph& guest, const Embedding& emb, Color c);

}  // namespace disc
