#include "disc/oracle.hpp"

#include <algorithm>
#include <numeric>

#include "disc/error.hpp"

namespace disc {

namespace {

void check_sizes(const Graph& f, const Coloring& c) {
  if (f.n() != c.n()) throw DimensionError("guest and host differ in size");
  if (f.n() < 1) throw ParameterError("empty guest");
}

// Backtracking search for an automorphism sending u to w.
bool automorphism_with(const Graph& f, int u, int w) {
  const int n = f.n();
  std::vector<int> map(n, -1), inv(n, -1);
  std::vector<int> order{u};
  for (int v = 0; v < n; ++v)
    if (v != u) order.push_back(v);
  auto fits = [&](int v, int h) {
    if (inv[h] >= 0 || f.degree(v) != f.degree(h)) return false;
    for (int x = 0; x < n; ++x)
      if (map[x] >= 0 && f.has_edge(v, x) != f.has_edge(h, map[x])) return false;
    return true;
  };
  auto rec = [&](auto&& self, int i) -> bool {
    if (i == n) return true;
    int v = order[i];
    for (int h = 0; h < n; ++h) {
      if (i == 0 && h != w) continue;
      if (!fits(v, h)) continue;
      map[v] = h, inv[h] = v;
      if (self(self, i + 1)) return true;
      map[v] = -1, inv[h] = -1;
    }
    return false;
  };
  return rec(rec, 0);
}

void check_disc_capacity(const Graph& f, const std::vector<std::vector<int>>& orbits) {
  const int n = f.n();
  if (n <= 9) return;
  std::size_t largest = 0;
  for (const auto& o : orbits) largest = std::max(largest, o.size());
  if (n <= 11 && 2 * largest >= std::size_t(n)) return;
  throw CapacityError("oracle supports n <= 9 (n <= 11 with a guest orbit covering half the vertices)");
}

}  // namespace

std::vector<std::vector<int>> automorphism_orbits(const Graph& f) {
  const int n = f.n();
  std::vector<int> rep(n);
  std::iota(rep.begin(), rep.end(), 0);
  for (int w = 1; w < n; ++w)
    for (int u = 0; u < w; ++u) {
      if (rep[u] != u || rep[w] != w) continue;
      if (f.degree(u) == f.degree(w) && automorphism_with(f, u, w)) {
        rep[w] = u;
        break;
      }
    }
  std::vector<std::vector<int>> out;
  std::vector<int> slot(n, -1);
  for (int v = 0; v < n; ++v) {
    int r = rep[v];
    if (slot[r] < 0) slot[r] = static_cast<int>(out.size()), out.emplace_back();
    out[slot[r]].push_back(v);
  }
  return out;
}

namespace {

ColorMax max_color_with_orbits(const Graph& f, const Coloring& coloring, Color c,
                               const std::vector<std::vector<int>>& orbits) {
  const int n = f.n();
  Graph host = coloring.graph_of(c);
  const std::vector<int>* big_orbit = &orbits.front();
  for (const auto& o : orbits)
    if (o.size() > big_orbit->size()) big_orbit = &o;
  const int r = big_orbit->front();
  std::vector<char> in_orbit(n, 0);
  for (int v : *big_orbit) in_orbit[v] = 1;

  // r first, then the vertex with most placed neighbours (ties: lowest index)
  std::vector<int> order{r};
  std::vector<char> placed(n, 0);
  placed[r] = 1;
  while (static_cast<int>(order.size()) < n) {
    int best = -1, bd = -1;
    for (int v = 0; v < n; ++v) {
      if (placed[v]) continue;
      int d = 0;
      for (int u : order) d += f.has_edge(u, v);
      if (d > bd) bd = d, best = v;
    }
    order.push_back(best);
    placed[best] = 1;
  }
  std::vector<std::vector<int>> back(n);
  std::vector<std::int64_t> rem_after(n, 0);
  std::vector<int> pos(n);
  for (int i = 0; i < n; ++i) pos[order[i]] = i;
  for (auto [u, v] : f.edges()) {
    int late = std::max(pos[u], pos[v]);
    back[late].push_back(pos[u] < pos[v] ? u : v);
    for (int i = 0; i < late; ++i) ++rem_after[i];
  }

  ColorMax out;
  out.best = -1;
  std::vector<int> map(n, -1), best_map;
  std::vector<char> used(n, 0);
  auto rec = [&](auto&& self, int i, std::int64_t count) -> void {
    if (i == n) {
      ++out.leaves;
      if (count > out.best) out.best = count, best_map = map;
      return;
    }
    int v = order[i];
    for (int h = 0; h < n; ++h) {
      if (used[h]) continue;
      if (i > 0 && in_orbit[v] && h < map[r]) continue;
      std::int64_t gain = 0;
      for (int u : back[i]) gain += host.has_edge(h, map[u]);
      if (count + gain + rem_after[i] <= out.best) continue;
      map[v] = h, used[h] = 1;
      self(self, i + 1, count + gain);
      map[v] = -1, used[h] = 0;
    }
  };
  rec(rec, 0, 0);
  out.embedding = Embedding(best_map);
  return out;
}

}  // namespace

ColorMax oracle_max_color(const Graph& f, const Coloring& coloring, Color c) {
  check_sizes(f, coloring);
  auto orbits = automorphism_orbits(f);
  check_disc_capacity(f, orbits);
  return max_color_with_orbits(f, coloring, c, orbits);
}

OracleDisc oracle_max_disc(const Graph& f, const Coloring& coloring) {
  check_sizes(f, coloring);
  const int n = f.n();
  auto orbits = automorphism_orbits(f);
  check_disc_capacity(f, orbits);
  OracleDisc out;
  out.best_red = max_color_with_orbits(f, coloring, Color::red, orbits).best;
  out.best_blue = max_color_with_orbits(f, coloring, Color::blue, orbits).best;
  const std::int64_t e = f.edge_count();
  const std::int64_t best = std::max(2 * out.best_red - e, 2 * out.best_blue - e);
  const bool want_red = 2 * out.best_red - e == best, want_blue = 2 * out.best_blue - e == best;

  // lexicographic pass: guest vertices in index order, hosts ascending
  std::vector<std::vector<int>> back(n);
  std::vector<std::int64_t> rem_after(n, 0);
  for (auto [u, v] : f.edges()) {
    back[v].push_back(u);
    for (int i = 0; i < v; ++i) ++rem_after[i];
  }
  std::vector<int> map(n, -1);
  std::vector<char> used(n, 0);
  auto rec = [&](auto&& self, int v, std::int64_t red, std::int64_t blue) -> bool {
    if (v == n) return (want_red && red == out.best_red) || (want_blue && blue == out.best_blue);
    for (int h = 0; h < n; ++h) {
      if (used[h]) continue;
      std::int64_t gr = 0;
      for (int u : back[v]) gr += coloring.is_red(h, map[u]);
      std::int64_t r2 = red + gr, b2 = blue + std::int64_t(back[v].size()) - gr;
      bool live = (want_red && r2 + rem_after[v] >= out.best_red) || (want_blue && b2 + rem_after[v] >= out.best_blue);
      if (!live) continue;
      map[v] = h, used[h] = 1;
      if (self(self, v + 1, r2, b2)) return true;
      map[v] = -1, used[h] = 0;
    }
    return false;
  };
  if (!rec(rec, 0, 0, 0)) throw std::logic_error("lexicographic pass missed the optimum");
  out.embedding = Embedding(map);
  out.report = discrepancy(coloring, f, out.embedding);
  return out;
}

OracleFactor oracle_best_factor(const Coloring& coloring, int k) {
  const int n = coloring.n();
  if (n > 12) throw CapacityError("K_k-factor oracle supports n <= 12");
  if (k < 1 || n < 1 || n % k) throw ParameterError("k must divide n");
  OracleFactor out;
  out.best_red = out.best_blue = -1;
  std::vector<char> used(n, 0);
  std::vector<std::vector<int>> blocks;
  auto emit = [&](std::int64_t red, std::int64_t blue) {
    ++out.enumerated;
    if (red > out.best_red) out.best_red = red, out.red_factor = make_kk_factor(coloring, k, blocks);
    if (blue > out.best_blue) out.best_blue = blue, out.blue_factor = make_kk_factor(coloring, k, blocks);
  };
  // the lowest free vertex always opens the next block
  auto rec = [&](auto&& self, std::int64_t red, std::int64_t blue) -> void {
    int v = 0;
    while (v < n && used[v]) ++v;
    if (v == n) return emit(red, blue);
    used[v] = 1;
    std::vector<int> blk{v};
    auto grow = [&](auto&& grow_self, int from, std::int64_t r, std::int64_t b) -> void {
      if (static_cast<int>(blk.size()) == k) {
        blocks.push_back(blk);
        self(self, r, b);
        blocks.pop_back();
        return;
      }
      for (int w = from; w < n; ++w) {
        if (used[w]) continue;
        std::int64_t gr = 0;
        for (int u : blk) gr += coloring.is_red(u, w);
        used[w] = 1;
        blk.push_back(w);
        grow_self(grow_self, w + 1, r + gr, b + std::int64_t(blk.size() - 1) - gr);
        blk.pop_back();
        used[w] = 0;
      }
    };
    grow(grow, v + 1, red, blue);
    used[v] = 0;
  };
  rec(rec, 0, 0);
  return out;
}

OracleTwoFactor oracle_best_factor(const Coloring& coloring, const TwoFactor& shape) {
  std::string bad = two_factor_violation(shape);
  if (!bad.empty()) throw ParameterError("not a 2-factor: " + bad);
  if (shape.n() != coloring.n()) throw DimensionError("2-factor and colouring differ in size");
  if (shape.n() > 9) throw CapacityError("2-factor oracle supports n <= 9");
  Graph f = shape.graph();
  auto orbits = automorphism_orbits(f);
  ColorMax r = max_color_with_orbits(f, coloring, Color::red, orbits);
  ColorMax b = max_color_with_orbits(f, coloring, Color::blue, orbits);
  return {r.best, b.best, r.embedding, b.embedding};
}

Json oracle_disc_json(const OracleDisc& r) {
  return Json{{"embedding", embedding_json(r.embedding)},
              {"report", report_json(r.report)},
              {"best_red", r.best_red},
              {"best_blue", r.best_blue}};
}

Json oracle_factor_json(const OracleFactor& r) {
  return Json{{"best_red", r.best_red},
              {"best_blue", r.best_blue},
              {"red_factor", kk_factor_json(r.red_factor)},
              {"blue_factor", kk_factor_json(r.blue_factor)},
              {"enumerated", r.enumerated}};
}

Json oracle_two_factor_json(const OracleTwoFactor& r) {
  return Json{{"best_red", r.best_red},
              {"best_blue", r.best_blue},
              {"red_embedding", embedding_json(r.red_embedding)},
              {"blue_embedding", embedding_json(r.blue_embedding)}};
}

}  // namespace disc
