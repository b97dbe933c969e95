#include "disc/bisect.hpp"

#include <bit>
#include <limits>
#include <numeric>

#include "disc/error.hpp"

namespace disc {

Bisection make_bisection(const Graph& f, Bitset u_side) {
  if (u_side.size() != f.n() || u_side.count() != f.n() / 2) throw ParameterError("not a bisection of the graph");
  Bisection b;
  b.cut_size = f.edges_between(u_side, u_side.complement());
  b.deviation = rat(2 * b.cut_size - f.edge_count(), 2);
  b.u_side = std::move(u_side);
  return b;
}

bool valid_bisection(const Graph& f, const Bisection& b) {
  if (b.u_side.size() != f.n() || b.u_side.count() != f.n() / 2) return false;
  Bisection r = make_bisection(f, b.u_side);
  return r.cut_size == b.cut_size && r.deviation == b.deviation;
}

namespace {

struct ExhaustiveSearch {
  int n, h;
  std::vector<std::uint32_t> adj;
  std::vector<int> deg;
  int sign;
  std::int64_t best = std::numeric_limits<std::int64_t>::min();
  std::uint32_t best_mask = 0;

  // cut(U) = sum of degrees in U - 2 e(U)
  void run(int next, int chosen, std::uint32_t mask, std::int64_t degsum, std::int64_t eu) {
    if (chosen == h) {
      std::int64_t score = sign * (degsum - 2 * eu);
      if (score > best) {
        best = score;
        best_mask = mask;
      }
      return;
    }
    for (int v = next; v <= n - (h - chosen); ++v)
      run(v + 1, chosen + 1, mask | (1u << v), degsum + deg[v], eu + std::popcount(adj[v] & mask));
  }
};

}  // namespace

Bisection exhaustive_extremal_bisection(const Graph& f, Direction dir) {
  if (f.n() > 30) throw CapacityError("exhaustive bisection supports n <= 30");
  ExhaustiveSearch s{f.n(), f.n() / 2, std::vector<std::uint32_t>(f.n()), std::vector<int>(f.n()),
                     dir == Direction::max ? 1 : -1};
  for (int v = 0; v < f.n(); ++v) {
    s.deg[v] = f.degree(v);
    f.neighbors(v).for_each([&](int w) { s.adj[v] |= 1u << w; });
  }
  s.run(0, 0, 0, 0, 0);
  Bitset u(f.n());
  for (int v = 0; v < f.n(); ++v)
    if (s.best_mask >> v & 1u) u.set(v);
  return make_bisection(f, std::move(u));
}

Bisection local_search_bisection(const Graph& f, Direction dir, std::int64_t budget, Seed seed) {
  if (budget < 1) throw ParameterError("budget must be >= 1");
  const int n = f.n();
  const int sign = dir == Direction::max ? 1 : -1;
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<int> deg(n);
  for (int v = 0; v < n; ++v) deg[v] = f.degree(v);

  Bisection best;
  bool have = false;
  for (std::uint64_t restart = 0; budget > 0 || !have; ++restart) {
    Rng rng(derive(seed, restart));
    rng.shuffle(order);
    Bitset in_u(n);
    for (int i = 0; i < n / 2; ++i) in_u.set(order[i]);
    std::vector<int> du(n);
    for (int v = 0; v < n; ++v) du[v] = f.neighbors(v).count_and(in_u);

    bool improved = true;
    while (improved && budget > 0) {
      improved = false;
      for (int u = 0; u < n && !improved && budget > 0; ++u) {
        if (!in_u.test(u)) continue;
        for (int v = 0; v < n && budget > 0; ++v) {
          if (in_u.test(v)) continue;
          --budget;
          int gain = (du[u] - (deg[u] - du[u])) + ((deg[v] - du[v]) - du[v]) + 2 * f.has_edge(u, v);
          if (sign * gain > 0) {
            in_u.reset(u);
            in_u.set(v);
            f.neighbors(u).for_each([&](int w) { --du[w]; });
            f.neighbors(v).for_each([&](int w) { ++du[w]; });
            improved = true;
            break;
          }
        }
      }
    }
    Bisection cand = make_bisection(f, in_u);
    if (!have || sign * cand.cut_size > sign * best.cut_size) {
      best = std::move(cand);
      have = true;
    }
    if (n < 2) break;
  }
  return best;
}

Bisection extremal_bisection(const Graph& f, Direction dir, std::int64_t budget, Seed seed) {
  if (f.n() <= 20) return exhaustive_extremal_bisection(f, dir);
  return local_search_bisection(f, dir, budget, seed);
}

Rational disc_of(const Graph& f, const Bitset& u) {
  const std::int64_t n = f.n();
  if (n < 2) return 0;
  const std::int64_t s = u.count();
  return Rational(big(f.edges_within(u))) - rat(f.edge_count() * (s * (s - 1) / 2), n * (n - 1) / 2);
}

namespace {

DiscPM disc_pm_exact(const Graph& f) {
  const int n = f.n();
  const std::int64_t pairs = std::int64_t{n} * (n - 1) / 2;
  const std::int64_t e = f.edge_count();
  std::vector<std::uint32_t> adj(n);
  for (int v = 0; v < n; ++v) f.neighbors(v).for_each([&](int w) { adj[v] |= 1u << w; });

  // scaled value: disc(U) * C(n,2) = e(U) C(n,2) - e C(|U|,2)
  std::int64_t best_plus = 0, best_minus = 0;
  std::uint32_t wit_plus = 0, wit_minus = 0;
  std::uint32_t mask = 0;
  std::int64_t eu = 0, size = 0;
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t i = 1; i < total; ++i) {
    int v = std::countr_zero(i);
    std::uint32_t bit = 1u << v;
    if (mask & bit) {
      mask ^= bit;
      eu -= std::popcount(adj[v] & mask);
      --size;
    } else {
      eu += std::popcount(adj[v] & mask);
      mask |= bit;
      ++size;
    }
    std::int64_t val = eu * pairs - e * (size * (size - 1) / 2);
    if (val > best_plus) best_plus = val, wit_plus = mask;
    if (-val > best_minus) best_minus = -val, wit_minus = mask;
  }
  DiscPM r;
  r.exact = true;
  auto to_set = [&](std::uint32_t m) {
    Bitset b(n);
    for (int v = 0; v < n; ++v)
      if (m >> v & 1u) b.set(v);
    return b;
  };
  r.disc_plus = pairs ? rat(best_plus, pairs) : Rational(0);
  r.disc_minus = pairs ? rat(best_minus, pairs) : Rational(0);
  r.witness_plus = to_set(wit_plus);
  r.witness_minus = to_set(wit_minus);
  return r;
}

DiscPM disc_pm_search(const Graph& f, Seed seed, int restarts) {
  const int n = f.n();
  const std::int64_t pairs = std::int64_t{n} * (n - 1) / 2;
  const std::int64_t e = f.edge_count();
  DiscPM r;
  r.exact = false;
  r.witness_plus = Bitset(n);
  r.witness_minus = Bitset(n);
  std::int64_t best[2] = {0, 0};
  for (int sgn = 0; sgn < 2; ++sgn) {
    const std::int64_t s = sgn == 0 ? 1 : -1;
    for (int rs = 0; rs < restarts; ++rs) {
      Rng rng(derive(seed, std::uint64_t(sgn) * 1000003 + rs));
      Bitset u(n);
      for (int v = 0; v < n; ++v)
        if (rng.below(2)) u.set(v);
      std::vector<std::int64_t> du(n);
      for (int v = 0; v < n; ++v) du[v] = f.neighbors(v).count_and(u);
      std::int64_t size = u.count();
      std::int64_t eu = f.edges_within(u);
      bool improved = true;
      while (improved) {
        improved = false;
        for (int v = 0; v < n; ++v) {
          std::int64_t delta = u.test(v) ? -du[v] * pairs + e * (size - 1) : du[v] * pairs - e * size;
          if (s * delta <= 0) continue;
          int dir = u.test(v) ? -1 : 1;
          u.assign(v, dir > 0);
          eu += dir * du[v];
          size += dir;
          f.neighbors(v).for_each([&](int w) { du[w] += dir; });
          improved = true;
        }
      }
      std::int64_t val = s * (eu * pairs - e * (size * (size - 1) / 2));
      if (val > best[sgn]) {
        best[sgn] = val;
        (sgn == 0 ? r.witness_plus : r.witness_minus) = u;
      }
    }
  }
  r.disc_plus = rat(best[0], pairs);
  r.disc_minus = rat(best[1], pairs);
  return r;
}

}  // namespace

DiscPM disc_pm(const Graph& f, Seed seed, int restarts) {
  if (f.n() <= kDiscExactCap) return disc_pm_exact(f);
  return disc_pm_search(f, seed, restarts);
}

}  // namespace disc
