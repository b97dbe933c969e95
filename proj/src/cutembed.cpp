#include "disc/cutembed.hpp"

#include <algorithm>
#include <numeric>

#include "disc/error.hpp"

namespace disc {

namespace {

class ExpectationState {
 public:
  ExpectationState(const Graph& f, const Graph& t, const std::vector<int>& gcls, const std::vector<int>& hcls)
      : f_(f), t_(t), gcls_(gcls), hcls_(hcls), n_(f.n()) {
    if (t.n() != n_ || int(gcls.size()) != n_ || int(hcls.size()) != n_)
      throw DimensionError("guest, host and class vectors differ in size");
    k_ = 0;
    for (int c : gcls) k_ = std::max(k_, c + 1);
    for (int c : hcls) k_ = std::max(k_, c + 1);
    std::vector<int> gsz(k_), hsz(k_);
    for (int v = 0; v < n_; ++v) {
      if (gcls[v] < 0 || hcls[v] < 0) throw ParameterError("negative class index");
      ++gsz[gcls[v]];
      ++hsz[hcls[v]];
    }
    if (gsz != hsz) throw ParameterError("guest and host class sizes differ");
    free_.assign(k_, Bitset(n_));
    r_.assign(k_, 0);
    for (int h = 0; h < n_; ++h) {
      free_[hcls[h]].set(h);
      ++r_[hcls[h]];
    }
    dfree_.assign(k_, std::vector<std::int64_t>(n_));
    for (int c = 0; c < k_; ++c)
      for (int h = 0; h < n_; ++h) dfree_[c][h] = t.neighbors(h).count_and(free_[c]);
    w_.assign(n_, std::vector<std::int64_t>(k_));
    for (int v = 0; v < n_; ++v) f.neighbors(v).for_each([&](int x) { ++w_[v][gcls[x]]; });
    u_.assign(k_, std::vector<std::int64_t>(k_));
    for (auto [a, b] : f.edges()) ++u_[std::min(gcls[a], gcls[b])][std::max(gcls[a], gcls[b])];
    et_.assign(k_, std::vector<std::int64_t>(k_));
    for (int c = 0; c < k_; ++c)
      for (int d = c; d < k_; ++d)
        et_[c][d] = c == d ? t.edges_within(free_[c]) : t.edges_between(free_[c], free_[d]);
    phi_.assign(n_, -1);
  }

  bool placed(int v) const { return phi_[v] >= 0; }

  void place(int v, int h) {
    int cv = gcls_[v];
    if (placed(v) || !free_[cv].test(h) || hcls_[h] != cv) throw ParameterError("invalid placement");
    f_.neighbors(v).for_each([&](int a) {
      if (placed(a)) a_ += t_.has_edge(phi_[a], h);
      --w_[a][cv];
      if (!placed(a)) --u_[std::min(cv, gcls_[a])][std::max(cv, gcls_[a])];
    });
    for (int c = 0; c < k_; ++c) et_[std::min(c, cv)][std::max(c, cv)] -= dfree_[c][h];
    t_.neighbors(h).for_each([&](int x) { --dfree_[cv][x]; });
    free_[cv].reset(h);
    --r_[cv];
    phi_[v] = h;
  }

  Rational expectation() const {
    Rational e(big(a_));
    for (int c = 0; c < k_; ++c) {
      if (r_[c] == 0) continue;
      std::int64_t s = 0;
      for (int a = 0; a < n_; ++a)
        if (placed(a)) s += w_[a][c] * dfree_[c][phi_[a]];
      e += rat(s, r_[c]);
    }
    for (int c = 0; c < k_; ++c)
      for (int d = c; d < k_; ++d) {
        std::int64_t den = c == d ? r_[c] * (r_[c] - 1) / 2 : r_[c] * r_[d];
        if (den > 0 && u_[c][d] > 0) e += rat(u_[c][d] * et_[c][d], den);
      }
    return e;
  }

  // Host for v maximising the conditional expectation; ties to lowest index.
  int best_host(int v) const {
    const int cv = gcls_[v];
    std::vector<std::int64_t> r2 = r_;
    --r2[cv];

    // Denominators of the three term families after the placement.
    std::vector<BigInt> dens;
    dens.push_back(1);
    for (int c = 0; c < k_; ++c) dens.push_back(r2[c] > 0 ? big(r2[c]) : BigInt(0));
    for (int c = 0; c < k_; ++c)
      for (int d = c; d < k_; ++d) {
        std::int64_t den = c == d ? r2[c] * (r2[c] - 1) / 2 : r2[c] * r2[d];
        dens.push_back(den > 0 ? big(den) : BigInt(0));
      }
    BigInt l = 1;
    for (const auto& d : dens)
      if (d != 0) l = lcm(l, d);
    std::vector<BigInt> mult(dens.size());
    for (std::size_t i = 0; i < dens.size(); ++i) mult[i] = dens[i] != 0 ? BigInt(l / dens[i]) : BigInt(0);

    // h-independent pieces
    std::vector<std::int64_t> kc(k_, 0);
    for (int a = 0; a < n_; ++a) {
      if (!placed(a)) continue;
      for (int c = 0; c < k_; ++c) {
        std::int64_t wa = w_[a][c] - (c == cv && f_.has_edge(a, v));
        kc[c] += wa * dfree_[c][phi_[a]];
      }
    }
    std::vector<std::vector<std::int64_t>> u2 = u_;
    for (int c = 0; c < k_; ++c) u2[std::min(c, cv)][std::max(c, cv)] -= w_[v][c];

    // h-dependent sums over hosts
    std::vector<std::int64_t> gain_a(n_, 0), sum_w(n_, 0);
    f_.neighbors(v).for_each([&](int a) {
      if (placed(a)) t_.neighbors(phi_[a]).for_each([&](int x) { ++gain_a[x]; });
    });
    for (int a = 0; a < n_; ++a) {
      if (!placed(a)) continue;
      std::int64_t wa = w_[a][cv] - f_.has_edge(a, v);
      if (wa) t_.neighbors(phi_[a]).for_each([&](int x) { sum_w[x] += wa; });
    }

    int best = -1;
    BigInt best_val;
    BigInt val, term;
    free_[cv].for_each([&](int h) {
      val = mult[0] * big(a_ + gain_a[h]);
      for (int c = 0; c < k_; ++c) {
        if (r2[c] == 0) continue;
        std::int64_t tc = kc[c] + w_[v][c] * dfree_[c][h];
        if (c == cv) tc -= sum_w[h];
        term = mult[1 + c] * big(tc);
        val += term;
      }
      std::size_t idx = 1 + k_;
      for (int c = 0; c < k_; ++c)
        for (int d = c; d < k_; ++d, ++idx) {
          if (mult[idx] == 0 || u2[c][d] == 0) continue;
          std::int64_t e = et_[c][d];
          if (c == cv || d == cv) e -= dfree_[c == cv ? d : c][h];
          term = mult[idx] * big(u2[c][d] * e);
          val += term;
        }
      if (best < 0 || val > best_val) {
        best = h;
        best_val = val;
      }
    });
    return best;
  }

  std::int64_t achieved() const { return a_; }
  std::vector<int> map() const { return phi_; }

 private:
  const Graph& f_;
  const Graph& t_;
  const std::vector<int>& gcls_;
  const std::vector<int>& hcls_;
  int n_, k_;
  std::vector<Bitset> free_;
  std::vector<std::int64_t> r_;
  std::vector<std::vector<std::int64_t>> dfree_;  // [class][host] target-degree into free hosts
  std::vector<std::vector<std::int64_t>> w_;      // [guest][class] unplaced neighbours
  std::vector<std::vector<std::int64_t>> u_;      // guest edges between unplaced classes
  std::vector<std::vector<std::int64_t>> et_;     // target edges between free host classes
  std::vector<int> phi_;
  std::int64_t a_ = 0;  // target edges among placed guest edges
};

std::vector<int> placement_order(const Graph& f) {
  std::vector<int> order(f.n());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return f.degree(a) > f.degree(b); });
  return order;
}

void check_sizes(const Graph& f, const Coloring& c) {
  if (f.n() != c.n()) throw DimensionError("guest and colouring sizes differ");
}

}  // namespace

ConditionalEmbed conditional_expectation_embed(const Graph& f, const Coloring& coloring, Color target,
                                               const std::vector<int>& guest_class,
                                               const std::vector<int>& host_class,
                                               const std::vector<std::pair<int, int>>& pins) {
  check_sizes(f, coloring);
  Graph t = coloring.graph_of(target);
  ExpectationState st(f, t, guest_class, host_class);
  for (auto [v, h] : pins) st.place(v, h);
  ConditionalEmbed out;
  out.initial_expectation = st.expectation();
  for (int v : placement_order(f))
    if (!st.placed(v)) st.place(v, st.best_host(v));
  out.embedding = Embedding(st.map());
  out.achieved = st.achieved();
  return out;
}

Rational class_expectation(const Graph& f, const Coloring& coloring, Color target,
                           const std::vector<int>& guest_class, const std::vector<int>& host_class,
                           const std::vector<std::pair<int, int>>& pins) {
  check_sizes(f, coloring);
  Graph t = coloring.graph_of(target);
  ExpectationState st(f, t, guest_class, host_class);
  for (auto [v, h] : pins) st.place(v, h);
  return st.expectation();
}

Embedding greedy_expectation_embed(const Graph& f, const Coloring& coloring, Color target) {
  std::vector<int> one(f.n(), 0);
  return conditional_expectation_embed(f, coloring, target, one, one).embedding;
}

Rational cut_expectation(const Graph& f, const Bitset& u, const Coloring& coloring, const Bitset& x, Color c) {
  check_sizes(f, coloring);
  Graph t = coloring.graph_of(c);
  Bitset v = u.complement(), y = x.complement();
  auto density = [](std::int64_t edges, std::int64_t pairs) { return pairs ? rat(edges, pairs) : Rational(0); };
  std::int64_t nx = x.count(), ny = y.count();
  Rational dx = density(t.edges_within(x), nx * (nx - 1) / 2);
  Rational dy = density(t.edges_within(y), ny * (ny - 1) / 2);
  Rational dxy = density(t.edges_between(x, y), nx * ny);
  return Rational(big(f.edges_within(u))) * dx + Rational(big(f.edges_within(v))) * dy +
         Rational(big(f.edges_between(u, v))) * dxy;
}

CutEmbedResult cut_embed(const Graph& f, const Bisection& f_bis, const Coloring& coloring, const Bisection& g_bis,
                         Seed seed, EmbedMode mode, int samples) {
  check_sizes(f, coloring);
  const int n = f.n();
  if (n < 4) throw ParameterError("cut embedding needs n >= 4");
  if (!valid_bisection(f, f_bis)) throw ParameterError("invalid guest bisection");
  if (!valid_bisection(coloring.red(), g_bis)) throw ParameterError("invalid host bisection");

  const Bitset& u = f_bis.u_side;
  const Bitset& x = g_bis.u_side;
  int pv = -1, py = -1;
  if (n % 2) {
    for (int v = 0; v < n; ++v)
      if (!u.test(v) && (pv < 0 || f.degree(v) < f.degree(pv))) pv = v;
    for (int y = 0; y < n && py < 0; ++y)
      if (!x.test(y)) py = y;
  }

  // class 0: U and its partner side, class 1: the rest; for odd n the
  // removed pair (v, y) forms a singleton class 2.
  std::vector<int> gcls(n), hcls_ux(n), hcls_uy(n);
  for (int v = 0; v < n; ++v) gcls[v] = u.test(v) ? 0 : 1;
  for (int h = 0; h < n; ++h) {
    hcls_ux[h] = x.test(h) ? 0 : 1;
    hcls_uy[h] = x.test(h) ? 1 : 0;
  }
  if (n % 2) {
    gcls[pv] = 2;
    hcls_ux[py] = hcls_uy[py] = 2;
  }

  CutEmbedResult best;
  bool have = false;
  for (bool ux : {true, false})
    for (Color c : {Color::red, Color::blue}) {
      const auto& hcls = ux ? hcls_ux : hcls_uy;
      Rational e = class_expectation(f, coloring, c, gcls, hcls);
      if (!have || e > best.expectation) {
        best.expectation = e;
        best.target = c;
        best.u_to_x = ux;
        have = true;
      }
    }

  const auto& hcls = best.u_to_x ? hcls_ux : hcls_uy;
  if (mode == EmbedMode::derandomized) {
    best.embedding = conditional_expectation_embed(f, coloring, best.target, gcls, hcls).embedding;
  } else {
    Rng rng(seed);
    std::vector<std::vector<int>> gv(3), hv(3);
    for (int v = 0; v < n; ++v) gv[gcls[v]].push_back(v);
    for (int h = 0; h < n; ++h) hv[hcls[h]].push_back(h);
    std::int64_t best_count = -1;
    for (int s = 0; s < std::max(1, samples); ++s) {
      std::vector<int> m(n);
      for (int c = 0; c < 3; ++c) {
        rng.shuffle(hv[c]);
        for (std::size_t i = 0; i < gv[c].size(); ++i) m[gv[c][i]] = hv[c][i];
      }
      Embedding e(m);
      std::int64_t cnt = count_color(coloring, f, e, best.target);
      if (cnt > best_count) best_count = cnt, best.embedding = e;
    }
  }
  best.report = discrepancy(coloring, f, best.embedding);
  best.achieved = best.report.count(best.target);
  best.pinned_guest = pv;
  best.pinned_host = py;

  // gamma t >= 10 e/n with t = |e(U,V) - e/2| and gamma = |e_G(X,Y) - |X||Y|/2| / n^2
  Rational t = abs(f_bis.deviation);
  std::int64_t nx = x.count();
  Rational gamma = abs(Rational(big(g_bis.cut_size)) - rat(nx * (n - nx), 2)) / (big(n) * big(n));
  best.precondition_met = gamma * t >= rat(10 * f.edge_count(), n);
  return best;
}

Rational chebyshev_gap(const Rational& x, const Rational& y, const Rational& u, const Rational& v) {
  return (x * u + y * v) / 2 - ((x + y) / 2) * ((u + v) / 2);
}

}  // namespace disc
