#include "disc/factors.hpp"

#include <algorithm>
#include <stdexcept>

#include "disc/cutembed.hpp"
#include "disc/error.hpp"
#include "disc/generators.hpp"

namespace disc {

namespace {

std::int64_t pairs(std::int64_t t) { return t > 1 ? t * (t - 1) / 2 : 0; }

std::vector<std::vector<int>> chunks(const std::vector<int>& order, int k) {
  std::vector<std::vector<int>> out;
  for (std::size_t i = 0; i < order.size(); i += k) out.emplace_back(order.begin() + i, order.begin() + i + k);
  return out;
}

std::vector<std::vector<int>> relabel_blocks(const std::vector<std::vector<int>>& blocks, const std::vector<int>& to) {
  std::vector<std::vector<int>> out;
  for (const auto& b : blocks) {
    std::vector<int> nb;
    for (int v : b) nb.push_back(to[v]);
    out.push_back(std::move(nb));
  }
  return out;
}

}  // namespace

Rational lambda_blue_side(int k, const Rational& rho) { return rat(k - 1, 2) * (1 - rho); }

Rational lambda_red_side(int k, const Rational& rho) {
  std::int64_t j = to_int64(floor(Rational(rho * big(k))));
  return rat(k - 1, 2) - rat(k - j - 1, 2) * (rat(j, k) + 1 - 2 * rho);
}

RhoLambda solve_rho_lambda(int k) {
  if (k < 2) throw ParameterError("k must be at least 2");
  int hits = 0;
  RhoLambda out;
  for (int i = 0; i < k; ++i) {
    Rational rho(big(k - i - 1) * big(i + k), big(k) * big(k - 1 + 2 * (k - i - 1)));
    rho.canonicalize();
    if (rho >= rat(i, k) && rho < rat(i + 1, k)) {
      ++hits;
      out.rho = rho;
      out.interval = i;
    }
  }
  if (hits != 1) throw std::logic_error("rho equation does not have a unique root for k = " + std::to_string(k));
  out.lambda = lambda_blue_side(k, out.rho);
  if (lambda_red_side(k, out.rho) != out.lambda) throw std::logic_error("f(rho) != g(rho)");
  if (out.lambda > rat(k - 1, 3)) throw std::logic_error("lambda exceeds (k-1)/3");
  return out;
}

std::string kk_factor_violation(int n, int k, const std::vector<std::vector<int>>& blocks) {
  if (k < 1 || n % k) return "k does not divide n";
  if (static_cast<int>(blocks.size()) != n / k) return "wrong number of blocks";
  std::vector<char> seen(n, 0);
  for (const auto& b : blocks) {
    if (static_cast<int>(b.size()) != k) return "block of wrong size";
    for (int v : b) {
      if (v < 0 || v >= n) return "vertex out of range";
      if (seen[v]++) return "vertex " + std::to_string(v) + " repeated";
    }
  }
  return {};
}

KkFactor make_kk_factor(const Coloring& coloring, int k, std::vector<std::vector<int>> blocks) {
  std::string bad = kk_factor_violation(coloring.n(), k, blocks);
  if (!bad.empty()) throw ParameterError("not a K_k-factor: " + bad);
  KkFactor f;
  f.k = k;
  for (const auto& b : blocks)
    for (std::size_t i = 0; i < b.size(); ++i)
      for (std::size_t j = i + 1; j < b.size(); ++j) (coloring.is_red(b[i], b[j]) ? f.red_count : f.blue_count)++;
  f.blocks = std::move(blocks);
  return f;
}

std::int64_t kk_bipartite_blue_optimum(int n, int k, int x) {
  std::int64_t y = n - x;
  return (y / k) * pairs(k) + pairs(y % k);
}

std::int64_t kk_bipartite_red_optimum(int n, int k, int x) {
  std::int64_t blocks = n / k;
  std::int64_t j = x / blocks;
  if (j >= k) return blocks * pairs(k);
  std::int64_t a1 = x - j * blocks, a0 = blocks - a1;
  return a0 * (pairs(k) - pairs(k - j)) + a1 * (pairs(k) - pairs(k - j - 1));
}

Rational kk_bipartite_red_formula(int n, int k, const Rational& rho) { return lambda_red_side(k, rho) * big(n); }

KkFactor opt_kk_factor_bipartite(int n, int k, const Rational& rho, Color color) {
  if (k < 2 || n < k || n % k) throw ParameterError("k must divide n");
  if (rho < 0 || rho > 1) throw ParameterError("rho outside [0,1]");
  const int x = static_cast<int>(to_int64(floor(Rational(rho * big(n)))));
  Coloring host = bipartite_construction(n, rho);
  std::vector<int> order;
  if (color == Color::blue) {
    for (int v = x; v < n; ++v) order.push_back(v);
    for (int v = 0; v < x; ++v) order.push_back(v);
  } else {
    const int blocks = n / k;
    const int j = x / blocks;
    const int a1 = j >= k ? 0 : x - j * blocks;
    int nx = 0, ny = x;
    for (int b = 0; b < blocks; ++b) {
      int take = std::min(k, b < a1 ? j + 1 : j);
      for (int i = 0; i < take; ++i) order.push_back(nx++);
      for (int i = take; i < k; ++i) order.push_back(ny++);
    }
  }
  KkFactor f = make_kk_factor(host, k, chunks(order, k));
  f.adjusted = Rational(rho * big(n)) != Rational(big(x));
  std::int64_t want = color == Color::blue ? kk_bipartite_blue_optimum(n, k, x) : kk_bipartite_red_optimum(n, k, x);
  if (f.count(color) != want) throw std::logic_error("extremal K_k-factor count mismatch");
  return f;
}

KkFactor kk_factor_two_cliques(int m, int k, Color color) {
  if (k < 1 || m < k || m % k) throw ParameterError("k must divide m");
  Coloring host = two_cliques_coloring(m, true);
  std::vector<int> order;
  if (color == Color::red) {
    for (int v = 0; v < 2 * m; ++v) order.push_back(v);
  } else {
    const int hi = (k + 1) / 2, lo = k / 2;
    int a = 0, b = m;
    for (int blk = 0; blk < 2 * m / k; ++blk) {
      int from_a = blk % 2 ? lo : hi;
      for (int i = 0; i < from_a; ++i) order.push_back(a++);
      for (int i = from_a; i < k; ++i) order.push_back(b++);
    }
  }
  KkFactor f = make_kk_factor(host, k, chunks(order, k));
  std::int64_t want = color == Color::red ? (2 * m / k) * pairs(k)
                                          : std::int64_t{2 * m / k} * ((k + 1) / 2) * (k / 2);
  if (f.count(color) != want) throw std::logic_error("two-cliques factor count mismatch");
  return f;
}

const char* name(FmVariant v) {
  switch (v) {
    case FmVariant::D: return "D";
    case FmVariant::D_bar: return "D_bar";
    case FmVariant::C: return "C";
    case FmVariant::C_bar: return "C_bar";
  }
  return "?";
}

std::string witness_violation(const Coloring& coloring, int m, const FmWitness& w) {
  const auto& [a, b] = w.part_split;
  if (static_cast<int>(a.size()) != m || static_cast<int>(b.size()) != m) return "parts must have m vertices";
  std::vector<int> joined = a;
  joined.insert(joined.end(), b.begin(), b.end());
  if (joined != w.vertices) return "vertices differ from the part split";
  std::vector<char> seen(coloring.n(), 0);
  for (int v : joined) {
    if (v < 0 || v >= coloring.n()) return "vertex out of range";
    if (seen[v]++) return "vertex repeated";
  }
  for (int i = 0; i < 2 * m; ++i)
    for (int j = i + 1; j < 2 * m; ++j) {
      bool same = (i < m) == (j < m);
      bool in_first = i < m && j < m;
      bool want_red = false;
      switch (w.variant) {
        case FmVariant::D: want_red = !in_first; break;
        case FmVariant::D_bar: want_red = in_first; break;
        case FmVariant::C: want_red = same; break;
        case FmVariant::C_bar: want_red = !same; break;
      }
      if (coloring.is_red(joined[i], joined[j]) != want_red)
        return "pair (" + std::to_string(joined[i]) + ", " + std::to_string(joined[j]) + ") has the wrong colour";
    }
  return {};
}

namespace {

class FmSearch {
 public:
  FmSearch(const Coloring& c, int m, const UnavoidableOptions& o)
      : col_(c), n_(c.n()), m_(m), opt_(o), red_(c.red()), blue_(c.blue()) {}

  const Graph& g(Color c) const { return c == Color::red ? red_ : blue_; }
  bool exhausted() const { return probes_ > opt_.budget; }

  std::vector<int> greedy_clique(Color c, Bitset cand, int cap) const {
    std::vector<int> cl;
    const Graph& gr = g(c);
    while (cand.any() && static_cast<int>(cl.size()) < cap) {
      int best = -1, bd = -1;
      cand.for_each([&](int v) {
        int d = gr.neighbors(v).count_and(cand);
        if (d > bd) bd = d, best = v;
      });
      cl.push_back(best);
      cand &= gr.neighbors(best);
    }
    return cl;
  }

  bool clique_dfs(Color c, std::vector<int>& cur, Bitset cand) {
    if (static_cast<int>(cur.size()) == m_) return true;
    while (cand.any()) {
      if (++probes_ > opt_.budget) return false;
      int v = cand.first();
      cand.reset(v);
      if (static_cast<int>(cur.size()) + 1 + cand.count() < m_) return false;
      cur.push_back(v);
      if (clique_dfs(c, cur, cand & g(c).neighbors(v))) return true;
      cur.pop_back();
    }
    return false;
  }

  std::optional<std::vector<int>> clique_in(Color c, const Bitset& cand) {
    if (cand.count() < m_) return std::nullopt;
    auto gc = greedy_clique(c, cand, m_);
    if (static_cast<int>(gc.size()) == m_) return gc;
    std::vector<int> cur;
    if (clique_dfs(c, cur, cand)) return cur;
    return std::nullopt;
  }

  bool complete(const std::vector<int>& a_set, Color a, Color x, const Bitset& pool) {
    for (Color b : {Color::red, Color::blue}) {
      if (a == b && b == x) continue;
      auto b_set = clique_in(b, pool);
      if (!b_set) continue;
      FmWitness w;
      std::vector<int> A = a_set, B = *b_set;
      std::sort(A.begin(), A.end());
      std::sort(B.begin(), B.end());
      if (a == b) {
        w.variant = a == Color::red ? FmVariant::C : FmVariant::C_bar;
        w.part_split = {A, B};
      } else {
        // the clique whose colour differs from the cross colour stands alone
        bool a_alone = x == b;
        Color lone = a_alone ? a : b;
        w.variant = lone == Color::blue ? FmVariant::D : FmVariant::D_bar;
        w.part_split = a_alone ? std::make_pair(A, B) : std::make_pair(B, A);
      }
      w.vertices = w.part_split.first;
      w.vertices.insert(w.vertices.end(), w.part_split.second.begin(), w.part_split.second.end());
      std::string bad = witness_violation(col_, m_, w);
      if (!bad.empty()) throw std::logic_error("assembled witness fails verification: " + bad);
      found_ = std::move(w);
      return true;
    }
    return false;
  }

  // A grows inside `cand` as a colour-a clique; `common` holds the vertices
  // x-adjacent to all of A. B is sought in common & restrict.
  bool anchor(std::vector<int>& A, Bitset cand, const Bitset& common, Color a, Color x, const Bitset& restrict) {
    if (++probes_ > opt_.budget) return false;
    const int left = m_ - static_cast<int>(A.size());
    Bitset pool = common & restrict;
    if (pool.count() - std::min(left, pool.count_and(cand)) < m_) return false;
    if (left == 0) return complete(A, a, x, common & restrict);
    while (cand.any()) {
      int v = cand.first();
      cand.reset(v);
      if (1 + cand.count() < left) return false;
      A.push_back(v);
      if (anchor(A, cand & g(a).neighbors(v), common & g(x).neighbors(v), a, x, restrict)) return true;
      A.pop_back();
      if (exhausted()) return false;
    }
    return false;
  }

  bool anchor_from(const Bitset& s, Color a, const Bitset& restrict) {
    for (Color x : {Color::red, Color::blue}) {
      std::vector<int> A;
      if (anchor(A, s, Bitset::full(n_), a, x, restrict)) return true;
      if (exhausted()) return false;
    }
    return false;
  }

  const Coloring& col_;
  int n_, m_;
  UnavoidableOptions opt_;
  Graph red_, blue_;
  std::int64_t probes_ = 0;
  std::optional<FmWitness> found_;
};

}  // namespace

UnavoidableResult find_unavoidable(const Coloring& coloring, int m, const Rational& eps,
                                   const UnavoidableOptions& opt) {
  if (m < 1) throw ParameterError("m must be at least 1");
  if (eps < 0 || eps > 1) throw ParameterError("eps outside [0,1]");
  const int n = coloring.n();
  UnavoidableResult res;
  Rational thr = eps * big(coloring.total_pairs());
  std::int64_t r = coloring.red_count(), b = coloring.blue_count();
  if (Rational(big(r)) < thr || Rational(big(b)) < thr) {
    res.status = "imbalanced";
    res.sparse_color = r <= b ? Color::red : Color::blue;
    res.sparse_count = std::min(r, b);
    res.stage = "density";
    return res;
  }
  res.status = "not_found";
  if (n < 2 * m) {
    res.stage = "size";
    return res;
  }
  FmSearch s(coloring, m, opt);
  auto done = [&](const char* stage) {
    res.probes = s.probes_;
    res.stage = stage;
    if (s.found_) {
      res.status = "found";
      res.witness = s.found_;
    }
    return res;
  };

  const int cap = std::max(m, opt.clique_multiple * m);
  std::vector<std::pair<Bitset, Color>> cliques;
  Bitset pool = Bitset::full(n);
  while (pool.count() >= m && !s.exhausted()) {
    auto cr = s.greedy_clique(Color::red, pool, cap);
    auto cb = s.greedy_clique(Color::blue, pool, cap);
    bool use_red = cr.size() >= cb.size();
    const auto& cl = use_red ? cr : cb;
    if (static_cast<int>(cl.size()) < m) break;
    Bitset p = Bitset::of(n, cl);
    Color pc = use_red ? Color::red : Color::blue;
    for (const auto& [q, qc] : cliques)
      if (s.anchor_from(p, pc, q)) return done("clique_pair");
    cliques.emplace_back(p, pc);
    pool.andnot(p);
  }
  for (const auto& [p, pc] : cliques)
    if (s.anchor_from(p, pc, Bitset::full(n))) return done("anchor");
  if (m <= 3)
    for (Color a : {Color::red, Color::blue})
      if (s.anchor_from(Bitset::full(n), a, Bitset::full(n))) return done("exhaustive");
  return done(s.exhausted() ? "budget" : "exhausted");
}

KkFactor polish_kk_factor(const Coloring& coloring, const KkFactor& f, Color c, int max_passes) {
  const int n = coloring.n(), nb = static_cast<int>(f.blocks.size());
  Graph gr = coloring.graph_of(c);
  auto blocks = f.blocks;
  std::vector<int> cnt(std::size_t(n) * nb, 0);
  auto at = [&](int v, int b) -> int& { return cnt[std::size_t(v) * nb + b]; };
  for (int b = 0; b < nb; ++b)
    for (int u : blocks[b])
      for (int v = 0; v < n; ++v)
        if (gr.has_edge(u, v)) ++at(v, b);
  for (int pass = 0; pass < max_passes; ++pass) {
    bool improved = false;
    for (int b1 = 0; b1 < nb; ++b1)
      for (int b2 = b1 + 1; b2 < nb; ++b2)
        for (auto& u : blocks[b1])
          for (auto& v : blocks[b2]) {
            int e = gr.has_edge(u, v);
            int delta = at(v, b1) - e - at(u, b1) + at(u, b2) - e - at(v, b2);
            if (delta <= 0) continue;
            for (int w = 0; w < n; ++w) {
              int dv = gr.has_edge(w, v), du = gr.has_edge(w, u);
              at(w, b1) += dv - du;
              at(w, b2) += du - dv;
            }
            std::swap(u, v);
            improved = true;
          }
    if (!improved) break;
  }
  KkFactor out = make_kk_factor(coloring, f.k, std::move(blocks));
  out.adjusted = f.adjusted;
  return out;
}

namespace {

struct ExtractedBlock {
  std::vector<int> verts;  // host vertices in canonical order
  char kind;               // B plain construction, b swapped, C red cliques, c blue cliques
};

struct Extraction {
  std::vector<ExtractedBlock> blocks;
  std::vector<int> w;
  std::string stop;
  int searches = 0;
};

// Repeatedly takes a copy of the construction (x_take vertices from the
// non-clique side, y_take from the lone clique) or of the two-cliques colouring
// (c_half from each clique) out of an F_q witness.
template <class Admit>
Extraction extract(const Coloring& coloring, int q, int x_take, int y_take, int c_half, const Rational& eps,
                   const UnavoidableOptions& opt, Admit admit) {
  const int n = coloring.n();
  Extraction ex;
  Bitset pool = Bitset::full(n);
  while (true) {
    std::vector<int> pv = pool.members();
    if (static_cast<int>(pv.size()) < 2 * q) {
      ex.stop = "pool_small";
      break;
    }
    ++ex.searches;
    UnavoidableResult r = find_unavoidable(coloring.induced(pv), q, eps, opt);
    if (r.status != "found") {
      ex.stop = r.status;
      break;
    }
    const auto& [first, second] = r.witness->part_split;
    ExtractedBlock blk;
    switch (r.witness->variant) {
      case FmVariant::D:
      case FmVariant::D_bar:
        for (int i = 0; i < x_take; ++i) blk.verts.push_back(pv[second[i]]);
        for (int i = 0; i < y_take; ++i) blk.verts.push_back(pv[first[i]]);
        blk.kind = r.witness->variant == FmVariant::D ? 'B' : 'b';
        break;
      case FmVariant::C:
      case FmVariant::C_bar:
        for (int i = 0; i < c_half; ++i) blk.verts.push_back(pv[first[i]]);
        for (int i = 0; i < c_half; ++i) blk.verts.push_back(pv[second[i]]);
        blk.kind = r.witness->variant == FmVariant::C ? 'C' : 'c';
        break;
    }
    if (!admit(blk)) {
      ex.stop = "parts_exhausted";
      break;
    }
    for (int v : blk.verts) pool.reset(v);
    ex.blocks.push_back(std::move(blk));
  }
  ex.w = pool.members();
  return ex;
}

Color dense_color(const Coloring& coloring, const std::vector<int>& w) {
  Coloring sub = coloring.induced(w);
  return sub.red_count() >= sub.blue_count() ? Color::red : Color::blue;
}

bool imbalanced(const Coloring& coloring, const std::vector<int>& w, const Rational& eps) {
  Coloring sub = coloring.induced(w);
  Rational thr = eps * big(sub.total_pairs());
  return Rational(big(sub.red_count())) < thr || Rational(big(sub.blue_count())) < thr;
}

std::int64_t mono(const KkFactor& f) { return std::max(f.red_count, f.blue_count); }

}  // namespace

KkDriverResult kk_factor_driver(const Coloring& coloring, int k, const Rational& eps, Seed seed,
                                const UnavoidableOptions& opt) {
  (void)seed;
  const int n = coloring.n();
  if (k < 2 || n < k || n % k) throw ParameterError("k must divide n");
  if (eps <= 0 || eps > 1) throw ParameterError("eps outside (0,1]");
  RhoLambda rl = solve_rho_lambda(k);
  const int den = static_cast<int>(to_int64(rl.rho.get_den()));
  const int m = k * den;
  const int xm = static_cast<int>(to_int64(BigInt(rl.rho * big(m))));

  KkDriverResult res;
  res.m = m;
  Extraction ex = extract(coloring, 2 * m, xm, m - xm, m, eps, opt, [](const ExtractedBlock&) { return true; });
  res.stop_reason = ex.stop;
  res.w_size = static_cast<int>(ex.w.size());
  for (const auto& b : ex.blocks) {
    if (b.kind == 'B' || b.kind == 'b') ++res.j_blocks;
    if (b.kind == 'C') ++res.i_red;
    if (b.kind == 'c') ++res.i_blue;
  }
  res.extraction_complete = ex.w.size() < std::size_t(4 * m) || imbalanced(coloring, ex.w, eps);

  auto assemble = [&](Color t) {
    std::vector<std::vector<int>> blocks;
    for (const auto& b : ex.blocks) {
      KkFactor local;
      switch (b.kind) {
        case 'B': local = opt_kk_factor_bipartite(m, k, rl.rho, t); break;
        case 'b': local = opt_kk_factor_bipartite(m, k, rl.rho, other(t)); break;
        case 'C': local = kk_factor_two_cliques(m, k, t); break;
        default: local = kk_factor_two_cliques(m, k, other(t)); break;
      }
      for (auto& blk : relabel_blocks(local.blocks, b.verts)) blocks.push_back(std::move(blk));
    }
    if (!ex.w.empty()) {
      const int nw = static_cast<int>(ex.w.size());
      Embedding e = greedy_expectation_embed(clique_factor_graph(nw, k), coloring.induced(ex.w), t);
      for (int s = 0; s < nw; s += k) {
        std::vector<int> blk;
        for (int i = 0; i < k; ++i) blk.push_back(ex.w[e(s + i)]);
        blocks.push_back(std::move(blk));
      }
    }
    return make_kk_factor(coloring, k, std::move(blocks));
  };
  auto whole = [&](Color t) {
    Embedding e = greedy_expectation_embed(clique_factor_graph(n, k), coloring, t);
    std::vector<std::vector<int>> blocks;
    for (int s = 0; s < n; s += k) {
      std::vector<int> blk;
      for (int i = 0; i < k; ++i) blk.push_back(e(s + i));
      blocks.push_back(std::move(blk));
    }
    return make_kk_factor(coloring, k, std::move(blocks));
  };

  Color t = ex.w.empty() ? Color::red : dense_color(coloring, ex.w);
  int i_sparse = t == Color::red ? res.i_blue : res.i_red;
  std::int64_t mass = std::int64_t{2} * m * (res.i_red + res.i_blue) + res.w_size;
  res.alpha = mass ? rat(std::int64_t{2} * m * i_sparse, mass) : Rational(0);
  Color proof_color = res.alpha > rat(2, 3) ? other(t) : t;
  res.case_taken = res.alpha > rat(2, 3) ? "alpha>2/3" : "alpha<=2/3";

  struct Cand {
    std::string tag;
    Color c;
    KkFactor f;
  };
  std::vector<Cand> cands;
  cands.push_back({"proof", proof_color, assemble(proof_color)});
  cands.push_back({"proof-other", other(proof_color), assemble(other(proof_color))});
  for (Color c : {Color::red, Color::blue}) cands.push_back({std::string("greedy-") + name(c), c, whole(c)});
  const std::size_t raw = cands.size();
  for (std::size_t i = 0; i < raw; ++i)
    cands.push_back({cands[i].tag + "+polish", cands[i].c, polish_kk_factor(coloring, cands[i].f, cands[i].c)});

  std::size_t best = 0;
  for (std::size_t i = 0; i < cands.size(); ++i) {
    res.notes["attempt:" + cands[i].tag] = std::to_string(cands[i].f.count(cands[i].c));
    if (mono(cands[i].f) > mono(cands[best].f)) best = i;
  }
  res.factor = cands[best].f;
  res.strategy = cands[best].tag;
  res.color = res.factor.red_count >= res.factor.blue_count ? Color::red : Color::blue;
  res.count = mono(res.factor);
  res.target = (rl.lambda - eps * big(k)) * big(n);
  res.target_met = Rational(big(res.count)) >= res.target;
  res.notes["rho"] = to_string(rl.rho);
  res.notes["lambda"] = to_string(rl.lambda);
  res.notes["searches"] = std::to_string(ex.searches);
  res.notes["dense_color_w"] = name(t);
  return res;
}

int TwoFactor::n() const {
  int s = 0;
  for (const auto& c : cycles) s += static_cast<int>(c.size());
  return s;
}

Graph TwoFactor::graph() const {
  Graph g(n());
  for (const auto& c : cycles)
    for (std::size_t i = 0; i < c.size(); ++i) g.add_edge(c[i], c[(i + 1) % c.size()]);
  return g;
}

std::string two_factor_violation(const TwoFactor& f) {
  const int n = f.n();
  std::vector<char> seen(n, 0);
  for (const auto& c : f.cycles) {
    if (c.size() < 3) return "cycle shorter than 3";
    for (int v : c) {
      if (v < 0 || v >= n) return "vertex out of range";
      if (seen[v]++) return "vertex " + std::to_string(v) + " repeated";
    }
  }
  return {};
}

TwoFactor two_factor_from_lengths(const std::vector<int>& lengths) {
  TwoFactor f;
  int v = 0;
  for (int len : lengths) {
    if (len < 3) throw ParameterError("cycle lengths must be at least 3");
    std::vector<int> c;
    for (int i = 0; i < len; ++i) c.push_back(v++);
    f.cycles.push_back(std::move(c));
  }
  return f;
}

TwoFactor two_factor_from_graph(const Graph& g) {
  if (g.regular_degree() != 2) throw ParameterError("graph is not 2-regular");
  TwoFactor f;
  std::vector<char> seen(g.n(), 0);
  for (int s = 0; s < g.n(); ++s) {
    if (seen[s]) continue;
    std::vector<int> c{s};
    seen[s] = 1;
    int prev = -1, cur = s;
    while (true) {
      int next = -1;
      g.neighbors(cur).for_each([&](int w) {
        if (next < 0 && w != prev && !seen[w]) next = w;
      });
      if (next < 0) break;
      seen[next] = 1;
      c.push_back(next);
      prev = cur;
      cur = next;
    }
    f.cycles.push_back(std::move(c));
  }
  return f;
}

std::vector<std::vector<int>> two_factor_shapes(int n) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  auto rec = [&](auto&& self, int left, int lo) -> void {
    if (left == 0) {
      out.push_back(cur);
      return;
    }
    for (int len = lo; len <= left; ++len) {
      if (left - len != 0 && left - len < len) continue;
      cur.push_back(len);
      self(self, left - len, len);
      cur.pop_back();
    }
  };
  if (n >= 3) rec(rec, n, 3);
  return out;
}

namespace {

// Path pieces and cycles of f restricted to `part`, pieces oriented from the
// endpoint met first in part order.
struct PartShape {
  std::vector<std::vector<int>> pieces;
  std::vector<std::vector<int>> cycles;
};

PartShape part_shape(const Graph& g, const std::vector<int>& part) {
  Bitset in = Bitset::of(g.n(), part);
  PartShape ps;
  Bitset done(g.n());
  auto walk = [&](int s) {
    std::vector<int> seq{s};
    done.set(s);
    int cur = s;
    while (true) {
      int next = -1;
      (g.neighbors(cur) & in).for_each([&](int w) {
        if (next < 0 && !done.test(w)) next = w;
      });
      if (next < 0) break;
      done.set(next);
      seq.push_back(next);
      cur = next;
    }
    return seq;
  };
  for (int v : part)
    if (!done.test(v) && g.neighbors(v).count_and(in) <= 1) ps.pieces.push_back(walk(v));
  for (int v : part)
    if (!done.test(v)) ps.cycles.push_back(walk(v));
  return ps;
}

}  // namespace

std::vector<std::vector<int>> cycle_partition(const TwoFactor& f, int k) {
  if (k < 3) throw ParameterError("k must be at least 3");
  std::string bad = two_factor_violation(f);
  if (!bad.empty()) throw ParameterError("not a 2-factor: " + bad);
  std::vector<int> order;
  for (const auto& c : f.cycles) order.insert(order.end(), c.begin(), c.end());
  const int n = static_cast<int>(order.size()), full = n / k;
  std::vector<std::vector<int>> parts(1);
  parts[0].assign(order.begin() + std::size_t(full) * k, order.end());
  for (int i = 0; i < full; ++i) parts.emplace_back(order.begin() + std::size_t(i) * k, order.begin() + std::size_t(i + 1) * k);

  Graph g = f.graph();
  for (std::size_t i = 0; i < parts.size(); ++i) {
    PartShape ps = part_shape(g, parts[i]);
    if (ps.pieces.size() > 2) throw std::logic_error("part with more than two paths");
    if (i > 0 && g.edges_within(Bitset::of(n, parts[i])) < k - 2) throw std::logic_error("part with fewer than k-2 edges");
  }
  return parts;
}

ModifiedTwoFactor close_parts(const TwoFactor& f, int k) {
  ModifiedTwoFactor out;
  out.parts = cycle_partition(f, k);
  if (out.parts.size() > 1 && !out.parts[0].empty() && out.parts[0].size() < 3) {
    auto& last = out.parts.back();
    last.insert(last.end(), out.parts[0].begin(), out.parts[0].end());
    out.parts[0].clear();
  }
  const int n = f.n();
  Graph g = f.graph(), h(n);
  for (const auto& part : out.parts) {
    if (part.empty()) continue;
    PartShape ps = part_shape(g, part);
    auto keep = [&](const std::vector<int>& seq, bool closed) {
      for (std::size_t i = 0; i + 1 < seq.size(); ++i) h.add_edge(seq[i], seq[i + 1]);
      if (closed) h.add_edge(seq.back(), seq.front());
    };
    for (const auto& c : ps.cycles) keep(c, true);
    for (const auto& p : ps.pieces) keep(p, false);
    std::size_t total = 0;
    for (const auto& p : ps.pieces) total += p.size();
    if (ps.pieces.empty()) continue;
    if (total >= 3) {
      for (std::size_t i = 0; i < ps.pieces.size(); ++i) {
        const auto& nxt = ps.pieces[(i + 1) % ps.pieces.size()];
        h.add_edge(ps.pieces[i].back(), nxt.front());
        ++out.added;
      }
    } else {
      if (ps.cycles.empty()) throw std::logic_error("short path pieces without a host cycle");
      const auto& c = ps.cycles.front();
      std::vector<int> seq;
      for (const auto& p : ps.pieces) seq.insert(seq.end(), p.begin(), p.end());
      h.remove_edge(c[0], c[1]);
      h.add_edge(c[0], seq.front());
      h.add_edge(seq.back(), c[1]);
      for (std::size_t i = 0; i + 1 < seq.size(); ++i)
        if (!h.has_edge(seq[i], seq[i + 1])) h.add_edge(seq[i], seq[i + 1]), ++out.added;
      out.added += 2;
    }
  }
  for (auto [u, v] : g.edges())
    if (!h.has_edge(u, v)) ++out.removed;
  out.modified = two_factor_from_graph(h);
  return out;
}

TwoFactorEmbed embed_2factor_bipartite(const TwoFactor& f, Color color) {
  const int n = f.n();
  if (n == 0 || n % 3) throw DimensionError("2-factor must have 3k vertices");
  std::string bad = two_factor_violation(f);
  if (!bad.empty()) throw ParameterError("not a 2-factor: " + bad);
  const int k = n / 3;
  Coloring host = bipartite_construction(n, 1, 3);
  std::vector<int> map(n, -1);
  if (color == Color::red) {
    std::vector<int> s;
    for (const auto& c : f.cycles)
      for (std::size_t i = 0; i + 1 < c.size(); i += 2) s.push_back(c[i]);
    if (static_cast<int>(s.size()) < k) throw std::logic_error("independent set smaller than k");
    s.resize(k);
    for (int i = 0; i < k; ++i) map[s[i]] = i;
    int y = k;
    for (const auto& c : f.cycles)
      for (int v : c)
        if (map[v] < 0) map[v] = y++;
  } else {
    std::vector<int> order;
    for (const auto& c : f.cycles) order.insert(order.end(), c.begin(), c.end());
    for (int i = 0; i < n; ++i) map[order[i]] = i < 2 * k ? k + i : i - 2 * k;
  }
  TwoFactorEmbed out;
  out.embedding = Embedding(map);
  out.color = color;
  out.count = count_color(host, f.graph(), out.embedding, color);
  out.bound = color == Color::red ? 2 * k : 2 * k - 1;
  if (out.count < out.bound || (color == Color::red && out.count != 2 * k))
    throw std::logic_error("bipartite 2-factor embedding misses its bound");
  return out;
}

TwoFactorEmbed embed_2factor_two_cliques(const TwoFactor& f, Color color) {
  const int n = f.n();
  if (n == 0 || n % 4) throw DimensionError("2-factor must have 4k vertices");
  std::string bad = two_factor_violation(f);
  if (!bad.empty()) throw ParameterError("not a 2-factor: " + bad);
  const int k = n / 4;
  Coloring host = two_cliques_coloring(2 * k, true);
  std::vector<int> map(n, -1);
  std::vector<int> order;
  for (const auto& c : f.cycles) order.insert(order.end(), c.begin(), c.end());
  if (color == Color::red) {
    for (int i = 0; i < n; ++i) map[order[i]] = i;
  } else {
    std::vector<int> side_a, side_b;
    int odd = 0;
    for (const auto& c : f.cycles) {
      int s = c.size() % 2 ? odd++ % 2 : 0;
      for (std::size_t i = 0; i < c.size(); ++i) ((i % 2 == 0) == (s == 0) ? side_a : side_b).push_back(c[i]);
    }
    if (side_a.size() != side_b.size()) throw std::logic_error("balanced 2-colouring failed");
    for (int i = 0; i < 2 * k; ++i) map[side_a[i]] = i, map[side_b[i]] = 2 * k + i;
  }
  TwoFactorEmbed out;
  out.embedding = Embedding(map);
  out.color = color;
  out.count = count_color(host, f.graph(), out.embedding, color);
  out.bound = color == Color::red ? 4 * k - 2 : (8 * k + 2) / 3;
  if (out.count < out.bound) throw std::logic_error("two-cliques 2-factor embedding misses its bound");
  return out;
}

TwoFactorDriverResult two_factor_driver(const Coloring& coloring, const TwoFactor& f, const Rational& eps, Seed seed,
                                        const TwoFactorParams& params) {
  (void)seed;
  const int n = coloring.n();
  if (f.n() != n) throw DimensionError("2-factor and colouring differ in size");
  std::string bad = two_factor_violation(f);
  if (!bad.empty()) throw ParameterError("not a 2-factor: " + bad);
  if (eps <= 0 || eps > 1) throw ParameterError("eps outside (0,1]");
  const int k = std::max(3, params.k_override.value_or(static_cast<int>(to_int64(ceil(Rational(6 / eps))))));

  TwoFactorDriverResult res;
  res.k = k;
  ModifiedTwoFactor mf = close_parts(f, k);
  res.modifications = mf.added + mf.removed;
  std::vector<int> full_parts;
  for (std::size_t i = 1; i < mf.parts.size(); ++i)
    if (static_cast<int>(mf.parts[i].size()) == k) full_parts.push_back(static_cast<int>(i));

  std::size_t parts_taken = 0;
  Extraction ex = extract(coloring, 2 * k, k, 2 * k, 2 * k, params.imbalance, params.search, [&](const ExtractedBlock& b) {
    std::size_t need = b.verts.size() / k;
    if (parts_taken + need > full_parts.size()) return false;
    parts_taken += need;
    return true;
  });
  res.stop_reason = ex.stop;
  res.w_size = static_cast<int>(ex.w.size());
  for (const auto& b : ex.blocks) (b.kind == 'B' || b.kind == 'b' ? res.j_blocks : res.c_blocks)++;
  res.extraction_complete =
      ex.stop != "parts_exhausted" && (ex.w.size() < std::size_t(4 * k) || imbalanced(coloring, ex.w, params.imbalance));

  const Graph fg = f.graph(), mg = mf.modified.graph();
  auto assemble = [&](Color t) {
    std::vector<int> map(n, -1);
    std::vector<char> used(n, 0);
    std::size_t next = 0;
    for (const auto& b : ex.blocks) {
      std::vector<int> guest;
      for (std::size_t i = 0; i < b.verts.size() / k; ++i) {
        const auto& part = mf.parts[full_parts[next++]];
        guest.insert(guest.end(), part.begin(), part.end());
      }
      TwoFactor local = two_factor_from_graph(mg.induced(guest));
      TwoFactorEmbed e;
      switch (b.kind) {
        case 'B': e = embed_2factor_bipartite(local, t); break;
        case 'b': e = embed_2factor_bipartite(local, other(t)); break;
        case 'C': e = embed_2factor_two_cliques(local, t); break;
        default: e = embed_2factor_two_cliques(local, other(t)); break;
      }
      for (std::size_t i = 0; i < guest.size(); ++i) {
        map[guest[i]] = b.verts[e.embedding(static_cast<int>(i))];
        used[guest[i]] = 1;
      }
    }
    std::vector<int> rest;
    for (int v = 0; v < n; ++v)
      if (!used[v]) rest.push_back(v);
    if (!rest.empty()) {
      Embedding e = greedy_expectation_embed(mg.induced(rest), coloring.induced(ex.w), t);
      for (std::size_t i = 0; i < rest.size(); ++i) map[rest[i]] = ex.w[e(static_cast<int>(i))];
    }
    return Embedding(map);
  };

  Color t = ex.w.empty() ? Color::red : dense_color(coloring, ex.w);
  struct Cand {
    std::string tag;
    Embedding e;
  };
  std::vector<Cand> cands{{"proof", assemble(t)}, {"proof-other", assemble(other(t))}};
  for (Color c : {Color::red, Color::blue})
    cands.push_back({std::string("greedy-") + name(c), greedy_expectation_embed(fg, coloring, c)});
  std::int64_t best_val = -1;
  for (const auto& c : cands) {
    DiscrepancyReport rep = discrepancy(coloring, fg, c.e);
    std::int64_t val = std::max(rep.mono_plus, rep.mono_minus);
    res.notes["attempt:" + c.tag] = std::to_string(val);
    if (val > best_val) {
      best_val = val;
      res.embedding = c.e;
      res.report = rep;
      res.strategy = c.tag;
    }
  }
  res.color = res.report.mono_plus >= res.report.mono_minus ? Color::red : Color::blue;
  res.count = best_val;
  res.target = (rat(2, 3) - eps) * big(n);
  res.target_met = Rational(big(res.count)) >= res.target;
  res.notes["added_edges"] = std::to_string(mf.added);
  res.notes["removed_edges"] = std::to_string(mf.removed);
  res.notes["dense_color_w"] = name(t);
  return res;
}

Json kk_factor_json(const KkFactor& f) {
  return Json{{"k", f.k},
              {"blocks", f.blocks},
              {"red_count", f.red_count},
              {"blue_count", f.blue_count},
              {"adjusted", f.adjusted}};
}

Json two_factor_json(const TwoFactor& f) { return Json{{"n", f.n()}, {"cycles", f.cycles}}; }

TwoFactor two_factor_from_json(const Json& j) {
  TwoFactor f;
  if (j.contains("cycles")) {
    f.cycles = j.at("cycles").get<std::vector<std::vector<int>>>();
  } else if (j.contains("lengths")) {
    f = two_factor_from_lengths(j.at("lengths").get<std::vector<int>>());
  } else {
    f = two_factor_from_graph(graph_from_json(j));
  }
  std::string bad = two_factor_violation(f);
  if (!bad.empty()) throw ParameterError("not a 2-factor: " + bad);
  return f;
}

Json witness_json(const FmWitness& w) {
  return Json{{"variant", name(w.variant)},
              {"vertices", w.vertices},
              {"part_split", {w.part_split.first, w.part_split.second}}};
}

Json unavoidable_json(const UnavoidableResult& r) {
  Json j{{"status", r.status}, {"probes", r.probes}, {"stage", r.stage}};
  if (r.witness) j["witness"] = witness_json(*r.witness);
  if (r.status == "imbalanced") {
    j["sparse_color"] = name(r.sparse_color);
    j["sparse_count"] = r.sparse_count;
  }
  return j;
}

Json kk_driver_json(const KkDriverResult& r) {
  return Json{{"factor", kk_factor_json(r.factor)},
              {"color", name(r.color)},
              {"count", r.count},
              {"m", r.m},
              {"j_blocks", r.j_blocks},
              {"i_red", r.i_red},
              {"i_blue", r.i_blue},
              {"w_size", r.w_size},
              {"alpha", rational_json(r.alpha)},
              {"case", r.case_taken},
              {"strategy", r.strategy},
              {"stop_reason", r.stop_reason},
              {"extraction_complete", r.extraction_complete},
              {"target", rational_json(r.target)},
              {"target_met", r.target_met},
              {"notes", r.notes}};
}

Json two_factor_driver_json(const TwoFactorDriverResult& r) {
  return Json{{"embedding", embedding_json(r.embedding)},
              {"color", name(r.color)},
              {"count", r.count},
              {"report", report_json(r.report)},
              {"k", r.k},
              {"j_blocks", r.j_blocks},
              {"c_blocks", r.c_blocks},
              {"w_size", r.w_size},
              {"modifications", r.modifications},
              {"strategy", r.strategy},
              {"stop_reason", r.stop_reason},
              {"extraction_complete", r.extraction_complete},
              {"target", rational_json(r.target)},
              {"target_met", r.target_met},
              {"notes", r.notes}};
}

}  // namespace disc
