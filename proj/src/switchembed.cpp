#include "disc/switchembed.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "disc/bisect.hpp"
#include "disc/cutembed.hpp"
#include "disc/error.hpp"

namespace disc {

namespace {

Bitset balanced_split(int n, Rng& rng) {
  Bitset x(n);
  for (int v = 0; v < n; ++v)
    if (rng.bernoulli(1, 2)) x.set(v);
  const int want = n / 2;
  while (x.count() > want) {
    auto m = x.members();
    x.reset(m[rng.below(m.size())]);
  }
  while (x.count() < want) {
    auto m = x.complement().members();
    x.set(m[rng.below(m.size())]);
  }
  return x;
}

// value <= r * n, with r rational
bool at_most_fraction(std::int64_t value, const Rational& r, std::int64_t n) {
  return Rational(big(value)) <= r * big(n);
}

void require_same_n(const Graph& f, const Coloring& c) {
  if (f.n() != c.n()) throw DimensionError("guest and coloring sizes differ");
}

std::vector<int> fill_rest(int n, std::vector<int> map) {
  Bitset used(n);
  for (int h : map)
    if (h >= 0) used.set(h);
  int next = 0;
  for (int v = 0; v < n; ++v) {
    if (map[v] >= 0) continue;
    while (used.test(next)) ++next;
    map[v] = next;
    used.set(next);
  }
  return map;
}

SwitchResult finish(const Graph& f, const Coloring& c, Embedding e, std::string strategy, std::string case_taken) {
  SwitchResult r;
  r.report = discrepancy(c, f, e);
  r.embedding = std::move(e);
  r.strategy = std::move(strategy);
  r.case_taken = std::move(case_taken);
  return r;
}

struct Oriented {
  int m = 0;
  std::vector<std::pair<int, int>> guest;
  std::vector<std::pair<int, int>> host;
  std::vector<Bitset> v_i, v_pi, y_i, y_pi;
};

Oriented orient(const Graph& f, const GuestCertificate& gc, const Coloring& c, const HostCertificate& hc) {
  Oriented o;
  o.m = static_cast<int>(std::min(gc.pairs.size(), hc.pairs.size()));
  const Bitset v = gc.u_side.complement();
  const Bitset y = hc.x_side.complement();
  for (int i = 0; i < o.m; ++i) {
    auto [u, up] = gc.pairs[i];
    Bitset a = minus(f.neighbors(u) & v, f.neighbors(up));
    Bitset b = minus(f.neighbors(up) & v, f.neighbors(u));
    if (a.count() < b.count()) {
      std::swap(u, up);
      std::swap(a, b);
    }
    o.guest.emplace_back(u, up);
    o.v_i.push_back(std::move(a));
    o.v_pi.push_back(std::move(b));

    auto [x, xp] = hc.pairs[i];
    Bitset ya = minus(c.red().neighbors(x) & y, c.red().neighbors(xp));
    Bitset yb = minus(c.red().neighbors(xp) & y, c.red().neighbors(x));
    if (ya.count() < yb.count()) {
      std::swap(x, xp);
      std::swap(ya, yb);
    }
    o.host.emplace_back(x, xp);
    o.y_i.push_back(std::move(ya));
    o.y_pi.push_back(std::move(yb));
  }
  return o;
}

std::vector<std::int64_t> deltas_for(const Oriented& o, const std::vector<int>& g) {
  std::vector<std::int64_t> d(o.m, 0);
  for (int i = 0; i < o.m; ++i) {
    std::int64_t s = 0;
    o.v_i[i].for_each([&](int v) { s += int(o.y_i[i].test(g[v])) - int(o.y_pi[i].test(g[v])); });
    o.v_pi[i].for_each([&](int v) { s += int(o.y_pi[i].test(g[v])) - int(o.y_i[i].test(g[v])); });
    d[i] = s;
  }
  return d;
}

std::int64_t red_within(const Graph& f, const Bitset& part, const Coloring& c, const std::vector<int>& map) {
  std::int64_t s = 0;
  for (auto [a, b] : f.edges())
    if (part.test(a) && part.test(b)) s += c.is_red(map[a], map[b]);
  return s;
}

bool better(const SwitchResult& a, const SwitchResult& b) { return a.report.discrepancy > b.report.discrepancy; }

Color majority(const Coloring& c) { return 2 * c.red_count() >= c.total_pairs() ? Color::red : Color::blue; }

SwitchResult expectation_branch(const Graph& f, const Coloring& c) {
  Color t = majority(c);
  SwitchResult r = finish(f, c, greedy_expectation_embed(f, c, t), "expectation", "density");
  r.certificate_value = rat(c.count(t) * f.edge_count(), std::max<std::int64_t>(1, c.total_pairs()));
  return r;
}

Bisection farthest(Bisection a, Bisection b) { return abs(b.deviation) > abs(a.deviation) ? b : a; }

SwitchResult cut_branch(const Graph& f, const Coloring& c, Seed seed, const SwitchParams& p) {
  Bisection fb = farthest(extremal_bisection(f, Direction::max, p.search_budget, derive(seed, 11)),
                          extremal_bisection(f, Direction::min, p.search_budget, derive(seed, 12)));
  // host side: deviation from half of |X||Y|
  const Graph& red = c.red();
  Bisection hmax = local_search_bisection(red, Direction::max, p.search_budget, derive(seed, 13));
  Bisection hmin = local_search_bisection(red, Direction::min, p.search_budget, derive(seed, 14));
  const std::int64_t xy = std::int64_t{c.n() / 2} * (c.n() - c.n() / 2);
  auto dev = [&](const Bisection& b) {
    std::int64_t d = 2 * b.cut_size - xy;
    return d < 0 ? -d : d;
  };
  Bisection gb = dev(hmin) > dev(hmax) ? hmin : hmax;
  CutEmbedResult r = cut_embed(f, fb, c, gb, derive(seed, 15));
  SwitchResult out = finish(f, c, r.embedding, "cut", "biased-bisection");
  out.certificate_value = r.expectation;
  out.notes["expectation"] = to_string(r.expectation);
  out.notes["target"] = name(r.target);
  out.notes["host_bisection_deviation"] = std::to_string(dev(gb));
  out.notes["precondition_met"] = r.precondition_met ? "true" : "false";
  return out;
}

SwitchResult pick_best(std::vector<SwitchResult>& cands, std::map<std::string, std::string> attempts) {
  if (cands.empty()) throw SearchFailure("no strategy produced an embedding");
  std::size_t best = 0;
  for (std::size_t i = 1; i < cands.size(); ++i)
    if (better(cands[i], cands[best])) best = i;
  SwitchResult r = std::move(cands[best]);
  for (auto& [k, v] : attempts) r.notes["attempt:" + k] = v;
  return r;
}

template <class F>
void attempt(std::vector<SwitchResult>& cands, std::map<std::string, std::string>& log, const std::string& tag,
             F&& fn) {
  try {
    cands.push_back(fn());
    log[tag] = std::to_string(cands.back().report.discrepancy);
  } catch (const Error& e) {
    log[tag] = std::string("skipped: ") + e.what();
  }
}

}  // namespace

double GuestCertificate::value_t() const {
  double t = 0;
  for (auto d : d_values) t += std::sqrt(double(d));
  return t;
}

Rational GuestCertificate::value_t_lower() const {
  Rational t = 0;
  const BigInt scale = BigInt(1) << 20;
  for (auto d : d_values) {
    BigInt s = big(d) * scale * scale, r;
    mpz_sqrt(r.get_mpz_t(), s.get_mpz_t());
    t += Rational(r, scale);
  }
  t.canonicalize();
  return t;
}

std::string guest_certificate_violation(const Graph& f, const GuestCertificate& gc) {
  const int n = f.n();
  if (gc.u_side.size() != n) return "u_side size";
  if (gc.u_side.count() != n / 2) return "|U| != floor(n/2)";
  if (gc.pairs.size() != gc.d_values.size()) return "pairs and d_values differ in length";
  const std::int64_t m = static_cast<std::int64_t>(gc.pairs.size());
  if (20 * m > n) return "m > 0.05n";
  const Bitset v = gc.u_side.complement();
  const int vs = v.count();
  Bitset seen(n);
  if (gc.u_independent && f.edges_within(gc.u_side) != 0) return "U not independent";
  for (std::int64_t i = 0; i < m; ++i) {
    auto [u, up] = gc.pairs[i];
    if (u < 0 || up < 0 || u >= n || up >= n || u == up) return "pair " + std::to_string(i) + " malformed";
    if (!gc.u_side.test(u) || !gc.u_side.test(up)) return "pair " + std::to_string(i) + " outside U";
    if (seen.test(u) || seen.test(up)) return "pair " + std::to_string(i) + " reuses a vertex";
    seen.set(u);
    seen.set(up);
    const std::int64_t d = gc.d_values[i];
    if (d < 1) return "d_" + std::to_string(i) + " < 1";
    Bitset nu = f.neighbors(u) & v, nup = f.neighbors(up) & v;
    std::int64_t a = nu.count_andnot(nup), b = nup.count_andnot(nu);
    if (100 * a < d) return "pair " + std::to_string(i) + ": |V_i| < 0.01 d_i";
    if (3 * a > 2 * vs || 3 * b > 2 * vs) return "pair " + std::to_string(i) + ": side exceeds 2/3 |V|";
    if (!gc.u_independent) {
      std::int64_t diff = nu.count() - nup.count();
      if (diff * diff > 400 * d) return "pair " + std::to_string(i) + ": degree gap exceeds 20 sqrt(d_i)";
    }
  }
  return {};
}

std::string host_certificate_violation(const Coloring& coloring, const HostCertificate& hc) {
  const int n = coloring.n();
  const Graph& g = coloring.red();
  if (hc.x_side.size() != n) return "x_side size";
  if (hc.x_side.count() != n / 2) return "|X| != floor(n/2)";
  if (static_cast<int>(hc.pairs.size()) != host_pair_count(n)) return "pair count != ceil(0.05n)";
  if (hc.beta <= 0) return "beta <= 0";
  const Bitset y = hc.x_side.complement();
  const std::int64_t ys = y.count();
  Bitset seen(n);
  for (std::size_t i = 0; i < hc.pairs.size(); ++i) {
    auto [x, xp] = hc.pairs[i];
    const std::string tag = "pair " + std::to_string(i);
    if (x < 0 || xp < 0 || x >= n || xp >= n || x == xp) return tag + " malformed";
    if (!hc.x_side.test(x) || !hc.x_side.test(xp)) return tag + " outside X";
    if (seen.test(x) || seen.test(xp)) return tag + " reuses a vertex";
    seen.set(x);
    seen.set(xp);
    Bitset nx = g.neighbors(x) & y, nxp = g.neighbors(xp) & y;
    std::int64_t dx = nx.count(), dxp = nxp.count();
    if (!at_most_fraction(std::abs(dx - dxp), hc.beta, n)) return tag + ": |d_Y difference| > beta n";
    std::int64_t sym = nx.count_xor(nxp);
    if (50 * sym < ys || 50 * sym > 49 * ys) return tag + ": symmetric difference outside [0.02|Y|, 0.98|Y|]";
    for (auto d : {dx, dxp})
      if (10 * d < ys || 10 * d > 9 * ys) return tag + ": d_Y outside [0.1|Y|, 0.9|Y|]";
  }
  return {};
}

HostCertifyResult certify_host(const Coloring& coloring, const Rational& beta, Seed seed, int attempts) {
  const int n = coloring.n();
  if (n < 40) throw ParameterError("certify_host needs n >= 40");
  if (beta <= 0) throw ParameterError("beta must be positive");
  if (attempts < 1) throw ParameterError("attempts must be positive");
  const Graph& g = coloring.red();
  const int m = host_pair_count(n);
  const BigInt bn = beta.get_num(), bd = beta.get_den();

  HostCertifyResult res;
  res.failure = "x_med_empty";
  for (int a = 0; a < attempts; ++a) {
    Rng rng(derive(seed, a));
    Bitset x = balanced_split(n, rng);
    Bitset y = x.complement();
    const std::int64_t ys = y.count();
    std::map<BigInt, std::vector<int>> buckets;
    std::vector<Bitset> ny(n);
    int med = 0;
    x.for_each([&](int v) {
      ny[v] = g.neighbors(v) & y;
      std::int64_t d = ny[v].count();
      if (10 * d < ys || 10 * d > 9 * ys) return;
      ++med;
      // floor(d / (beta n))
      BigInt key = big(d) * bd;
      mpz_fdiv_q(key.get_mpz_t(), key.get_mpz_t(), BigInt(bn * big(n)).get_mpz_t());
      buckets[key].push_back(v);
    });
    std::vector<std::pair<int, int>> pairs;
    for (auto& [key, pool] : buckets) {
      std::vector<char> used(pool.size(), 0);
      for (std::size_t i = 0; i < pool.size() && static_cast<int>(pairs.size()) < m; ++i) {
        if (used[i]) continue;
        for (std::size_t j = i + 1; j < pool.size(); ++j) {
          if (used[j]) continue;
          std::int64_t sym = ny[pool[i]].count_xor(ny[pool[j]]);
          if (50 * sym >= ys && 50 * sym <= 49 * ys) {
            used[i] = used[j] = 1;
            pairs.emplace_back(pool[i], pool[j]);
            break;
          }
        }
      }
      if (static_cast<int>(pairs.size()) >= m) break;
    }
    if (static_cast<int>(pairs.size()) >= m) {
      HostCertificate hc{x, pairs, beta};
      std::string bad = host_certificate_violation(coloring, hc);
      if (!bad.empty()) throw Error("host certificate failed re-verification: " + bad);
      res.certificate = std::move(hc);
      res.failure.clear();
      res.x_med = med;
      res.pairs_found = m;
      return res;
    }
    bool improves = a == 0 || static_cast<int>(pairs.size()) > res.pairs_found ||
                    (static_cast<int>(pairs.size()) == res.pairs_found && med > res.x_med);
    if (improves) {
      res.x_med = med;
      res.pairs_found = static_cast<int>(pairs.size());
      res.failure = med == 0 ? "x_med_empty" : pairs.empty() ? "symmetric_difference_window_starved" : "insufficient_pairs";
    }
  }
  return res;
}

GuestCertificate certify_guest_regular(const Graph& f, Seed seed, int retries, int max_pairs) {
  const int n = f.n();
  const int d = f.regular_degree();
  if (d < 0) throw PreconditionError("guest is not regular");
  if (2 * d > n) throw PreconditionError("d > n/2");
  if (d < 1) throw PreconditionError("d = 0 admits no certificate");
  if (n / 100 < 1) throw ParameterError("n too small: floor(0.01n) = 0");
  if (max_pairs > n / 20) throw ParameterError("max_pairs exceeds floor(0.05n)");
  const int target = max_pairs < 0 ? n / 100 : max_pairs;
  if (retries < 1) throw ParameterError("retries must be positive");

  GuestCertificate best;
  for (int r = 0; r < retries; ++r) {
    Rng rng(derive(seed, r));
    Bitset u = balanced_split(n, rng);
    Bitset v = u.complement();
    const int vs = v.count();
    std::vector<int> star;
    std::vector<Bitset> nv(n);
    u.for_each([&](int w) {
      nv[w] = f.neighbors(w) & v;
      std::int64_t dev = 2 * std::int64_t{nv[w].count()} - d;
      if (dev * dev <= 400 * std::int64_t{d}) star.push_back(w);
    });
    auto ok = [&](int a, int b) {
      std::int64_t x = nv[a].count_andnot(nv[b]), y = nv[b].count_andnot(nv[a]);
      return 100 * x >= d && 3 * x <= 2 * vs && 3 * y <= 2 * vs;
    };
    GuestCertificate gc;
    gc.u_side = u;
    std::vector<char> used(star.size(), 0);
    for (std::size_t i = 0; i < star.size() && static_cast<int>(gc.pairs.size()) < target; ++i) {
      if (used[i]) continue;
      for (std::size_t j = i + 1; j < star.size(); ++j) {
        if (used[j]) continue;
        int a = star[i], b = star[j];
        if (!ok(a, b)) {
          if (!ok(b, a)) continue;
          std::swap(a, b);
        }
        used[i] = used[j] = 1;
        gc.pairs.emplace_back(a, b);
        gc.d_values.push_back(d);
        break;
      }
    }
    if (r == 0 || gc.pairs.size() > best.pairs.size()) best = gc;
    if (static_cast<int>(gc.pairs.size()) >= target) break;
  }
  if (static_cast<int>(best.pairs.size()) < target)
    throw SearchFailure("guest certification found " + std::to_string(best.pairs.size()) + " of " +
                        std::to_string(target) + " pairs after " + std::to_string(retries) + " retries");
  std::string bad = guest_certificate_violation(f, best);
  if (!bad.empty()) throw Error("guest certificate failed re-verification: " + bad);
  return best;
}

GuestIndependentResult certify_guest_independent(const Graph& f, const Bitset& indep) {
  const int n = f.n();
  if (indep.size() != n) throw DimensionError("independent set has the wrong universe");
  if (f.edges_within(indep) != 0) throw PreconditionError("set is not independent");
  if (indep.count() < n / 2) throw PreconditionError("independent set smaller than floor(n/2)");
  for (int v = 0; v < n; ++v)
    if (f.degree(v) == 0) throw PreconditionError("guest has an isolated vertex");

  auto members = indep.members();
  members.resize(n / 2);
  Bitset u = Bitset::of(n, members);
  Bitset v = u.complement();
  const int vs = v.count();
  const int cap = n / 20;

  GuestIndependentResult res;
  res.certificate.u_side = u;
  res.certificate.u_independent = true;
  auto ok = [&](int a, int b) {
    std::int64_t x = f.neighbors(a).count_andnot(f.neighbors(b)), y = f.neighbors(b).count_andnot(f.neighbors(a));
    return x >= 1 && 3 * x <= 2 * vs && 3 * y <= 2 * vs;
  };
  std::vector<char> used(members.size(), 0);
  auto& pairs = res.certificate.pairs;
  for (std::size_t i = 0; i < members.size() && static_cast<int>(pairs.size()) < cap; ++i) {
    if (used[i]) continue;
    for (std::size_t j = i + 1; j < members.size(); ++j) {
      if (used[j]) continue;
      int a = members[i], b = members[j];
      if (!ok(a, b)) {
        if (!ok(b, a)) continue;
        std::swap(a, b);
      }
      used[i] = used[j] = 1;
      pairs.emplace_back(a, b);
      res.certificate.d_values.push_back(1);
      break;
    }
  }
  res.complete = static_cast<int>(pairs.size()) >= cap;
  int best = -1;
  v.for_each([&](int w) {
    if (best < 0 || f.degree(w) > f.degree(best)) best = w;
  });
  res.max_degree_vertex = best;
  if (!res.complete) {
    int dmax = best >= 0 ? f.degree(best) : 0;
    res.diagnostic = "found " + std::to_string(pairs.size()) + " of " + std::to_string(cap) + " pairs; V-vertex " +
                     std::to_string(best) + " has degree " + std::to_string(dmax) +
                     (10 * dmax >= 4 * n ? " >= 0.4n" : " < 0.4n");
  }
  std::string bad = guest_certificate_violation(f, res.certificate);
  if (!bad.empty()) throw Error("guest certificate failed re-verification: " + bad);
  return res;
}

std::vector<std::int64_t> switch_pair_deltas(const Graph& f, const GuestCertificate& gc, const Coloring& coloring,
                                             const HostCertificate& hc, const std::vector<int>& g) {
  require_same_n(f, coloring);
  if (static_cast<int>(g.size()) != f.n()) throw DimensionError("g must have one entry per guest vertex");
  return deltas_for(orient(f, gc, coloring, hc), g);
}

SwitchResult main_switch_embed(const Graph& f, const GuestCertificate& gc, const Coloring& coloring,
                               const HostCertificate& hc, const SwitchParams& params, Seed seed) {
  require_same_n(f, coloring);
  const int n = f.n();
  if (std::string bad = guest_certificate_violation(f, gc); !bad.empty())
    throw CertificateError("guest certificate invalid: " + bad);
  if (std::string bad = host_certificate_violation(coloring, hc); !bad.empty())
    throw CertificateError("host certificate invalid: " + bad);
  if (params.trials < 1) throw ParameterError("trials must be positive");

  const Oriented o = orient(f, gc, coloring, hc);
  const std::vector<int> vs = gc.u_side.complement().members();
  const std::vector<int> ys = hc.x_side.complement().members();
  const BigInt rn = params.rho.get_num(), rd = params.rho.get_den();
  std::vector<std::int64_t> dvals(gc.d_values.begin(), gc.d_values.begin() + o.m);

  auto draw = [&](Seed s) {
    Rng rng(s);
    std::vector<int> perm = ys;
    rng.shuffle(perm);
    std::vector<int> g(n, -1);
    for (std::size_t j = 0; j < vs.size(); ++j) g[vs[j]] = perm[j];
    return g;
  };
  auto good = [&](std::int64_t dlt, std::int64_t d) {
    // D >= 0.1 rho sqrt(d)  <=>  D >= 0 and 100 D^2 rho_den^2 >= rho_num^2 d
    return dlt >= 0 && big(100) * big(dlt) * big(dlt) * rd * rd >= rn * rn * big(d);
  };

  std::vector<int> best_g;
  std::vector<std::int64_t> best_d;
  std::int64_t best_z = -1;
  for (int t = 0; t < params.trials; ++t) {
    auto g = draw(derive(seed, t));
    auto d = deltas_for(o, g);
    std::int64_t z = 0;
    for (int i = 0; i < o.m; ++i)
      if (good(d[i], dvals[i])) z += d[i];
    if (z > best_z) {
      best_z = z;
      best_g = std::move(g);
      best_d = std::move(d);
    }
  }

  std::vector<char> is_good(o.m, 0);
  for (int i = 0; i < o.m; ++i) is_good[i] = good(best_d[i], dvals[i]);

  std::vector<int> h1(n, -1), h2;
  Bitset x_used(n);
  for (int i = 0; i < o.m; ++i) {
    h1[o.guest[i].first] = o.host[i].first;
    h1[o.guest[i].second] = o.host[i].second;
    x_used.set(o.host[i].first);
    x_used.set(o.host[i].second);
  }
  {
    auto rest_x = minus(hc.x_side, x_used).members();
    std::size_t k = 0;
    gc.u_side.for_each([&](int u) {
      if (h1[u] < 0) h1[u] = rest_x[k++];
    });
  }
  h2 = h1;
  for (int i = 0; i < o.m; ++i)
    if (is_good[i]) std::swap(h2[o.guest[i].first], h2[o.guest[i].second]);

  auto combine = [&](const std::vector<int>& h, const std::vector<int>& g) {
    std::vector<int> map(n);
    for (int v = 0; v < n; ++v) map[v] = gc.u_side.test(v) ? h[v] : g[v];
    return Embedding(std::move(map));
  };

  const std::int64_t ch1 = red_within(f, gc.u_side, coloring, h1);
  const std::int64_t ch2 = red_within(f, gc.u_side, coloring, h2);
  const std::int64_t diff_h = ch1 - ch2;
  Embedding e1 = combine(h1, best_g), e2 = combine(h2, best_g);
  const std::int64_t c1 = count_color(coloring, f, e1, Color::red);
  const std::int64_t c2 = count_color(coloring, f, e2, Color::red);
  if (c1 - c2 != diff_h + best_z) throw Error("switching identity violated");

  // Case 1 iff diff_h >= -2 sqrt(beta) t
  bool case1 = diff_h >= 0;
  if (!case1) {
    const bool equal_d = std::adjacent_find(dvals.begin(), dvals.end(), std::not_equal_to<>()) == dvals.end();
    if (equal_d && !dvals.empty()) {
      Rational t_sq = Rational(big(o.m) * big(o.m) * big(dvals[0]));
      case1 = Rational(big(diff_h) * big(diff_h)) <= 4 * params.beta * t_sq;
    } else {
      long double t = 0;
      for (auto d : dvals) t += std::sqrt(static_cast<long double>(d));
      long double b = static_cast<long double>(to_double(params.beta));
      case1 = static_cast<long double>(diff_h) * diff_h <= 4 * b * t * t;
    }
  }

  SwitchResult res;
  if (case1) {
    SwitchResult r1 = finish(f, coloring, e1, "switch", "case1");
    SwitchResult r2 = finish(f, coloring, e2, "switch", "case1");
    res = better(r2, r1) ? std::move(r2) : std::move(r1);
  } else {
    bool have = false;
    for (int t = 0; t < params.trials; ++t) {
      auto g = draw(derive(derive(seed, 0xC2), t));
      for (const auto* h : {&h1, &h2}) {
        SwitchResult r = finish(f, coloring, combine(*h, g), "switch", "case2");
        if (!have || better(r, res)) res = std::move(r), have = true;
      }
    }
  }
  res.gap = c1 - c2;
  res.deltas = best_d;
  res.certificate_value = params.beta * gc.value_t_lower();
  res.notes["z"] = std::to_string(best_z);
  res.notes["diff_h"] = std::to_string(diff_h);
  res.notes["pairs"] = std::to_string(o.m);
  res.notes["good_pairs"] = std::to_string(std::count(is_good.begin(), is_good.end(), 1));
  res.notes["identity_checked"] = "true";
  return res;
}

SwitchResult single_pair_switch_embed(const Graph& f, const Coloring& coloring, const Rational& eps,
                                      const Rational& delta) {
  require_same_n(f, coloring);
  const int n = f.n();
  if (n < 2) throw ParameterError("need n >= 2");
  if (eps < 0 || eps > 1) throw ParameterError("eps outside [0, 1]");
  const std::int64_t total = coloring.total_pairs(), red = coloring.red_count();
  if (100 * red < 49 * total || 100 * red > 51 * total)
    throw PreconditionError("red density outside [0.49, 0.51]; use greedy_expectation_embed");
  const int dmax = f.max_degree();
  if (Rational(big(dmax)) < delta * big(n)) throw PreconditionError("max degree below delta n");
  if (Rational(big(dmax)) > (1 - eps) * big(n)) throw PreconditionError("max degree above (1 - eps) n");

  int u = 0;
  for (int v = 1; v < n; ++v)
    if (f.degree(v) > f.degree(u)) u = v;
  int up = -1, best_sym = -1;
  for (int v = 0; v < n; ++v) {
    if (v == u) continue;
    int s = f.neighbors(u).count_xor(f.neighbors(v));
    if (s > best_sym) best_sym = s, up = v;
  }
  if (Rational(big(2 * best_sym)) < eps * big(n))
    throw SearchFailure("no u' with |N(u) xor N(u')| >= eps n / 2; best is " + std::to_string(best_sym));

  auto side = [&](int a, int b) {
    Bitset s = minus(f.neighbors(a), f.neighbors(b));
    s.reset(b);
    return s;
  };
  Bitset v = side(u, up), vp = side(up, u);
  if (v.count() < vp.count()) {
    std::swap(u, up);
    std::swap(v, vp);
  }

  int x = -1, xp = -1;
  Color host = Color::red;
  for (Color c : {Color::red, Color::blue}) {
    Graph g = coloring.graph_of(c);
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return g.degree(a) > g.degree(b); });
    for (int a : order) {
      for (int b = 0; b < n && xp < 0; ++b) {
        if (b == a) continue;
        std::int64_t s = g.neighbors(a).count_andnot(g.neighbors(b));
        std::int64_t t = g.neighbors(b).count_andnot(g.neighbors(a));
        if (100 * s > n && 100 * s < 99 * std::int64_t{n} && 100 * t < 99 * std::int64_t{n}) x = a, xp = b;
      }
      if (xp >= 0) break;
    }
    if (xp >= 0) {
      host = c;
      break;
    }
  }
  if (xp < 0) throw SearchFailure("no x, x' satisfy the 0.01n / 0.99n window in either colour");

  const Graph g = coloring.graph_of(host);
  auto hside = [&](int a, int b) {
    Bitset s = minus(g.neighbors(a), g.neighbors(b));
    s.reset(b);
    return s;
  };
  Bitset hx = hside(x, xp), hxp = hside(xp, x);
  if (hx.count() < hxp.count()) {
    std::swap(x, xp);
    std::swap(hx, hxp);
  }

  Bitset avail = Bitset::full(n);
  avail.reset(x);
  avail.reset(xp);
  const int need = v.count(), need_p = vp.count();
  std::vector<int> nn, nnp;
  auto take = [&](std::vector<int>& dst, int want, const Bitset& from) {
    from.for_each([&](int h) {
      if (static_cast<int>(dst.size()) < want && avail.test(h)) {
        dst.push_back(h);
        avail.reset(h);
      }
    });
  };
  Bitset neutral = minus(minus(Bitset::full(n), hx), hxp);
  take(nn, need, hx);
  take(nnp, need_p, hxp);
  take(nn, need, neutral);
  take(nnp, need_p, neutral);
  take(nn, need, hxp);
  take(nnp, need_p, hx);
  if (static_cast<int>(nn.size()) != need || static_cast<int>(nnp.size()) != need_p)
    throw Error("could not fill N, N'");

  std::vector<int> map(n, -1);
  map[u] = x;
  map[up] = xp;
  {
    auto vm = v.members(), vpm = vp.members();
    for (std::size_t j = 0; j < vm.size(); ++j) map[vm[j]] = nn[j];
    for (std::size_t j = 0; j < vpm.size(); ++j) map[vpm[j]] = nnp[j];
  }
  map = fill_rest(n, std::move(map));
  Embedding e1(map);
  std::swap(map[u], map[up]);
  Embedding e2(map);

  auto in = [](const std::vector<int>& s, const Bitset& b) {
    std::int64_t c = 0;
    for (int h : s) c += b.test(h);
    return c;
  };
  const std::int64_t predicted = in(nn, hx) + in(nnp, hxp) - in(nn, hxp) - in(nnp, hx);
  const std::int64_t gap = count_color(coloring, f, e1, host) - count_color(coloring, f, e2, host);
  if (gap != predicted) throw Error("single-pair switching identity violated");

  SwitchResult r1 = finish(f, coloring, e1, "single-pair", "case1");
  SwitchResult r2 = finish(f, coloring, e2, "single-pair", "case1");
  SwitchResult res = better(r2, r1) ? std::move(r2) : std::move(r1);
  res.gap = gap;
  res.certificate_value = eps * big(n) / 5;
  res.notes["u"] = std::to_string(u);
  res.notes["u_prime"] = std::to_string(up);
  res.notes["x"] = std::to_string(x);
  res.notes["x_prime"] = std::to_string(xp);
  res.notes["host_color"] = name(host);
  res.notes["sym_u"] = std::to_string(best_sym);
  res.notes["bound_met"] = Rational(big(5 * std::abs(gap))) >= eps * big(n) ? "true" : "false";
  return res;
}

Bitset greedy_independent_set(const Graph& f) {
  Bitset a(f.n()), blocked(f.n());
  for (int v = 0; v < f.n(); ++v) {
    if (blocked.test(v)) continue;
    a.set(v);
    blocked |= f.neighbors(v);
    blocked.set(v);
  }
  return a;
}

SwitchResult greedy_switch_embed(const Graph& f, const Coloring& coloring, const HostCertificate& hc,
                                 const Rational& delta) {
  require_same_n(f, coloring);
  const int n = f.n();
  if (std::string bad = host_certificate_violation(coloring, hc); !bad.empty())
    throw CertificateError("host certificate invalid: " + bad);
  if (delta <= 0) throw ParameterError("delta must be positive");
  if (Rational(big(f.max_degree())) > delta * big(n)) throw PreconditionError("max degree above delta n");
  const Bitset a = greedy_independent_set(f);
  const int as = a.count();
  if (2 * as > n) throw PreconditionError("greedy independent set exceeds n/2; use the independent-guest path");

  Bitset b(n);
  for (int v = 0; v < n; ++v)
    if (!a.test(v) && 5 * (f.neighbors(v).count_and(a)) <= as) b.set(v);

  const Rational delta_n = delta * big(n);
  const int cap = static_cast<int>(hc.pairs.size());
  std::vector<std::pair<int, int>> pairs;
  std::vector<Bitset> w_sets;
  Bitset covered(n), used_a(n);
  std::int64_t mass = 0, wb_total = 0;
  while (Rational(big(mass)) < delta_n && static_cast<int>(pairs.size()) < cap) {
    int bu = -1, bup = -1;
    std::int64_t best_v = -1, best_wb = 0;
    auto free_a = minus(a, used_a).members();
    for (int p : free_a)
      for (int q : free_a) {
        if (p == q) continue;
        Bitset w = minus(f.neighbors(p) | f.neighbors(q), covered);
        std::int64_t wb = w.count_and(b);
        std::int64_t vb = minus(w, f.neighbors(q)).count_and(b);
        if (3 * vb < wb || 5 * wb * as < n) continue;
        if (Rational(big(wb_total + wb)) > 5 * delta_n) continue;
        std::int64_t vi = w.count_andnot(f.neighbors(q));
        if (vi > best_v) best_v = vi, bu = p, bup = q, best_wb = wb;
      }
    if (bu < 0) {
      throw SearchFailure("switching-pair extraction stalled: mass " + std::to_string(mass) + " < delta n with " +
                          std::to_string(pairs.size()) + " pairs, |A| = " + std::to_string(as) +
                          ", |B| = " + std::to_string(b.count()) + ", covered B = " + std::to_string(wb_total));
    }
    Bitset w = minus(f.neighbors(bu) | f.neighbors(bup), covered);
    pairs.emplace_back(bu, bup);
    used_a.set(bu);
    used_a.set(bup);
    covered |= w;
    w_sets.push_back(w);
    mass += best_v;
    wb_total += best_wb;
  }
  const int m = static_cast<int>(pairs.size());

  const Graph& g = coloring.red();
  std::vector<std::pair<int, int>> hosts;
  Bitset used(n);
  for (int i = 0; i < m; ++i) {
    auto [x, xp] = hc.pairs[i];
    if (g.neighbors(x).count_andnot(g.neighbors(xp)) < g.neighbors(xp).count_andnot(g.neighbors(x))) std::swap(x, xp);
    hosts.emplace_back(x, xp);
    used.set(x);
    used.set(xp);
  }

  std::vector<int> img(n, -1);
  std::vector<std::int64_t> deltas(m), vsize(m);
  auto place = [&](const std::vector<int>& guests, const Bitset& region) {
    std::size_t k = 0;
    region.for_each([&](int h) {
      if (k < guests.size() && !used.test(h)) {
        img[guests[k++]] = h;
        used.set(h);
      }
    });
    if (k < guests.size()) throw CapacityError("host region capacity exhausted");
  };
  auto score = [&](int i) {
    auto [u, up] = pairs[i];
    auto [x, xp] = hosts[i];
    std::int64_t s = 0;
    f.neighbors(u).for_each([&](int z) {
      if (img[z] >= 0) s += int(g.has_edge(img[z], x)) - int(g.has_edge(img[z], xp));
    });
    f.neighbors(up).for_each([&](int z) {
      if (img[z] >= 0) s += int(g.has_edge(img[z], xp)) - int(g.has_edge(img[z], x));
    });
    return s;
  };
  for (int i = 0; i < m; ++i) {
    auto [u, up] = pairs[i];
    auto [x, xp] = hosts[i];
    const std::int64_t s = score(i);
    Bitset vi = minus(w_sets[i], f.neighbors(up)), vpi = minus(w_sets[i], f.neighbors(u));
    vsize[i] = vi.count();
    Bitset r1 = minus(g.neighbors(x), g.neighbors(xp));
    Bitset r0 = (g.neighbors(x) ^ g.neighbors(xp)).complement();
    if (2 * s <= -vsize[i]) {
      place(vi.members(), r0);
      place(vpi.members(), r0);
    } else {
      place(vi.members(), r1);
      place(vpi.members(), r0);
    }
    place(minus(minus(w_sets[i], vi), vpi).members(), Bitset::full(n));
    deltas[i] = score(i);
    if (2 * std::abs(deltas[i]) < vsize[i]) throw Error("greedy placement left |D_i| < |V_i| / 2");
  }

  std::vector<int> map(n, -1);
  for (int v = 0; v < n; ++v)
    if (img[v] >= 0) map[v] = img[v];
  for (int i = 0; i < m; ++i) {
    map[pairs[i].first] = hosts[i].first;
    map[pairs[i].second] = hosts[i].second;
  }
  map = fill_rest(n, std::move(map));
  Embedding e1(map);

  std::int64_t sum_i = 0, sum_j = 0, total_v = 0;
  for (int i = 0; i < m; ++i) {
    (2 * deltas[i] >= vsize[i] ? sum_i : sum_j) += deltas[i];
    total_v += vsize[i];
  }
  const bool use_i = sum_i >= -sum_j;
  std::int64_t predicted = 0;
  for (int i = 0; i < m; ++i) {
    if ((2 * deltas[i] >= vsize[i]) != use_i) continue;
    std::swap(map[pairs[i].first], map[pairs[i].second]);
    predicted += deltas[i];
  }
  Embedding e2(map);
  const std::int64_t gap = count_color(coloring, f, e1, Color::red) - count_color(coloring, f, e2, Color::red);
  if (gap != predicted) throw Error("greedy switching identity violated");
  if (4 * std::abs(gap) < total_v) throw Error("switched gain below a quarter of the V_i mass");

  SwitchResult r1 = finish(f, coloring, e1, "greedy-switch", "case2.2");
  SwitchResult r2 = finish(f, coloring, e2, "greedy-switch", "case2.2");
  SwitchResult res = better(r2, r1) ? std::move(r2) : std::move(r1);
  res.gap = gap;
  res.deltas = deltas;
  res.certificate_value = rat(total_v, 4);
  res.notes["pairs"] = std::to_string(m);
  res.notes["v_mass"] = std::to_string(total_v);
  res.notes["mass_reached"] = Rational(big(mass)) >= delta_n ? "true" : "false";
  res.notes["switched"] = use_i ? "I" : "J";
  res.notes["independent_set"] = std::to_string(as);
  return res;
}

SwitchResult embed_bounded_degree(const Graph& f, const Coloring& coloring, const Rational& eps, Seed seed,
                                  const SwitchParams& params) {
  require_same_n(f, coloring);
  const int n = f.n();
  if (eps <= 0 || eps > 1) throw ParameterError("eps outside (0, 1]");
  for (int v = 0; v < n; ++v)
    if (f.degree(v) == 0) throw PreconditionError("guest has an isolated vertex");
  if (Rational(big(f.max_degree())) > (1 - eps) * big(n)) throw PreconditionError("max degree above (1 - eps) n");

  std::vector<SwitchResult> cands;
  std::map<std::string, std::string> log;
  attempt(cands, log, "expectation", [&] { return expectation_branch(f, coloring); });
  if (Rational(big(f.max_degree())) >= params.delta * big(n))
    attempt(cands, log, "single-pair", [&] { return single_pair_switch_embed(f, coloring, eps, params.delta); });
  if (n >= 4) attempt(cands, log, "cut", [&] { return cut_branch(f, coloring, seed, params); });
  if (n >= 40) {
    HostCertifyResult host = certify_host(coloring, params.beta, derive(seed, 1), params.host_attempts);
    if (host.certificate) {
      Bitset a = greedy_independent_set(f);
      if (a.count() >= n / 2) {
        attempt(cands, log, "switch", [&] {
          auto gi = certify_guest_independent(f, a);
          SwitchResult r = main_switch_embed(f, gi.certificate, coloring, *host.certificate, params, derive(seed, 2));
          if (!gi.complete) r.notes["guest_diagnostic"] = gi.diagnostic;
          return r;
        });
      } else {
        attempt(cands, log, "greedy-switch",
                [&] { return greedy_switch_embed(f, coloring, *host.certificate, params.delta); });
      }
    } else {
      log["host"] = "not certified: " + host.failure;
    }
  }
  return pick_best(cands, log);
}

namespace {

SwitchResult regular_core(const Graph& f, const Coloring& coloring, Seed seed, const SwitchParams& params,
                          std::map<std::string, std::string>& log, const std::string& prefix) {
  const int n = f.n();
  std::vector<SwitchResult> cands;
  attempt(cands, log, prefix + "expectation", [&] { return expectation_branch(f, coloring); });
  if (n >= 4) attempt(cands, log, prefix + "cut", [&] { return cut_branch(f, coloring, seed, params); });
  if (n >= 100 && f.regular_degree() >= 1) {
    attempt(cands, log, prefix + "switch", [&] {
      HostCertifyResult host = certify_host(coloring, params.beta, derive(seed, 1), params.host_attempts);
      if (!host.certificate) throw SearchFailure("host not certified: " + host.failure);
      GuestCertificate gc = certify_guest_regular(f, derive(seed, 3), params.retries);
      return main_switch_embed(f, gc, coloring, *host.certificate, params, derive(seed, 2));
    });
  }
  if (cands.empty()) throw SearchFailure("no strategy produced an embedding");
  std::size_t best = 0;
  for (std::size_t i = 1; i < cands.size(); ++i)
    if (better(cands[i], cands[best])) best = i;
  return std::move(cands[best]);
}

}  // namespace

SwitchResult embed_regular(const Graph& f, const Coloring& coloring, const Rational& eps, Seed seed,
                           const SwitchParams& params) {
  require_same_n(f, coloring);
  const int n = f.n();
  if (eps <= 0 || eps > 1) throw ParameterError("eps outside (0, 1]");
  const int d = f.regular_degree();
  if (d < 0) throw PreconditionError("guest is not regular");
  if (Rational(big(d)) > (1 - eps) * big(n)) throw PreconditionError("d > (1 - eps) n");

  std::map<std::string, std::string> log;
  if (2 * d <= n) {
    SwitchResult r = regular_core(f, coloring, seed, params, log, "");
    for (auto& [k, v] : log) r.notes["attempt:" + k] = v;
    r.notes["branch"] = "direct";
    return r;
  }
  // the same bijection carries the complement guest's copy to F's copy
  Graph fc = f.complement();
  SwitchResult inner = regular_core(fc, coloring, seed, params, log, "complement-");
  std::vector<SwitchResult> cands;
  SwitchResult comp = finish(f, coloring, inner.embedding, "complement-" + inner.strategy, inner.case_taken);
  comp.notes = inner.notes;
  comp.notes["complement_discrepancy"] = std::to_string(inner.report.discrepancy);
  log["complement"] = std::to_string(comp.report.discrepancy);
  cands.push_back(std::move(comp));
  attempt(cands, log, "expectation", [&] { return expectation_branch(f, coloring); });
  SwitchResult r = pick_best(cands, log);
  r.notes["branch"] = "complement";
  return r;
}

Json guest_certificate_json(const GuestCertificate& gc) {
  Json pairs = Json::array();
  for (auto [a, b] : gc.pairs) pairs.push_back({a, b});
  return Json{{"u_side", gc.u_side.members()},
              {"pairs", pairs},
              {"d_values", gc.d_values},
              {"u_independent", gc.u_independent},
              {"value_t", gc.value_t()}};
}

Json host_certificate_json(const HostCertificate& hc) {
  Json pairs = Json::array();
  for (auto [a, b] : hc.pairs) pairs.push_back({a, b});
  return Json{{"x_side", hc.x_side.members()}, {"pairs", pairs}, {"beta", rational_json(hc.beta)}};
}

SwitchResult expectation_strategy(const Graph& f, const Coloring& coloring) {
  require_same_n(f, coloring);
  return expectation_branch(f, coloring);
}

SwitchResult cut_strategy(const Graph& f, const Coloring& coloring, Seed seed, const SwitchParams& params) {
  require_same_n(f, coloring);
  return cut_branch(f, coloring, seed, params);
}

Json switch_result_json(const SwitchResult& r) {
  return Json{{"embedding", embedding_json(r.embedding)},
              {"report", report_json(r.report)},
              {"strategy", r.strategy},
              {"case", r.case_taken},
              {"certificate_value", rational_json(r.certificate_value)},
              {"gap", r.gap},
              {"deltas", r.deltas},
              {"notes", r.notes}};
}

}  // namespace disc
