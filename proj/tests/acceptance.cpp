// Acceptance suite: one PASS/FAIL line per criterion.
// Usage: acceptance [path-to-disc]

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "disc/bisect.hpp"
#include "disc/cli.hpp"
#include "disc/cutembed.hpp"
#include "disc/error.hpp"
#include "disc/factors.hpp"
#include "disc/generators.hpp"
#include "disc/oracle.hpp"
#include "disc/probkit.hpp"
#include "disc/switchembed.hpp"

using namespace disc;

namespace {

struct Outcome {
  bool pass = true;
  std::vector<std::string> notes;
  void fail(const std::string& why) {
    if (pass || notes.size() < 8) notes.push_back("FAIL " + why);
    pass = false;
  }
  void note(const std::string& s) { notes.push_back(s); }
  void expect(bool ok, const std::string& why) {
    if (!ok) fail(why);
  }
};

std::string disc_path;

std::string run_command(const std::string& cmd) {
  std::string out;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return out;
  char buf[512];
  while (std::fgets(buf, sizeof buf, p)) out += buf;
  pclose(p);
  return out;
}

std::int64_t c2(std::int64_t k) { return k * (k - 1) / 2; }

// Largest red and blue counts over every bijection, by plain permutation scan.
std::pair<std::int64_t, std::int64_t> scan_best(const Graph& f, const Coloring& c) {
  std::vector<int> p(f.n());
  std::iota(p.begin(), p.end(), 0);
  auto edges = f.edges();
  std::int64_t br = 0, bb = 0;
  do {
    std::int64_t r = 0;
    for (auto [u, v] : edges) r += c.is_red(p[u], p[v]);
    br = std::max(br, r);
    bb = std::max(bb, std::int64_t(edges.size()) - r);
  } while (std::next_permutation(p.begin(), p.end()));
  return {br, bb};
}

std::string s(std::int64_t v) { return std::to_string(v); }

// 1 ------------------------------------------------------------------------
void lambda_table(Outcome& o) {
  const std::vector<Rational> rho{rat(1, 3), rat(1, 3), rat(5, 14), rat(9, 25), rat(4, 11)};
  const std::vector<Rational> lam{rat(1, 3), rat(2, 3), rat(27, 28), rat(32, 25), rat(35, 22)};
  std::string expected = "k,rho,lambda,interval\n";
  for (int k = 2; k <= 6; ++k) {
    RhoLambda r = solve_rho_lambda(k);
    o.expect(r.rho == rho[k - 2], "rho_" + s(k) + " = " + to_string(r.rho));
    o.expect(r.lambda == lam[k - 2], "lambda_" + s(k) + " = " + to_string(r.lambda));
    expected += s(k) + "," + to_string(rho[k - 2]) + "," + to_string(lam[k - 2]) + "," + s(r.interval) + "\n";
  }
  if (!disc_path.empty()) {
    std::string got = run_command(disc_path + " lambda --k 2..6 --csv");
    o.expect(got == expected, "disc lambda output:\n" + got);
    o.note("disc lambda --k 2..6 checked");
  }
}

// 2 ------------------------------------------------------------------------
void kk_bipartite_optima(Outcome& o) {
  int instances = 0;
  for (int k : {2, 3, 4})
    for (int n = k; n <= 12; n += k)
      for (int x = 0; x <= n; ++x) {
        Rational rho = rat(x, n);
        OracleFactor best = oracle_best_factor(bipartite_construction(n, rho), k);
        KkFactor r = opt_kk_factor_bipartite(n, k, rho, Color::red);
        KkFactor b = opt_kk_factor_bipartite(n, k, rho, Color::blue);
        std::string at = "n=" + s(n) + " k=" + s(k) + " rho=" + to_string(rho);
        o.expect(r.red_count == best.best_red, at + " red " + s(r.red_count) + " vs " + s(best.best_red));
        o.expect(b.blue_count == best.best_blue, at + " blue " + s(b.blue_count) + " vs " + s(best.best_blue));
        ++instances;
      }
  o.note(s(instances) + " (n, k, rho) instances");
}

// 3 ------------------------------------------------------------------------
void two_cliques_factors(Outcome& o) {
  int instances = 0;
  for (int m = 2; m <= 4; ++m)
    for (int k : {2, m}) {
      if (m % k) continue;
      Coloring host = two_cliques_coloring(m, true);
      OracleFactor best = oracle_best_factor(host, k);
      KkFactor r = kk_factor_two_cliques(m, k, Color::red);
      KkFactor b = kk_factor_two_cliques(m, k, Color::blue);
      std::string at = "m=" + s(m) + " k=" + s(k);
      const std::int64_t red_formula = 2 * m / k * c2(k), blue_formula = 2 * m / k * ((k + 1) / 2) * (k / 2);
      o.expect(r.red_count == red_formula, at + " red formula");
      o.expect(b.blue_count == blue_formula, at + " blue formula");
      o.expect(r.red_count == best.best_red, at + " red oracle");
      o.expect(b.blue_count == best.best_blue, at + " blue oracle");
      o.expect(make_kk_factor(host, k, r.blocks).red_count == r.red_count, at + " red recount");
      o.expect(make_kk_factor(host, k, b.blocks).blue_count == b.blue_count, at + " blue recount");
      ++instances;
    }
  o.note(s(instances) + " (m, k) pairs; m = 1 has no k >= 2 dividing m");
}

// 4 ------------------------------------------------------------------------
void expectation_embedding(Outcome& o) {
  Rng rng(Seed{404});
  for (int t = 0; t < 1000; ++t) {
    int n = 2 + static_cast<int>(rng.below(39));
    std::int64_t fp = 1 + rng.below(7), cp = rng.below(9);
    Graph f = random_graph(n, fp, 8, derive(Seed{4}, 2 * t));
    Coloring c = random_coloring(n, cp, 8, derive(Seed{4}, 2 * t + 1));
    Color target = t % 2 ? Color::red : Color::blue;
    Embedding e = greedy_expectation_embed(f, c, target);
    std::int64_t got = count_color(c, f, e, target);
    Rational guarantee = rat(c.count(target) * f.edge_count(), std::max<std::int64_t>(1, c.total_pairs()));
    o.expect(Rational(big(got)) >= Rational(ceil(guarantee)), "instance " + s(t) + " below ceil(p e(F))");
  }
  int averaged = 0;
  for (int n = 2; n <= 7; ++n)
    for (int rep = 0; rep < 4; ++rep) {
      Graph f = random_graph(n, 1, 2, derive(Seed{41}, 10 * n + rep));
      Coloring c = random_coloring(n, 1, 2, derive(Seed{42}, 10 * n + rep));
      std::vector<int> p(n);
      std::iota(p.begin(), p.end(), 0);
      BigInt total = 0, perms = 0;
      auto edges = f.edges();
      do {
        for (auto [u, v] : edges) total += c.is_red(p[u], p[v]) ? 1 : 0;
        perms += 1;
      } while (std::next_permutation(p.begin(), p.end()));
      Rational avg = rat(total, perms);
      Rational want = rat(c.red_count() * f.edge_count(), c.total_pairs());
      o.expect(avg == want, "average at n=" + s(n) + ": " + to_string(avg) + " vs " + to_string(want));
      ++averaged;
    }
  o.note("1000 greedy instances, " + s(averaged) + " full permutation averages");
}

// 5 ------------------------------------------------------------------------
void bisection_bounds(Outcome& o) {
  Rng rng(Seed{505});
  for (int t = 0; t < 200; ++t) {
    int n = 4 + static_cast<int>(rng.below(17));
    Graph g = random_graph(n, 1 + rng.below(5), 8, derive(Seed{5}, t));
    for (int v = 0; v < n; ++v)
      if (g.degree(v) == 0) g.add_edge(v, (v + 1) % n);
    Bisection b = exhaustive_extremal_bisection(g, Direction::max);
    Rational bound = rat(g.edge_count(), 2) + std::min(rat(n, 6), rat(n + 1 - g.max_degree(), 4));
    o.expect(Rational(big(b.cut_size)) >= bound, "graph " + s(t) + " max bisection below the bound");
  }
  int regular = 0;
  for (int t = 0; regular < 100; ++t) {
    int n = 6 + static_cast<int>(rng.below(15));
    int d = 2 + static_cast<int>(rng.below(std::max(1, n - 3)));
    if ((n * d) % 2 || d >= n - 1) continue;
    Graph g = random_regular_graph(n, d, derive(Seed{55}, t));
    Bisection bmax = exhaustive_extremal_bisection(g, Direction::max);
    Bisection bmin = exhaustive_extremal_bisection(g, Direction::min);
    Rational dev = std::max(abs(bmax.deviation), abs(bmin.deviation));
    DiscPM pm = disc_pm(g);
    o.expect(pm.exact, "disc_pm not exact at n=" + s(n));
    Rational third = std::max(pm.disc_plus, pm.disc_minus) / 3;
    o.expect(dev >= third, "regular n=" + s(n) + " d=" + s(d) + " deviation below disc/3");
    ++regular;
  }
  o.note("200 general graphs, 100 regular graphs");
}

// 6 ------------------------------------------------------------------------
void switching_identity(Outcome& o) {
  SwitchParams p;
  int runs = 0, case1 = 0, attempts = 0;
  for (std::uint64_t sd = 0; runs < 200 && attempts < 1000; ++sd, ++attempts) {
    Rng rng(derive(Seed{6}, sd));
    int n = 100 + 2 * static_cast<int>(rng.below(50));
    int d = 2 + 2 * static_cast<int>(rng.below(4));
    Graph f = random_regular_graph(n, d, derive(Seed{61}, sd));
    Coloring c = sd % 3 ? random_coloring(n, 1, 2, derive(Seed{62}, sd)) : bipartite_construction(n, 1, 2);
    HostCertifyResult host = certify_host(c, p.beta, derive(Seed{63}, sd));
    if (!host.certificate) continue;
    GuestCertificate gc;
    try {
      gc = certify_guest_regular(f, derive(Seed{64}, sd));
    } catch (const SearchFailure&) {
      continue;
    }
    if (gc.pairs.empty()) continue;
    SwitchResult r;
    try {
      r = main_switch_embed(f, gc, c, *host.certificate, p, derive(Seed{65}, sd));
    } catch (const Error& e) {
      o.fail(std::string("run ") + s(sd) + ": " + e.what());
      continue;
    }
    ++runs;
    // z is the sum of D_i over pairs with D_i >= 0.1 rho sqrt(d_i)
    std::int64_t z = 0;
    const BigInt rn = p.rho.get_num(), rd = p.rho.get_den();
    for (std::size_t i = 0; i < r.deltas.size(); ++i) {
      std::int64_t dl = r.deltas[i];
      if (dl >= 0 && big(100) * big(dl) * big(dl) * rd * rd >= rn * rn * big(gc.d_values[i])) z += dl;
    }
    std::int64_t diff_h = std::stoll(r.notes.at("diff_h"));
    o.expect(std::stoll(r.notes.at("z")) == z, "run " + s(sd) + " reported z differs from the good-pair sum");
    o.expect(r.gap == diff_h + z, "run " + s(sd) + " gap != U-internal gap + sum D_i");
    o.expect(r.report == discrepancy(c, f, r.embedding), "run " + s(sd) + " recount");
    if (r.case_taken == "case1") ++case1;
  }
  o.expect(runs >= 200, "only " + s(runs) + " certified runs");
  o.note(s(runs) + " runs, " + s(case1) + " in case 1");
}

// 7 ------------------------------------------------------------------------
void oracle_dominance(Outcome& o) {
  const int n = 8;
  Config config;
  std::map<std::string, int> applied;
  for (std::uint64_t t = 0; t < 200; ++t) {
    Seed sd = derive(Seed{7}, t);
    Graph f;
    switch (t % 4) {
      case 0: f = random_regular_graph(n, 2 + 2 * static_cast<int>(t % 3) / 2, derive(sd, 1)); break;
      case 1: f = random_regular_graph(n, 3, derive(sd, 1)); break;
      default: f = random_graph(n, 1 + t % 5, 6, derive(sd, 1)); break;
    }
    Coloring c = t % 5 == 0 ? bipartite_construction(n, rat(1 + t % 3, 4)) : random_coloring(n, 1 + t % 3, 4, derive(sd, 2));
    OracleDisc best = oracle_max_disc(f, c);
    auto [red_scan, blue_scan] = scan_best(f, c);
    o.expect(best.best_red == red_scan && best.best_blue == blue_scan, "oracle vs scan at instance " + s(t));
    std::string at = "instance " + s(t);

    auto judge = [&](const std::string& name, const SwitchResult& r) {
      ++applied[name];
      o.expect(r.report == discrepancy(c, f, r.embedding), at + " " + name + " recount");
      o.expect(r.report.discrepancy <= best.report.discrepancy, at + " " + name + " above oracle");
    };
    for (const char* strat : {"random", "cut", "auto", "single-pair", "switch", "greedy-switch"}) {
      try {
        judge(strat, run_embed_strategy(strat, f, c, rat(1, 10), derive(sd, 3), config));
      } catch (const Error&) {
      }
    }
    try {
      judge("bounded-degree", embed_bounded_degree(f, c, rat(1, 10), derive(sd, 4)));
    } catch (const Error&) {
    }
    try {
      judge("regular", embed_regular(f, c, rat(1, 10), derive(sd, 5)));
    } catch (const Error&) {
    }
    {
      Bisection fb = exhaustive_extremal_bisection(f, Direction::max);
      Bisection gb = exhaustive_extremal_bisection(c.red(), t % 2 ? Direction::max : Direction::min);
      CutEmbedResult r = cut_embed(f, fb, c, gb, derive(sd, 6));
      ++applied["cut_embed"];
      o.expect(r.report == discrepancy(c, f, r.embedding), at + " cut_embed recount");
      o.expect(r.report.discrepancy <= best.report.discrepancy, at + " cut_embed above oracle");
    }
    for (int k : {2, 4}) {
      KkDriverResult r = kk_factor_driver(c, k, rat(1, 10), derive(sd, 7));
      OracleFactor ob = oracle_best_factor(c, k);
      ++applied["kk_driver"];
      o.expect(make_kk_factor(c, k, r.factor.blocks).count(r.color) == r.count, at + " K_k driver recount");
      o.expect(r.count <= (r.color == Color::red ? ob.best_red : ob.best_blue), at + " K_k driver above oracle");
    }
    {
      TwoFactor shape = two_factor_from_lengths(t % 2 ? std::vector<int>{3, 5} : std::vector<int>{8});
      TwoFactorDriverResult r = two_factor_driver(c, shape, rat(1, 2), derive(sd, 8));
      OracleTwoFactor ob = oracle_best_factor(c, shape);
      ++applied["two_factor_driver"];
      o.expect(count_color(c, shape.graph(), r.embedding, r.color) == r.count, at + " 2-factor driver recount");
      o.expect(r.report == discrepancy(c, shape.graph(), r.embedding), at + " 2-factor driver report");
      o.expect(r.count <= (r.color == Color::red ? ob.best_red : ob.best_blue), at + " 2-factor driver above oracle");
    }
  }
  std::string summary = "applied:";
  for (const auto& [k, v] : applied) summary += " " + k + "=" + s(v);
  o.note(summary);
}

// 8 ------------------------------------------------------------------------
void anticoncentration_sweep(Outcome& o) {
  std::vector<std::int64_t> ks;
  for (std::int64_t k = 100; k <= 1000; k += 100) ks.push_back(k);
  for (const Rational& eta : {rat(1, 10), rat(1, 4), rat(1, 2)}) {
    std::vector<Rational> ps{rat(1, 2)};
    if (eta != rat(1, 2)) ps.push_back(eta);
    for (const Rational& p : ps) {
      std::string at = "eta=" + to_string(eta) + " p=" + to_string(p);
      BoundCheck a = check_anticoncentration(eta, p, ks);
      BoundCheck t = check_tails(eta, p, ks);
      o.expect(a.squared, at + " pointwise comparison not squared");
      o.expect(a.holds, at + " pointwise bound fails");
      o.expect(t.holds, at + " tail bound fails");
      auto k0 = [](const BoundCheck& b) { return b.k0 ? s(*b.k0) : std::string("none"); };
      char margin[64];
      std::snprintf(margin, sizeof margin, " margins %.3f / %.3f", a.margin, t.margin);
      o.note(at + ": k0 pointwise " + k0(a) + ", tails " + k0(t) + margin);
    }
  }
}

// 9 ------------------------------------------------------------------------
void two_factor_extremality(Outcome& o) {
  for (int n : {6, 9}) {
    Coloring host = bipartite_construction(n, 1, 3);
    int shapes = 0;
    for (const auto& lengths : two_factor_shapes(n)) {
      OracleTwoFactor r = oracle_best_factor(host, two_factor_from_lengths(lengths));
      o.expect(r.best_red <= 2 * n / 3 && r.best_blue <= 2 * n / 3, "n=" + s(n) + " shape above 2n/3");
      ++shapes;
    }
    o.note("n=" + s(n) + ": " + s(shapes) + " shapes");
  }
  for (int k = 1; k <= 3; ++k) {
    Coloring bh = bipartite_construction(3 * k, 1, 3);
    for (const auto& lengths : two_factor_shapes(3 * k)) {
      TwoFactor f = two_factor_from_lengths(lengths);
      auto r = embed_2factor_bipartite(f, Color::red);
      auto b = embed_2factor_bipartite(f, Color::blue);
      o.expect(count_color(bh, f.graph(), r.embedding, Color::red) == 2 * k, "bipartite red != 2k");
      o.expect(count_color(bh, f.graph(), b.embedding, Color::blue) >= 2 * k - 1, "bipartite blue < 2k-1");
      o.expect(r.count == count_color(bh, f.graph(), r.embedding, Color::red), "bipartite red recount");
      o.expect(b.count == count_color(bh, f.graph(), b.embedding, Color::blue), "bipartite blue recount");
    }
    Coloring ch = two_cliques_coloring(2 * k, true);
    for (const auto& lengths : two_factor_shapes(4 * k)) {
      TwoFactor f = two_factor_from_lengths(lengths);
      auto r = embed_2factor_two_cliques(f, Color::red);
      auto b = embed_2factor_two_cliques(f, Color::blue);
      std::int64_t rc = count_color(ch, f.graph(), r.embedding, Color::red);
      std::int64_t bc = count_color(ch, f.graph(), b.embedding, Color::blue);
      o.expect(rc >= 4 * k - 2, "two cliques red < 4k-2");
      o.expect(3 * bc >= 8 * k, "two cliques blue < ceil(8k/3)");
      o.expect(r.count == rc && b.count == bc, "two cliques recount");
    }
  }
}

// 10 -----------------------------------------------------------------------
void probabilistic_suite(Outcome& o) {
  std::int64_t combos = 0;
  for (int n = 1; n <= 12; ++n)
    for (int k = 1; k <= n; ++k)
      for (int p = 0; p <= n; ++p)
        for (int q = 0; p + q <= n; ++q) {
          Bitset bp(n), bq(n);
          for (int v = 0; v < p; ++v) bp.set(v);
          for (int v = p; v < p + q; ++v) bq.set(v);
          BoundCheck b = check_coupling(n, k, bp, bq);
          o.expect(b.holds, "coupling n=" + s(n) + " k=" + s(k) + " |P|=" + s(p) + " |Q|=" + s(q));
          ++combos;
        }
  o.note(s(combos) + " coupling combinations");
  o.expect(check_binomial_fact(2000).holds, "binomial fact");
  BoundCheck m = mc_random_matching(1000, 500, 200, rat(1, 2), 100'000, Seed{10});
  o.expect(m.holds && m.estimate + 3 * m.sigma >= 5.0 / 6.0, "random matching gate");
  SqrtDeviationEstimate e = mc_sqrt_deviation(2000, 1000, 500, 400, 200, rat(1, 2), 100'000, Seed{11});
  o.expect(e.positive && e.rho_lo > 0, "sqrt deviation gate");
  char buf[160];
  std::snprintf(buf, sizeof buf, "matching estimate %.4f (sigma %.4f); sqrt deviation rho %.3f [%.3f, %.3f]",
                m.estimate, m.sigma, e.rho_hat, e.rho_lo, e.rho_hi);
  o.note(buf);
}

struct Criterion {
  int id;
  std::string title;
  double budget_s;
  std::function<void(Outcome&)> run;
};

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1) disc_path = argv[1];
  const std::vector<Criterion> all{
      {1, "lambda/rho table", 1, lambda_table},
      {2, "K_k-factor optima in the bipartite construction", 300, kk_bipartite_optima},
      {3, "two-cliques factors", 60, two_cliques_factors},
      {4, "expectation embedding", 300, expectation_embedding},
      {5, "bisection bounds", 600, bisection_bounds},
      {6, "switching identity", 900, switching_identity},
      {7, "oracle dominance", 900, oracle_dominance},
      {8, "anticoncentration sweep", 600, anticoncentration_sweep},
      {9, "2-factor extremality", 600, two_factor_extremality},
      {10, "probabilistic lemma suite", 900, probabilistic_suite},
  };
  int failed = 0;
  for (const auto& c : all) {
    Outcome o;
    auto t0 = std::chrono::steady_clock::now();
    try {
      c.run(o);
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > c.budget_s) o.fail("time " + std::to_string(secs) + "s over budget");
    char head[160];
    std::snprintf(head, sizeof head, "criterion %2d: %s  %s (%.2fs)", c.id, o.pass ? "PASS" : "FAIL", c.title.c_str(),
                  secs);
    std::cout << head << "\n";
    for (const auto& n : o.notes) std::cout << "    " << n << "\n";
    std::cout.flush();
    failed += !o.pass;
  }
  std::cout << (failed ? "acceptance: " + std::to_string(failed) + " criteria failed" : "acceptance: all criteria pass")
            << "\n";
  return failed ? 1 : 0;
}
