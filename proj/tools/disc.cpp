#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "disc/bisect.hpp"
#include "disc/cli.hpp"
#include "disc/error.hpp"
#include "disc/factors.hpp"
#include "disc/generators.hpp"
#include "disc/io.hpp"
#include "disc/oracle.hpp"
#include "disc/probkit.hpp"

using namespace disc;

namespace {

struct Globals {
  std::optional<std::uint64_t> seed;
  bool json = false;
  std::string config_path;
  int threads = 0;
};

Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot open '" + path + "'");
  return Json::parse(in);
}

bool looks_like_json(const std::string& path) {
  std::ifstream in(path);
  char ch = 0;
  while (in.get(ch) && std::isspace(static_cast<unsigned char>(ch))) {
  }
  return ch == '{' || ch == '[';
}

Graph read_graph(const std::string& path) {
  return looks_like_json(path) ? graph_from_json(read_json(path)) : load_graph(path);
}

Coloring read_coloring(const std::string& path) {
  return looks_like_json(path) ? coloring_from_json(read_json(path)) : load_coloring(path);
}

TwoFactor read_two_factor(const std::string& path) {
  return looks_like_json(path) ? two_factor_from_json(read_json(path)) : two_factor_from_graph(load_graph(path));
}

// "key=value;key=value"
std::map<std::string, std::string> parse_params(const std::string& text) {
  std::map<std::string, std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ';')) {
    if (item.empty()) continue;
    auto eq = item.find('=');
    if (eq == std::string::npos) throw ParameterError("parameter '" + item + "' lacks '='");
    out[item.substr(0, eq)] = item.substr(eq + 1);
  }
  return out;
}

std::string take(std::map<std::string, std::string>& p, const std::string& key, const std::string& fallback) {
  auto it = p.find(key);
  if (it == p.end()) return fallback;
  std::string v = it->second;
  p.erase(it);
  return v;
}

std::int64_t to_i64(const std::string& s) { return to_int64(BigInt(s, 10)); }

Bitset range_set(int n, int from, int to) {
  Bitset b(n);
  for (int v = from; v < to; ++v) b.set(v);
  return b;
}

void print_json(const Json& j) { std::cout << j.dump(2) << "\n"; }

void print_report(const DiscrepancyReport& r) {
  std::cout << "red " << r.mono_plus << "\nblue " << r.mono_minus << "\ndiscrepancy " << r.discrepancy << "\n";
}

void print_embedding(const Embedding& e) {
  std::cout << "map";
  for (int v : e.map()) std::cout << ' ' << v;
  std::cout << "\n";
}

void print_blocks(const std::vector<std::vector<int>>& blocks) {
  for (const auto& b : blocks) {
    std::cout << "block";
    for (int v : b) std::cout << ' ' << v;
    std::cout << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Graph discrepancy toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "base seed (overrides the config)");
  app.add_flag("--json", g.json, "emit JSON");
  app.add_option("--config", g.config_path, "config file (default: $DISCLAB_CONFIG)");
  app.add_option("--threads", g.threads, "worker threads (default: hardware concurrency)");

  // gen
  auto* gen = app.add_subcommand("gen", "generate a graph or colouring");
  std::string gen_kind, gen_out;
  int gen_n = 0, gen_d = 0, gen_k = 0, gen_m = 0;
  std::string gen_rho = "1/3", gen_p = "1/2", gen_eps = "1/10", gen_color = "red", gen_lengths;
  bool gen_red_cliques = false;
  gen->add_option("kind", gen_kind,
                  "bipartite | two-cliques | random-coloring | mono | random-regular | random-graph | cycle | path | "
                  "star | matching | complete | empty | cycles | clique-factor | star-clique-path")
      ->required();
  gen->add_option("--n", gen_n);
  gen->add_option("--m", gen_m, "clique size for two-cliques");
  gen->add_option("--d", gen_d);
  gen->add_option("--k", gen_k);
  gen->add_option("--rho", gen_rho);
  gen->add_option("--p", gen_p);
  gen->add_option("--eps", gen_eps);
  gen->add_option("--color", gen_color);
  gen->add_option("--lengths", gen_lengths, "comma-separated cycle lengths");
  gen->add_flag("--red-cliques", gen_red_cliques);
  gen->add_option("--out", gen_out);

  // embed
  auto* embed = app.add_subcommand("embed", "embed a guest into a coloured K_n");
  std::string em_strategy = "auto", em_guest, em_coloring, em_eps = "1/10";
  embed->add_option("--strategy", em_strategy, "random | cut | auto | switch | single-pair | greedy-switch");
  embed->add_option("--guest", em_guest)->required();
  embed->add_option("--coloring", em_coloring)->required();
  embed->add_option("--eps", em_eps);

  // bisect
  auto* bis = app.add_subcommand("bisect", "extremal bisection");
  std::string bi_in, bi_dir = "max", bi_mode = "exact";
  std::int64_t bi_budget = 20'000;
  bis->add_option("--in", bi_in)->required();
  bis->add_option("--direction", bi_dir)->check(CLI::IsMember({"max", "min"}));
  bis->add_option("--mode", bi_mode)->check(CLI::IsMember({"exact", "search", "auto"}));
  bis->add_option("--budget", bi_budget);

  // lambda
  auto* lam = app.add_subcommand("lambda", "rho_k and lambda_k");
  std::string la_k = "2..6";
  int la_max = 0;
  bool la_csv = false;
  lam->add_option("--k", la_k, "k values: 2..6, 3,5 or 2..20:2");
  lam->add_option("--max", la_max, "sweep k = 2..max instead of --k");
  lam->add_flag("--csv", la_csv);

  // factor
  auto* fac = app.add_subcommand("factor", "monochromatic K_k-factor");
  int fa_k = 3;
  std::string fa_coloring, fa_eps = "1/10";
  std::int64_t fa_budget = 1'000'000;
  fac->add_option("--k", fa_k)->required();
  fac->add_option("--coloring", fa_coloring)->required();
  fac->add_option("--eps", fa_eps);
  fac->add_option("--budget", fa_budget, "probe budget of the unavoidable-pattern search");

  // twofactor
  auto* tf = app.add_subcommand("twofactor", "monochromatic embedding of a 2-factor");
  std::string tf_guest, tf_coloring, tf_eps = "1/2";
  std::optional<int> tf_k;
  tf->add_option("--guest", tf_guest, "2-factor as JSON (cycles, lengths or graph) or graph text")->required();
  tf->add_option("--coloring", tf_coloring)->required();
  tf->add_option("--eps", tf_eps);
  tf->add_option("--k", tf_k, "override k = ceil(6/eps)");

  // verify
  auto* ver = app.add_subcommand("verify", "probabilistic lemma checks");
  std::string ve_kind, ve_params;
  ver->add_option("kind", ve_kind, "anticoncentration | tails | coupling | binomial | matching | sqrtdev")
      ->required()
      ->check(CLI::IsMember({"anticoncentration", "tails", "coupling", "binomial", "matching", "sqrtdev"}));
  ver->add_option("--params", ve_params, "key=value pairs separated by ';'");

  // oracle
  auto* ora = app.add_subcommand("oracle", "exhaustive ground truth at small n");
  std::string or_kind, or_guest, or_coloring;
  std::optional<int> or_k;
  ora->add_option("kind", or_kind, "maxdisc | factor")->required()->check(CLI::IsMember({"maxdisc", "factor"}));
  ora->add_option("--guest", or_guest, "guest graph (maxdisc) or 2-factor (factor)");
  ora->add_option("--coloring", or_coloring)->required();
  ora->add_option("--k", or_k, "K_k-factor size (factor)");

  // experiment
  auto* exp = app.add_subcommand("experiment", "run an experiment spec");
  std::string ex_spec, ex_out;
  bool ex_timing = false;
  exp->add_option("spec", ex_spec)->required();
  exp->add_option("--out", ex_out, "directory for one CSV per section");
  exp->add_flag("--timing", ex_timing, "include per-cell wall time in JSON output");

  CLI11_PARSE(app, argc, argv);

  try {
    Config config = resolve_config(g.config_path);
    if (g.seed) config.seed = *g.seed;
    if (config.format == "json") g.json = true;
    const Seed seed{config.seed};
    const int threads = g.threads > 0 ? g.threads : std::max(1u, std::thread::hardware_concurrency());

    if (*gen) {
      auto pi = [](const std::string& s) { return parse_rational(s); };
      Rational p = pi(gen_p);
      auto pn = to_int64(p.get_num()), pd = to_int64(p.get_den());
      std::optional<Graph> graph;
      std::optional<Coloring> col;
      if (gen_kind == "bipartite") col = bipartite_construction(gen_n, pi(gen_rho));
      else if (gen_kind == "two-cliques") col = two_cliques_coloring(gen_m, gen_red_cliques);
      else if (gen_kind == "random-coloring") col = random_coloring(gen_n, pn, pd, seed);
      else if (gen_kind == "mono") col = monochromatic_coloring(gen_n, parse_color(gen_color));
      else if (gen_kind == "random-regular") graph = random_regular_graph(gen_n, gen_d, seed);
      else if (gen_kind == "random-graph") graph = random_graph(gen_n, pn, pd, seed);
      else if (gen_kind == "cycle") graph = cycle_graph(gen_n);
      else if (gen_kind == "path") graph = path_graph(gen_n);
      else if (gen_kind == "star") graph = star_graph(gen_n);
      else if (gen_kind == "matching") graph = perfect_matching(gen_n);
      else if (gen_kind == "complete") graph = complete_graph(gen_n);
      else if (gen_kind == "empty") graph = empty_graph(gen_n);
      else if (gen_kind == "clique-factor") graph = clique_factor_graph(gen_n, gen_k);
      else if (gen_kind == "cycles") {
        std::vector<int> lengths;
        for (auto v : parse_int_list(gen_lengths)) lengths.push_back(static_cast<int>(v));
        graph = cycles_graph(lengths);
      } else if (gen_kind == "star-clique-path") {
        Rational e = pi(gen_eps);
        graph = star_clique_path_guest(gen_n, to_int64(e.get_num()), to_int64(e.get_den()), gen_k);
      } else {
        throw ParameterError("unknown generator '" + gen_kind + "'");
      }
      std::string text;
      if (g.json) text = (graph ? graph_json(*graph) : coloring_json(*col)).dump(2) + "\n";
      else text = graph ? graph_to_string(*graph) : coloring_to_string(*col);
      if (gen_out.empty()) {
        std::cout << text;
      } else {
        std::ofstream out(gen_out);
        if (!out) throw ParameterError("cannot write '" + gen_out + "'");
        out << text;
      }
      return 0;
    }

    if (*embed) {
      Graph f = read_graph(em_guest);
      Coloring c = read_coloring(em_coloring);
      SwitchResult r = run_embed_strategy(em_strategy, f, c, parse_rational(em_eps), seed, config);
      if (g.json) {
        Json j = switch_result_json(r);
        j["config_digest"] = config.digest();
        print_json(j);
      } else {
        std::cout << "strategy " << r.strategy << "\ncase " << r.case_taken << "\n";
        print_report(r.report);
        print_embedding(r.embedding);
      }
      return 0;
    }

    if (*bis) {
      Graph f = read_graph(bi_in);
      Direction dir = bi_dir == "max" ? Direction::max : Direction::min;
      Bisection b = bi_mode == "exact"    ? exhaustive_extremal_bisection(f, dir)
                    : bi_mode == "search" ? local_search_bisection(f, dir, bi_budget, seed)
                                          : extremal_bisection(f, dir, bi_budget, seed);
      std::vector<int> u;
      for (int v = 0; v < f.n(); ++v)
        if (b.u_side.test(v)) u.push_back(v);
      if (g.json) {
        print_json({{"u", u}, {"cut_size", b.cut_size}, {"deviation", rational_json(b.deviation)},
                    {"mode", bi_mode}, {"direction", bi_dir}});
      } else {
        std::cout << "cut " << b.cut_size << "\ndeviation " << to_string(b.deviation) << "\nu";
        for (int v : u) std::cout << ' ' << v;
        std::cout << "\n";
      }
      return 0;
    }

    if (*lam) {
      std::vector<std::int64_t> ks;
      if (la_max > 0) {
        for (int k = 2; k <= la_max; ++k) ks.push_back(k);
      } else {
        ks = parse_int_list(la_k);
      }
      std::vector<RhoLambda> rows;
      for (auto k : ks) rows.push_back(solve_rho_lambda(static_cast<int>(k)));
      if (g.json) {
        Json list = Json::array();
        for (std::size_t i = 0; i < ks.size(); ++i)
          list.push_back({{"k", ks[i]}, {"rho", to_string(rows[i].rho)}, {"lambda", to_string(rows[i].lambda)},
                          {"interval", rows[i].interval}});
        print_json(list);
      } else if (la_csv) {
        std::cout << "k,rho,lambda,interval\n";
        for (std::size_t i = 0; i < ks.size(); ++i)
          std::cout << ks[i] << ',' << to_string(rows[i].rho) << ',' << to_string(rows[i].lambda) << ','
                    << rows[i].interval << "\n";
      } else {
        for (std::size_t i = 0; i < ks.size(); ++i)
          std::cout << "k=" << ks[i] << " rho=" << to_string(rows[i].rho) << " lambda=" << to_string(rows[i].lambda)
                    << "\n";
      }
      return 0;
    }

    if (*fac) {
      Coloring c = read_coloring(fa_coloring);
      UnavoidableOptions opt;
      opt.budget = fa_budget;
      KkDriverResult r = kk_factor_driver(c, fa_k, parse_rational(fa_eps), seed, opt);
      if (g.json) {
        print_json(kk_driver_json(r));
      } else {
        std::cout << "strategy " << r.strategy << "\ncolor " << name(r.color) << "\ncount " << r.count << "\ntarget "
                  << to_string(r.target) << (r.target_met ? " (met)" : " (not met)") << "\n";
        print_blocks(r.factor.blocks);
      }
      return 0;
    }

    if (*tf) {
      TwoFactor f = read_two_factor(tf_guest);
      Coloring c = read_coloring(tf_coloring);
      TwoFactorParams params;
      params.k_override = tf_k;
      TwoFactorDriverResult r = two_factor_driver(c, f, parse_rational(tf_eps), seed, params);
      if (g.json) {
        print_json(two_factor_driver_json(r));
      } else {
        std::cout << "strategy " << r.strategy << "\ncolor " << name(r.color) << "\ncount " << r.count << "\ntarget "
                  << to_string(r.target) << (r.target_met ? " (met)" : " (not met)") << "\n";
        print_embedding(r.embedding);
      }
      return 0;
    }

    if (*ver) {
      auto p = parse_params(ve_params);
      Json out;
      bool pass = true;
      if (ve_kind == "anticoncentration" || ve_kind == "tails") {
        Rational eta = parse_rational(take(p, "eta", "1/10"));
        std::string ptext = take(p, "p", "1/2");
        Rational pr = ptext == "eta" ? eta : parse_rational(ptext);
        auto ks = parse_int_list(take(p, "k", "100..1000:100"));
        BoundCheck b = ve_kind == "tails" ? check_tails(eta, pr, ks) : check_anticoncentration(eta, pr, ks);
        out = bound_check_json(b);
        pass = b.holds;
      } else if (ve_kind == "coupling") {
        int n = static_cast<int>(to_i64(take(p, "n", "10")));
        int k = static_cast<int>(to_i64(take(p, "k", "4")));
        int pc = static_cast<int>(to_i64(take(p, "p", "3")));
        int qc = static_cast<int>(to_i64(take(p, "q", "2")));
        BoundCheck b = check_coupling(n, k, range_set(n, 0, pc), range_set(n, pc, pc + qc));
        out = bound_check_json(b);
        pass = b.holds;
      } else if (ve_kind == "binomial") {
        BoundCheck b = check_binomial_fact(to_i64(take(p, "n", "2000")));
        out = bound_check_json(b);
        out.erase("rows");
        pass = b.holds;
      } else if (ve_kind == "matching") {
        BoundCheck b = mc_random_matching(to_i64(take(p, "n", "1000")), to_i64(take(p, "p", "500")),
                                          to_i64(take(p, "k", "200")), parse_rational(take(p, "eta", "1/2")),
                                          to_i64(take(p, "trials", "100000")), seed);
        out = bound_check_json(b);
        pass = b.holds;
      } else {
        SqrtDeviationEstimate e = mc_sqrt_deviation(
            to_i64(take(p, "n", "2000")), to_i64(take(p, "p", "1000")), to_i64(take(p, "q", "500")),
            to_i64(take(p, "a", "400")), to_i64(take(p, "b", "200")), parse_rational(take(p, "eta", "1/2")),
            to_i64(take(p, "trials", "100000")), seed);
        out = sqrt_deviation_json(e);
        pass = e.positive;
      }
      if (!p.empty()) throw ParameterError("unused parameter '" + p.begin()->first + "'");
      if (g.json) print_json(out);
      else std::cout << ve_kind << (pass ? " PASS" : " FAIL") << "\n";
      return pass ? 0 : 1;
    }

    if (*ora) {
      Coloring c = read_coloring(or_coloring);
      if (or_kind == "maxdisc") {
        if (or_guest.empty()) throw ParameterError("maxdisc needs --guest");
        Graph f = read_graph(or_guest);
        if (f.n() > config.oracle_cap) {
          auto orbits = automorphism_orbits(f);
          std::size_t big = 0;
          for (const auto& o : orbits) big = std::max(big, o.size());
          if (2 * big < std::size_t(f.n())) throw CapacityError("guest above the configured oracle_cap");
        }
        OracleDisc r = oracle_max_disc(f, c);
        if (g.json) print_json(oracle_disc_json(r));
        else {
          print_report(r.report);
          print_embedding(r.embedding);
        }
      } else if (or_k) {
        OracleFactor r = oracle_best_factor(c, *or_k);
        if (g.json) print_json(oracle_factor_json(r));
        else std::cout << "best_red " << r.best_red << "\nbest_blue " << r.best_blue << "\nenumerated " << r.enumerated
                       << "\n";
      } else {
        if (or_guest.empty()) throw ParameterError("factor needs --k or a 2-factor --guest");
        OracleTwoFactor r = oracle_best_factor(c, read_two_factor(or_guest));
        if (g.json) print_json(oracle_two_factor_json(r));
        else std::cout << "best_red " << r.best_red << "\nbest_blue " << r.best_blue << "\n";
      }
      return 0;
    }

    if (*exp) {
      ExperimentSpec spec = load_experiment_spec(ex_spec);
      ExperimentResult r = run_experiment(spec, config, threads);
      if (!ex_out.empty()) {
        std::filesystem::create_directories(ex_out);
        for (const auto& s : r.sections) {
          std::ofstream out(std::filesystem::path(ex_out) / (s.name + ".csv"));
          write_csv(out, s, r.config_digest);
        }
      }
      if (g.json) {
        print_json(experiment_json(r, ex_timing));
      } else if (ex_out.empty()) {
        for (std::size_t i = 0; i < r.sections.size(); ++i) {
          if (r.sections.size() > 1) std::cout << (i ? "\n" : "") << "# " << r.sections[i].name << "\n";
          write_csv(std::cout, r.sections[i], r.config_digest);
        }
      }
      if (!r.ok()) {
        std::cerr << failures_json(r).dump() << "\n";
        return 1;
      }
      return 0;
    }
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
