#include "disc/cli.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <mutex>
#include <regex>
#include <set>
#include <sstream>
#include <thread>

#include "disc/bisect.hpp"
#include "disc/error.hpp"
#include "disc/factors.hpp"
#include "disc/generators.hpp"
#include "disc/io.hpp"
#include "disc/oracle.hpp"
#include "disc/probkit.hpp"

namespace disc {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string strip_comment(const std::string& s) {
  auto h = s.find('#');
  return h == std::string::npos ? s : s.substr(0, h);
}

std::int64_t parse_int(const std::string& s, int line) {
  try {
    std::size_t used = 0;
    long long v = std::stoll(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError(line, "not an integer: '" + s + "'");
  }
}

Rational parse_unit_rational(const std::string& key, const std::string& s, int line) {
  Rational r;
  try {
    r = parse_rational(s);
  } catch (const Error& e) {
    throw ParseError(line, key + ": " + e.what());
  }
  if (r <= 0 || r >= 1) throw ParseError(line, key + " must lie in (0, 1)");
  return r;
}

std::string fmt_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

}  // namespace

SwitchParams Config::switch_params() const {
  SwitchParams p;
  p.beta = beta;
  p.delta = delta;
  p.rho = rho_switch;
  p.trials = trials;
  p.search_budget = budget;
  return p;
}

std::string Config::canonical() const {
  std::ostringstream o;
  o << "beta = " << to_string(beta) << "\n"
    << "delta = " << to_string(delta) << "\n"
    << "rho_switch = " << to_string(rho_switch) << "\n"
    << "gamma = " << to_string(gamma) << "\n"
    << "trials = " << trials << "\n"
    << "budget = " << budget << "\n"
    << "oracle_cap = " << oracle_cap << "\n"
    << "seed = " << seed << "\n"
    << "format = " << format << "\n";
  return o.str();
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string Config::digest() const { return hex64(fnv1a64(canonical())); }

Config parse_config(std::istream& in) {
  Config c;
  std::set<std::string> seen;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string s = trim(strip_comment(raw));
    if (s.empty()) continue;
    auto eq = s.find('=');
    if (eq == std::string::npos) throw ParseError(line, "expected 'key = value'");
    std::string key = trim(s.substr(0, eq)), val = trim(s.substr(eq + 1));
    if (!seen.insert(key).second) throw ParseError(line, "duplicate key '" + key + "'");
    if (key == "beta") c.beta = parse_unit_rational(key, val, line);
    else if (key == "delta") c.delta = parse_unit_rational(key, val, line);
    else if (key == "rho_switch") c.rho_switch = parse_unit_rational(key, val, line);
    else if (key == "gamma") c.gamma = parse_unit_rational(key, val, line);
    else if (key == "trials" || key == "budget" || key == "oracle_cap") {
      std::int64_t v = parse_int(val, line);
      if (v < 1) throw ParseError(line, key + " must be positive");
      if (key == "trials") c.trials = static_cast<int>(v);
      else if (key == "budget") c.budget = v;
      else {
        if (v > 11) throw ParseError(line, "oracle_cap above 11");
        c.oracle_cap = static_cast<int>(v);
      }
    } else if (key == "seed") {
      std::int64_t v = parse_int(val, line);
      if (v < 0) throw ParseError(line, "seed must be non-negative");
      c.seed = static_cast<std::uint64_t>(v);
    } else if (key == "format") {
      if (val != "text" && val != "json") throw ParseError(line, "format must be text or json");
      c.format = val;
    } else {
      throw ParseError(line, "unknown key '" + key + "'");
    }
  }
  return c;
}

Config parse_config_string(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot open config '" + path + "'");
  return parse_config(in);
}

Config resolve_config(const std::string& path) {
  if (!path.empty()) return load_config(path);
  const char* env = std::getenv(kConfigEnv);
  if (env && *env) return load_config(env);
  return Config{};
}

std::vector<std::int64_t> parse_int_list(const std::string& text) {
  std::vector<std::int64_t> out;
  std::string s = trim(text);
  if (s.empty()) return out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    auto dots = item.find("..");
    if (dots == std::string::npos) {
      out.push_back(parse_int(item, 0));
      continue;
    }
    std::string hi = item.substr(dots + 2);
    std::int64_t step = 1;
    if (auto colon = hi.find(':'); colon != std::string::npos) {
      step = parse_int(trim(hi.substr(colon + 1)), 0);
      hi = hi.substr(0, colon);
    }
    std::int64_t a = parse_int(trim(item.substr(0, dots)), 0), b = parse_int(trim(hi), 0);
    if (step < 1) throw ParameterError("range step must be positive");
    for (std::int64_t v = a; v <= b; v += step) out.push_back(v);
  }
  return out;
}

std::vector<Rational> parse_rational_list(const std::string& text) {
  std::vector<Rational> out;
  std::string s = trim(text);
  if (s.empty()) return out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_rational(trim(item)));
  return out;
}

// ---- experiment spec ------------------------------------------------------

namespace {

struct KindInfo {
  std::vector<std::string> columns;
  std::map<std::string, std::string> defaults;
};

const std::map<std::string, KindInfo>& kind_table() {
  static const std::map<std::string, KindInfo> table{
      {"lambda", {{"k", "rho", "lambda", "interval"}, {{"k", "2..6"}}}},
      {"tightness_random",
       {{"n", "seed", "strategy", "status", "e_f", "star_red", "star_blue", "clique_red", "clique_blue", "path_red",
         "path_blue", "mono_plus", "mono_minus", "discrepancy"},
        {{"n", "200"}, {"eps", "1/10"}, {"clique", "5"}, {"p", "1/2"}, {"seeds", "5"}, {"strategy", "random"}}}},
      {"tightness_regular",
       {{"n", "d", "seed", "best_disc", "sqrt_d_n", "ratio"},
        {{"n", "100"}, {"d", "2,4,8,16"}, {"seeds", "3"}, {"samples", "32"}}}},
      {"dominance",
       {{"n", "seed", "guest_digest", "coloring_digest", "e_f", "oracle", "random", "cut", "single_pair", "auto",
         "best_strategy", "recount_ok"},
        {{"n", "8"}, {"p", "1/2"}, {"seeds", "50"}, {"eps", "1/10"}}}},
      {"bisection",
       {{"n", "seed", "e", "max_degree", "max_cut", "bound", "holds"}, {{"n", "8..16"}, {"p", "1/4"}, {"seeds", "10"}}}},
      {"anticoncentration",
       {{"eta", "p", "k", "n", "pointwise_holds", "pointwise_margin", "tail_holds", "tail_margin"},
        {{"eta", "1/10,1/4,1/2"}, {"p", "1/2"}, {"k", "100..1000:100"}}}},
  };
  return table;
}

const KindInfo& kind_info(const std::string& kind) {
  auto it = kind_table().find(kind);
  if (it == kind_table().end()) throw ParameterError("unknown experiment kind '" + kind + "'");
  return it->second;
}

bool is_number(const std::string& s) {
  try {
    parse_rational(s);
    return true;
  } catch (const Error&) {
    return false;
  }
}

void finish_section(Section& sec) {
  if (sec.kind.empty()) throw ParseError(sec.line, "section [" + sec.name + "] has no kind");
  auto it = kind_table().find(sec.kind);
  if (it == kind_table().end()) throw ParseError(sec.line, "unknown kind '" + sec.kind + "'");
  const KindInfo& info = it->second;
  for (const auto& [key, line] : sec.param_lines)
    if (!info.defaults.count(key)) throw ParseError(line, "parameter '" + key + "' not accepted by " + sec.kind);
  for (const auto& [key, val] : info.defaults) sec.params.emplace(key, val);
  auto has_col = [&](const std::string& c) {
    return std::find(info.columns.begin(), info.columns.end(), c) != info.columns.end();
  };
  for (const auto& a : sec.asserts) {
    if (!has_col(a.lhs)) throw ParseError(a.line, "unknown column '" + a.lhs + "'");
    if (!has_col(a.rhs) && !is_number(a.rhs)) throw ParseError(a.line, "'" + a.rhs + "' is neither a column nor a number");
  }
}

}  // namespace

const std::vector<std::string>& experiment_kinds() {
  static const std::vector<std::string> kinds = [] {
    std::vector<std::string> v;
    for (const auto& [k, _] : kind_table()) v.push_back(k);
    return v;
  }();
  return kinds;
}

std::vector<std::string> experiment_columns(const std::string& kind) { return kind_info(kind).columns; }

ExperimentSpec parse_experiment_spec(std::istream& in) {
  static const std::regex header(R"(\[([A-Za-z0-9_\-]+)\])");
  static const std::regex assertion(R"(([A-Za-z_][A-Za-z0-9_]*)\s*(==|!=|<=|>=|<|>)\s*(\S+))");
  ExperimentSpec spec;
  std::set<std::string> names;
  Section* cur = nullptr;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string s = trim(strip_comment(raw));
    if (s.empty()) continue;
    std::smatch m;
    if (s.front() == '[') {
      if (!std::regex_match(s, m, header)) throw ParseError(line, "malformed section header");
      if (cur) finish_section(*cur);
      if (!names.insert(m[1]).second) throw ParseError(line, "duplicate section '" + m[1].str() + "'");
      spec.sections.push_back(Section{m[1], "", line, {}, {}, {}});
      cur = &spec.sections.back();
      continue;
    }
    if (!cur) throw ParseError(line, "entry outside a section");
    auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0) throw ParseError(line, "expected 'key = value'");
    std::string key = trim(s.substr(0, eq)), val = trim(s.substr(eq + 1));
    if (key == "kind") {
      if (!cur->kind.empty()) throw ParseError(line, "duplicate kind");
      cur->kind = val;
    } else if (key == "assert") {
      if (!std::regex_match(val, m, assertion)) throw ParseError(line, "malformed assertion '" + val + "'");
      cur->asserts.push_back(Assertion{m[1], m[2], m[3], line, val});
    } else {
      if (cur->param_lines.count(key)) throw ParseError(line, "duplicate parameter '" + key + "'");
      cur->param_lines[key] = line;
      cur->params[key] = val;
    }
  }
  if (cur) finish_section(*cur);
  return spec;
}

ExperimentSpec parse_experiment_spec_string(const std::string& text) {
  std::istringstream in(text);
  return parse_experiment_spec(in);
}

ExperimentSpec load_experiment_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot open experiment spec '" + path + "'");
  return parse_experiment_spec(in);
}

// ---- embedding dispatch ---------------------------------------------------

SwitchResult run_embed_strategy(const std::string& strategy, const Graph& f, const Coloring& coloring,
                                const Rational& eps, Seed seed, const Config& config) {
  SwitchParams params = config.switch_params();
  if (strategy == "random") return expectation_strategy(f, coloring);
  if (strategy == "cut") return cut_strategy(f, coloring, seed, params);
  if (strategy == "auto") {
    if (f.regular_degree() >= 0) return embed_regular(f, coloring, eps, seed, params);
    return embed_bounded_degree(f, coloring, eps, seed, params);
  }
  if (strategy == "single-pair") return single_pair_switch_embed(f, coloring, eps, params.delta);
  if (strategy == "switch" || strategy == "greedy-switch") {
    HostCertifyResult host = certify_host(coloring, params.beta, derive(seed, 1), params.host_attempts);
    if (!host.certificate) throw SearchFailure("host not certified: " + host.failure);
    if (strategy == "greedy-switch") return greedy_switch_embed(f, coloring, *host.certificate, params.delta);
    GuestCertificate gc;
    if (f.regular_degree() >= 1) {
      gc = certify_guest_regular(f, derive(seed, 3), params.retries);
    } else {
      GuestIndependentResult gi = certify_guest_independent(f, greedy_independent_set(f));
      gc = gi.certificate;
    }
    return main_switch_embed(f, gc, coloring, *host.certificate, params, derive(seed, 2));
  }
  throw ParameterError("unknown strategy '" + strategy + "'");
}

// ---- experiment runner ----------------------------------------------------

namespace {

using Cell = std::function<std::vector<std::string>(Seed)>;

std::int64_t param_int(const Section& s, const std::string& key) {
  auto v = parse_int_list(s.params.at(key));
  if (v.size() != 1) throw ParameterError(s.name + "." + key + " must be a single integer");
  return v.front();
}

Rational param_rational(const Section& s, const std::string& key) {
  auto v = parse_rational_list(s.params.at(key));
  if (v.size() != 1) throw ParameterError(s.name + "." + key + " must be a single number");
  return v.front();
}

std::string num(std::int64_t v) { return std::to_string(v); }

std::vector<Cell> lambda_cells(const Section& s) {
  std::vector<Cell> cells;
  for (std::int64_t k : parse_int_list(s.params.at("k")))
    cells.push_back([k](Seed) {
      RhoLambda r = solve_rho_lambda(static_cast<int>(k));
      return std::vector<std::string>{num(k), to_string(r.rho), to_string(r.lambda), num(r.interval)};
    });
  return cells;
}

std::vector<Cell> tightness_random_cells(const Section& s, const Config& config) {
  Rational eps = param_rational(s, "eps"), p = param_rational(s, "p");
  int clique = static_cast<int>(param_int(s, "clique"));
  std::int64_t seeds = param_int(s, "seeds");
  std::string strategy = s.params.at("strategy");
  std::vector<Cell> cells;
  for (std::int64_t n : parse_int_list(s.params.at("n")))
    for (std::int64_t j = 0; j < seeds; ++j)
      cells.push_back([=](Seed seed) {
        const int nn = static_cast<int>(n);
        Graph f = star_clique_path_guest(nn, to_int64(eps.get_num()), to_int64(eps.get_den()), clique);
        Coloring c = random_coloring(nn, to_int64(p.get_num()), to_int64(p.get_den()), derive(seed, 1));
        const int leaves = f.degree(0);
        std::vector<std::string> row{num(n), std::to_string(seed.value), strategy};
        SwitchResult r;
        try {
          r = run_embed_strategy(strategy, f, c, eps, derive(seed, 2), config);
        } catch (const Error& e) {
          row.push_back("error");
          row.push_back(num(f.edge_count()));
          for (int i = 0; i < 9; ++i) row.push_back("NA");
          return row;
        }
        std::int64_t cnt[3][2] = {};
        for (auto [u, v] : f.edges()) {
          int part = u == 0 ? 0 : (u <= leaves + clique ? 1 : 2);
          cnt[part][c.is_red(r.embedding(u), r.embedding(v)) ? 0 : 1]++;
        }
        row.push_back("ok");
        row.push_back(num(f.edge_count()));
        for (auto& part : cnt) row.push_back(num(part[0])), row.push_back(num(part[1]));
        row.push_back(num(r.report.mono_plus));
        row.push_back(num(r.report.mono_minus));
        row.push_back(num(r.report.discrepancy));
        return row;
      });
  return cells;
}

std::vector<Cell> tightness_regular_cells(const Section& s) {
  std::int64_t seeds = param_int(s, "seeds"), samples = param_int(s, "samples");
  std::vector<Cell> cells;
  for (std::int64_t n : parse_int_list(s.params.at("n")))
    for (std::int64_t d : parse_int_list(s.params.at("d"))) {
      if (n % 2 || d < 1 || d >= n || (n * d) % 2) continue;
      for (std::int64_t j = 0; j < seeds; ++j)
        cells.push_back([=](Seed seed) {
          const int nn = static_cast<int>(n);
          Graph f = random_regular_graph(nn, static_cast<int>(d), derive(seed, 1));
          Coloring c = two_cliques_coloring(nn / 2, false);
          Rng rng(derive(seed, 2));
          std::vector<int> p(nn);
          for (int i = 0; i < nn; ++i) p[i] = i;
          std::int64_t best = 0;
          for (std::int64_t t = 0; t < samples; ++t) {
            rng.shuffle(p);
            best = std::max(best, discrepancy(c, f, Embedding(p)).discrepancy);
          }
          double scale = std::sqrt(static_cast<double>(d)) * static_cast<double>(n);
          return std::vector<std::string>{num(n), num(d), std::to_string(seed.value), num(best),
                                          fmt_double(scale), fmt_double(static_cast<double>(best) / scale)};
        });
    }
  return cells;
}

std::vector<Cell> dominance_cells(const Section& s, const Config& config) {
  Rational p = param_rational(s, "p"), eps = param_rational(s, "eps");
  std::int64_t seeds = param_int(s, "seeds");
  std::vector<Cell> cells;
  for (std::int64_t n : parse_int_list(s.params.at("n")))
    for (std::int64_t j = 0; j < seeds; ++j)
      cells.push_back([=](Seed seed) {
        const int nn = static_cast<int>(n);
        Graph f = random_graph(nn, to_int64(p.get_num()), to_int64(p.get_den()), derive(seed, 1));
        Coloring c = random_coloring(nn, 1, 2, derive(seed, 2));
        OracleDisc o = oracle_max_disc(f, c);
        std::vector<std::string> row{num(n),
                                     std::to_string(seed.value),
                                     hex64(fnv1a64(graph_to_string(f))),
                                     hex64(fnv1a64(coloring_to_string(c))),
                                     num(f.edge_count()),
                                     num(o.report.discrepancy)};
        std::int64_t best = -1;
        bool recount_ok = true;
        for (const char* strat : {"random", "cut", "single-pair", "auto"}) {
          try {
            SwitchResult r = run_embed_strategy(strat, f, c, eps, derive(seed, 3), config);
            recount_ok = recount_ok && r.report == discrepancy(c, f, r.embedding);
            best = std::max(best, r.report.discrepancy);
            row.push_back(num(r.report.discrepancy));
          } catch (const Error&) {
            row.push_back("NA");
          }
        }
        row.push_back(best < 0 ? "NA" : num(best));
        row.push_back(recount_ok ? "1" : "0");
        return row;
      });
  return cells;
}

std::vector<Cell> bisection_cells(const Section& s) {
  Rational p = param_rational(s, "p");
  std::int64_t seeds = param_int(s, "seeds");
  std::vector<Cell> cells;
  for (std::int64_t n : parse_int_list(s.params.at("n")))
    for (std::int64_t j = 0; j < seeds; ++j)
      cells.push_back([=](Seed seed) {
        const int nn = static_cast<int>(n);
        Graph f = random_graph(nn, to_int64(p.get_num()), to_int64(p.get_den()), derive(seed, 1));
        for (int v = 0; v < nn; ++v)
          if (f.degree(v) == 0) f.add_edge(v, (v + 1) % nn);
        Bisection b = exhaustive_extremal_bisection(f, Direction::max);
        const std::int64_t e = f.edge_count(), delta = f.max_degree();
        Rational bound = rat(e, 2) + std::min(rat(n, 6), rat(n + 1 - delta, 4));
        return std::vector<std::string>{num(n),
                                        std::to_string(seed.value),
                                        num(e),
                                        num(delta),
                                        num(b.cut_size),
                                        to_string(bound),
                                        Rational(big(b.cut_size)) >= bound ? "1" : "0"};
      });
  return cells;
}

std::vector<Cell> anticoncentration_cells(const Section& s) {
  std::vector<Rational> etas = parse_rational_list(s.params.at("eta"));
  std::vector<std::string> ps;
  {
    std::stringstream ss(s.params.at("p"));
    std::string item;
    while (std::getline(ss, item, ',')) ps.push_back(trim(item));
  }
  std::vector<Cell> cells;
  for (const Rational& eta : etas)
    for (const std::string& ptext : ps)
      for (std::int64_t k : parse_int_list(s.params.at("k")))
        cells.push_back([=](Seed) {
          Rational p = ptext == "eta" ? eta : parse_rational(ptext);
          std::int64_t n = minimal_population(eta, p, k);
          HypergeomSpec spec{n, k, to_int64(floor(p * big(n)))};
          BoundCheck a = check_anticoncentration(eta, {spec});
          BoundCheck t = check_tails(eta, {spec});
          return std::vector<std::string>{to_string(eta),     to_string(p),         num(k),
                                          num(n),             a.holds ? "1" : "0", fmt_double(a.margin),
                                          t.holds ? "1" : "0", fmt_double(t.margin)};
        });
  return cells;
}

std::vector<Cell> section_cells(const Section& s, const Config& config) {
  if (s.kind == "lambda") return lambda_cells(s);
  if (s.kind == "tightness_random") return tightness_random_cells(s, config);
  if (s.kind == "tightness_regular") return tightness_regular_cells(s);
  if (s.kind == "dominance") return dominance_cells(s, config);
  if (s.kind == "bisection") return bisection_cells(s);
  if (s.kind == "anticoncentration") return anticoncentration_cells(s);
  throw ParameterError("unknown experiment kind '" + s.kind + "'");
}

bool compare(const Rational& a, const std::string& op, const Rational& b) {
  if (op == "==") return a == b;
  if (op == "!=") return a != b;
  if (op == "<") return a < b;
  if (op == "<=") return a <= b;
  if (op == ">") return a > b;
  return a >= b;
}

void check_assertions(const Section& sec, SectionResult& out) {
  auto col = [&](const std::string& name) -> int {
    auto it = std::find(out.columns.begin(), out.columns.end(), name);
    return it == out.columns.end() ? -1 : static_cast<int>(it - out.columns.begin());
  };
  for (const auto& row : out.rows)
    for (const auto& a : sec.asserts) {
      std::string lv = row.values[col(a.lhs)];
      int rc = col(a.rhs);
      std::string rv = rc >= 0 ? row.values[rc] : a.rhs;
      if (lv == "NA" || rv == "NA") continue;
      bool pass;
      if (is_number(lv) && is_number(rv)) {
        pass = compare(parse_rational(lv), a.op, parse_rational(rv));
      } else if (a.op == "==" || a.op == "!=") {
        pass = (lv == rv) == (a.op == "==");
      } else {
        pass = false;
      }
      if (!pass) out.failures.push_back({sec.name, row.cell, a.text, lv, rv});
    }
}

}  // namespace

bool ExperimentResult::ok() const {
  for (const auto& s : sections)
    if (!s.failures.empty()) return false;
  return true;
}

ExperimentResult run_experiment(const ExperimentSpec& spec, const Config& config, int threads) {
  ExperimentResult result;
  result.config_digest = config.digest();
  struct Job {
    std::size_t section;
    int cell;
    Seed seed;
    Cell fn;
  };
  std::vector<Job> jobs;
  for (std::size_t si = 0; si < spec.sections.size(); ++si) {
    const Section& sec = spec.sections[si];
    SectionResult sr;
    sr.name = sec.name;
    sr.kind = sec.kind;
    sr.columns = experiment_columns(sec.kind);
    auto cells = section_cells(sec, config);
    Seed base = derive(Seed{config.seed}, si);
    sr.rows.resize(cells.size());
    for (std::size_t i = 0; i < cells.size(); ++i)
      jobs.push_back({si, static_cast<int>(i), derive(base, i), std::move(cells[i])});
    result.sections.push_back(std::move(sr));
  }

  std::atomic<std::size_t> next{0};
  std::mutex err_mu;
  std::exception_ptr first_error;
  auto worker = [&] {
    for (std::size_t j; (j = next.fetch_add(1)) < jobs.size();) {
      Job& job = jobs[j];
      auto t0 = std::chrono::steady_clock::now();
      try {
        ExperimentRecord rec;
        rec.cell = job.cell;
        rec.seed = job.seed.value;
        rec.values = job.fn(job.seed);
        rec.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        result.sections[job.section].rows[job.cell] = std::move(rec);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mu);
        if (!first_error) first_error = std::current_exception();
        next = jobs.size();
      }
    }
  };
  const int workers = std::max(1, std::min<int>(threads, static_cast<int>(jobs.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < workers; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);

  for (std::size_t si = 0; si < spec.sections.size(); ++si) check_assertions(spec.sections[si], result.sections[si]);
  return result;
}

void write_csv(std::ostream& out, const SectionResult& section, const std::string& digest) {
  for (const auto& c : section.columns) out << csv_field(c) << ',';
  out << "config_digest\n";
  for (const auto& row : section.rows) {
    for (const auto& v : row.values) out << csv_field(v) << ',';
    out << digest << '\n';
  }
}

Json failures_json(const ExperimentResult& r) {
  Json list = Json::array();
  for (const auto& s : r.sections)
    for (const auto& f : s.failures)
      list.push_back({{"section", f.section}, {"cell", f.cell}, {"assert", f.assertion}, {"lhs", f.lhs_value},
                      {"rhs", f.rhs_value}});
  return list;
}

Json experiment_json(const ExperimentResult& r, bool timing) {
  Json sections = Json::array();
  for (const auto& s : r.sections) {
    Json rows = Json::array();
    for (const auto& row : s.rows) {
      Json values = Json::object();
      for (std::size_t i = 0; i < s.columns.size(); ++i) values[s.columns[i]] = row.values[i];
      Json j{{"cell", row.cell}, {"seed", row.seed}, {"values", values}};
      if (timing) j["wall_ms"] = row.wall_ms;
      rows.push_back(j);
    }
    sections.push_back({{"name", s.name}, {"kind", s.kind}, {"columns", s.columns}, {"rows", rows}});
  }
  return Json{{"csv_version", kCsvVersion},
              {"config_digest", r.config_digest},
              {"ok", r.ok()},
              {"sections", sections},
              {"failures", failures_json(r)}};
}

Json bound_check_json(const BoundCheck& b) {
  Json rows = Json::array();
  for (const auto& r : b.rows)
    rows.push_back({{"k", r.k}, {"n", r.n}, {"p_count", r.p_count}, {"holds", r.holds}, {"margin", r.margin},
                    {"points", r.points}});
  Json j{{"holds", b.holds},   {"lhs", rational_json(b.lhs)}, {"rhs", rational_json(b.rhs)},
         {"squared", b.squared}, {"margin", b.margin},          {"witness", b.witness},
         {"rows", rows}};
  j["k0"] = b.k0 ? Json(*b.k0) : Json(nullptr);
  if (b.statistical) {
    j["estimate"] = b.estimate;
    j["sigma"] = b.sigma;
    j["trials"] = b.trials;
  }
  return j;
}

Json sqrt_deviation_json(const SqrtDeviationEstimate& e) {
  Json curve = Json::array();
  for (auto [rho, p] : e.curve) curve.push_back({rho, p});
  return Json{{"rho_hat", e.rho_hat}, {"rho_lo", e.rho_lo},     {"rho_hi", e.rho_hi},
              {"trials", e.trials},   {"positive", e.positive}, {"curve", curve}};
}

}  // namespace disc
