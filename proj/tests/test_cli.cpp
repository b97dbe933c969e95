#include <doctest.h>

#include <sstream>

#include "disc/cli.hpp"
#include "disc/error.hpp"
#include "disc/generators.hpp"

using namespace disc;

namespace {

std::string csv_of(const ExperimentResult& r, std::size_t i) {
  std::ostringstream o;
  write_csv(o, r.sections.at(i), r.config_digest);
  return o.str();
}

int line_of(const std::string& text) {
  try {
    parse_experiment_spec_string(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return -1;
}

}  // namespace

TEST_CASE("config defaults and digest") {
  Config c;
  CHECK(c.beta == rat(1, 1000));
  CHECK(c.delta == rat(1, 20));
  CHECK(c.rho_switch == rat(1, 100));
  CHECK(c.gamma == rat(1, 10000));
  CHECK(c.digest().size() == 16);
  CHECK(parse_config_string("").digest() == c.digest());
  CHECK(parse_config_string("# nothing\n\n").canonical() == c.canonical());

  Config d = parse_config_string("beta = 1/500\nseed = 7  # base\n");
  CHECK(d.beta == rat(1, 500));
  CHECK(d.seed == 7);
  CHECK(d.digest() != c.digest());
  CHECK(parse_config_string(d.canonical()).digest() == d.digest());

  // FNV-1a 64 reference values
  CHECK(fnv1a64("") == 0xcbf29ce484222325ull);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cull);
  CHECK(hex64(255) == "00000000000000ff");
}

TEST_CASE("config errors carry the line") {
  auto line = [](const std::string& t) {
    try {
      parse_config_string(t);
    } catch (const ParseError& e) {
      return e.line();
    }
    return -1;
  };
  CHECK(line("beta = 1/2\ndelta = 2\n") == 2);
  CHECK(line("\n\ncolour = red\n") == 3);
  CHECK(line("trials = 0\n") == 1);
  CHECK(line("beta = 1/9\nbeta = 1/8\n") == 2);
  CHECK(line("budget\n") == 1);
  CHECK(line("oracle_cap = 12\n") == 1);
  CHECK(line("gamma = 0\n") == 1);
}

TEST_CASE("list syntax") {
  CHECK(parse_int_list("2..6") == std::vector<std::int64_t>{2, 3, 4, 5, 6});
  CHECK(parse_int_list("100..300:100") == std::vector<std::int64_t>{100, 200, 300});
  CHECK(parse_int_list("1, 3,5") == std::vector<std::int64_t>{1, 3, 5});
  CHECK(parse_int_list("4..6,9") == std::vector<std::int64_t>{4, 5, 6, 9});
  CHECK(parse_int_list("  ").empty());
  CHECK(parse_int_list("5..4").empty());
  CHECK(parse_rational_list("1/10, 0.25") == std::vector<Rational>{rat(1, 10), rat(1, 4)});
  CHECK_THROWS(parse_int_list("1..5:0"));
}

TEST_CASE("spec parse errors") {
  CHECK(line_of("kind = lambda\n") == 1);
  CHECK(line_of("[a]\nkind = lambda\n[a]\nkind = lambda\n") == 3);
  CHECK(line_of("[a]\nk = 2\n") == 1);
  CHECK(line_of("[a]\nkind = nope\n") == 1);
  CHECK(line_of("[a]\nkind = lambda\nseeds = 3\n") == 3);
  CHECK(line_of("[a]\nkind = lambda\nassert = rho ~ 1\n") == 3);
  CHECK(line_of("[a]\nkind = lambda\n\nassert = mu == 1\n") == 4);
  CHECK(line_of("[a]\nkind = lambda\nassert = rho == lambda_x\n") == 3);
  CHECK(line_of("[a b]\n") == 1);
  CHECK(line_of("[a]\nkind = lambda\nk = 2\nk = 3\n") == 4);
  CHECK(line_of("[a]\nkind = lambda\nassert = rho <= lambda\n") == -1);
}

TEST_CASE("lambda table experiment") {
  ExperimentSpec spec = parse_experiment_spec_string("[t]\nkind = lambda\nk = 2..6\nassert = rho <= lambda\n");
  Config c;
  ExperimentResult r = run_experiment(spec, c, 2);
  CHECK(r.ok());
  std::string want = "k,rho,lambda,interval,config_digest\n";
  const char* rows[] = {"2,1/3,1/3,0", "3,1/3,2/3,1", "4,5/14,27/28,1", "5,9/25,32/25,1", "6,4/11,35/22,2"};
  for (const char* row : rows) want += std::string(row) + "," + c.digest() + "\n";
  CHECK(csv_of(r, 0) == want);
}

TEST_CASE("empty grid gives the header only") {
  ExperimentSpec spec = parse_experiment_spec_string("[e]\nkind = lambda\nk =\n");
  ExperimentResult r = run_experiment(spec, Config{}, 1);
  CHECK(r.sections.at(0).rows.empty());
  CHECK(csv_of(r, 0) == "k,rho,lambda,interval,config_digest\n");
  CHECK(r.ok());
}

TEST_CASE("failing assertions are listed") {
  ExperimentSpec spec = parse_experiment_spec_string("[t]\nkind = lambda\nk = 2..4\nassert = interval == 1\n");
  ExperimentResult r = run_experiment(spec, Config{}, 1);
  CHECK_FALSE(r.ok());
  REQUIRE(r.sections[0].failures.size() == 1);
  CHECK(r.sections[0].failures[0].cell == 0);
  CHECK(r.sections[0].failures[0].lhs_value == "0");
  Json fj = failures_json(r);
  CHECK(fj.size() == 1);
  CHECK(fj[0]["section"] == "t");
}

TEST_CASE("oracle dominance suite") {
  ExperimentSpec spec = parse_experiment_spec_string(
      "[dom]\nkind = dominance\nn = 8\nseeds = 50\nassert = best_strategy <= oracle\nassert = recount_ok == 1\n"
      "assert = random <= oracle\nassert = cut <= oracle\nassert = auto <= oracle\nassert = single_pair <= oracle\n");
  ExperimentResult r = run_experiment(spec, Config{}, 4);
  CHECK(r.sections[0].rows.size() == 50);
  CHECK(r.ok());
  for (std::size_t i = 0; i < r.sections[0].rows.size(); ++i) CHECK(r.sections[0].rows[i].cell == int(i));
}

TEST_CASE("bytes depend only on digest and seed") {
  const std::string text =
      "[b]\nkind = bisection\nn = 8..12\nseeds = 3\nassert = holds == 1\n"
      "[r]\nkind = tightness_regular\nn = 30\nd = 2,3,30\nseeds = 2\nsamples = 8\n"
      "[s]\nkind = tightness_random\nn = 100\nseeds = 2\n";
  ExperimentSpec spec = parse_experiment_spec_string(text);
  Config c;
  c.seed = 99;
  ExperimentResult a = run_experiment(spec, c, 1), b = run_experiment(spec, c, 4);
  for (std::size_t i = 0; i < a.sections.size(); ++i) CHECK(csv_of(a, i) == csv_of(b, i));
  CHECK(experiment_json(a).dump() == experiment_json(b).dump());
  CHECK(a.ok());
  // d >= n is not a cell
  CHECK(a.sections[1].rows.size() == 4);
  c.seed = 100;
  ExperimentResult other = run_experiment(spec, c, 2);
  CHECK(csv_of(other, 0) != csv_of(a, 0));
}

TEST_CASE("tightness scans record components") {
  ExperimentSpec spec = parse_experiment_spec_string("[s]\nkind = tightness_random\nn = 60\nseeds = 3\nclique = 3\n");
  ExperimentResult r = run_experiment(spec, Config{}, 2);
  const auto& cols = r.sections[0].columns;
  auto at = [&](const ExperimentRecord& row, const std::string& name) {
    return std::stoll(row.values[std::find(cols.begin(), cols.end(), name) - cols.begin()]);
  };
  Graph f = star_clique_path_guest(60, 1, 10, 3);
  for (const auto& row : r.sections[0].rows) {
    CHECK(at(row, "e_f") == f.edge_count());
    CHECK(at(row, "star_red") + at(row, "star_blue") == 54);
    CHECK(at(row, "clique_red") + at(row, "clique_blue") == 3);
    CHECK(at(row, "path_red") + at(row, "path_blue") == 1);
    CHECK(at(row, "star_red") + at(row, "clique_red") + at(row, "path_red") == at(row, "mono_plus"));
    CHECK(at(row, "discrepancy") == std::llabs(at(row, "mono_plus") - at(row, "mono_minus")));
  }
}

TEST_CASE("embedding strategy dispatch") {
  Graph f = cycle_graph(6);
  Coloring c = bipartite_construction(6, 1, 2);
  for (const char* s : {"random", "cut", "auto"}) {
    SwitchResult r = run_embed_strategy(s, f, c, rat(1, 10), Seed{1}, Config{});
    CHECK(r.report == discrepancy(c, f, r.embedding));
  }
  CHECK(run_embed_strategy("cut", f, c, rat(1, 10), Seed{1}, Config{}).report.discrepancy == 6);
  CHECK_THROWS_AS(run_embed_strategy("magic", f, c, rat(1, 10), Seed{1}, Config{}), ParameterError);
}
