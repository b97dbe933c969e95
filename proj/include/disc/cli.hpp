#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "disc/graph.hpp"
#include "disc/json_io.hpp"
#include "disc/probkit.hpp"
#include "disc/rational.hpp"
#include "disc/rng.hpp"
#include "disc/switchembed.hpp"

namespace disc {

inline constexpr const char* kConfigEnv = "DISCLAB_CONFIG";
inline constexpr int kCsvVersion = 1;

struct Config {
  Rational beta = rat(1, 1000);
  Rational delta = rat(1, 20);
  Rational rho_switch = rat(1, 100);
  Rational gamma = rat(1, 10000);
  int trials = 64;
  std::int64_t budget = 20'000;
  int oracle_cap = 9;
  std::uint64_t seed = 0;
  std::string format = "text";  // text | json

  SwitchParams switch_params() const;
  // One "key = value" line per field, fixed order.
  std::string canonical() const;
  // FNV-1a 64 of canonical(), 16 hex digits.
  std::string digest() const;
};

// Lines "key = value"; '#' starts a comment. Unknown keys and values outside
// their range raise ParseError with the line number.
Config parse_config(std::istream& in);
Config parse_config_string(const std::string& text);
Config load_config(const std::string& path);
// Explicit path, else $DISCLAB_CONFIG, else defaults.
Config resolve_config(const std::string& path);

std::uint64_t fnv1a64(const std::string& bytes);
std::string hex64(std::uint64_t v);

// Integer and rational lists: "2..6", "100..1000:100", "1,3,5", "" (empty).
std::vector<std::int64_t> parse_int_list(const std::string& text);
std::vector<Rational> parse_rational_list(const std::string& text);

struct Assertion {
  std::string lhs;
  std::string op;  // == != < <= > >=
  std::string rhs;  // column name or number
  int line = 0;
  std::string text;
};

struct Section {
  std::string name;
  std::string kind;
  int line = 0;
  std::map<std::string, std::string> params;
  std::map<std::string, int> param_lines;
  std::vector<Assertion> asserts;
};

struct ExperimentSpec {
  std::vector<Section> sections;
};

// Known kinds: lambda, tightness_random, tightness_regular, dominance,
// bisection, anticoncentration.
const std::vector<std::string>& experiment_kinds();
// Output columns of a kind, without the trailing config_digest.
std::vector<std::string> experiment_columns(const std::string& kind);

ExperimentSpec parse_experiment_spec(std::istream& in);
ExperimentSpec parse_experiment_spec_string(const std::string& text);
ExperimentSpec load_experiment_spec(const std::string& path);

struct ExperimentRecord {
  int cell = 0;
  std::uint64_t seed = 0;
  std::vector<std::string> values;  // aligned with the section columns
  double wall_ms = 0;
};

struct AssertionFailure {
  std::string section;
  int cell = 0;
  std::string assertion;
  std::string lhs_value;
  std::string rhs_value;
};

struct SectionResult {
  std::string name;
  std::string kind;
  std::vector<std::string> columns;
  std::vector<ExperimentRecord> rows;  // sorted by cell
  std::vector<AssertionFailure> failures;
};

struct ExperimentResult {
  std::string config_digest;
  std::vector<SectionResult> sections;
  bool ok() const;
};

// Cells of every section run on `threads` workers; cell i of section s uses
// derive(derive(seed, s), i).
ExperimentResult run_experiment(const ExperimentSpec& spec, const Config& config, int threads);

// Header plus one row per cell; config_digest is the last column.
void write_csv(std::ostream& out, const SectionResult& section, const std::string& digest);
Json experiment_json(const ExperimentResult& r, bool timing = false);
Json failures_json(const ExperimentResult& r);

Json bound_check_json(const BoundCheck& b);
Json sqrt_deviation_json(const SqrtDeviationEstimate& e);

// Dispatch for `disc embed --strategy`: random, cut, auto, switch,
// single-pair, greedy-switch.
SwitchResult run_embed_strategy(const std::string& strategy, const Graph& f, const Coloring& coloring,
                                const Rational& eps, Seed seed, const Config& config);

}  // namespace disc
