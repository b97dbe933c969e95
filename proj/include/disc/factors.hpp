#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "disc/graph.hpp"
#include "disc/json_io.hpp"
#include "disc/rational.hpp"
#include "disc/rng.hpp"

namespace disc {

struct RhoLambda {
  Rational rho;
  Rational lambda;
  int interval = 0;  // floor(k rho)
};

// Piecewise-linear solve of (k-1) rho = (k - i - 1)(i/k + 1 - 2 rho), i = floor(k rho).
// Throws std::logic_error if uniqueness, f = g, or lambda <= (k-1)/3 fails.
RhoLambda solve_rho_lambda(int k);

// Best blue share (k-1)(1-rho)/2 and best red share of the ratio-rho construction, per vertex.
Rational lambda_blue_side(int k, const Rational& rho);
Rational lambda_red_side(int k, const Rational& rho);

struct KkFactor {
  int k = 0;
  std::vector<std::vector<int>> blocks;
  std::int64_t red_count = 0;
  std::int64_t blue_count = 0;
  bool adjusted = false;  // rho n not integral; profile built for |X| = floor(rho n)

  std::int64_t count(Color c) const { return c == Color::red ? red_count : blue_count; }
};

// Empty when blocks are disjoint k-sets covering 0..n-1.
std::string kk_factor_violation(int n, int k, const std::vector<std::vector<int>>& blocks);
// Validates and counts.
KkFactor make_kk_factor(const Coloring& coloring, int k, std::vector<std::vector<int>> blocks);

// |Y| = qk + r: q C(k,2) + C(r,2).
std::int64_t kk_bipartite_blue_optimum(int n, int k, int x);
// a_j blocks with j X-vertices and a_{j+1} with j+1, j = floor(kx/n).
std::int64_t kk_bipartite_red_optimum(int n, int k, int x);
// ((k-1)/2 - (k-j-1)/2 (j/k + 1 - 2 rho)) n
Rational kk_bipartite_red_formula(int n, int k, const Rational& rho);

KkFactor opt_kk_factor_bipartite(int n, int k, const Rational& rho, Color color);
KkFactor kk_factor_two_cliques(int m, int k, Color color);

enum class FmVariant { D, D_bar, C, C_bar };
const char* name(FmVariant v);

// D: the first part is a blue m-clique, every other pair red. D_bar: the same
// with colours exchanged. C: both parts red cliques, cross pairs blue. C_bar: swapped.
struct FmWitness {
  std::vector<int> vertices;
  FmVariant variant = FmVariant::D;
  std::pair<std::vector<int>, std::vector<int>> part_split;
};

std::string witness_violation(const Coloring& coloring, int m, const FmWitness& w);

struct UnavoidableOptions {
  int clique_multiple = 4;
  std::int64_t budget = 1'000'000;
};

struct UnavoidableResult {
  std::string status;  // found | imbalanced | not_found
  std::optional<FmWitness> witness;
  Color sparse_color = Color::red;
  std::int64_t sparse_count = 0;
  std::int64_t probes = 0;
  std::string stage;
};

UnavoidableResult find_unavoidable(const Coloring& coloring, int m, const Rational& eps,
                                   const UnavoidableOptions& opt = {});

// First-improvement vertex swaps between blocks, maximising colour c.
KkFactor polish_kk_factor(const Coloring& coloring, const KkFactor& f, Color c, int max_passes = 50);

struct KkDriverResult {
  KkFactor factor;
  Color color = Color::red;
  std::int64_t count = 0;
  int m = 0;
  int j_blocks = 0;
  int i_red = 0;
  int i_blue = 0;
  int w_size = 0;
  Rational alpha;
  std::string case_taken;  // alpha>2/3 | alpha<=2/3
  std::string strategy;
  std::string stop_reason;
  bool extraction_complete = false;
  Rational target;
  bool target_met = false;
  std::map<std::string, std::string> notes;
};

KkDriverResult kk_factor_driver(const Coloring& coloring, int k, const Rational& eps, Seed seed,
                                const UnavoidableOptions& opt = {});

struct TwoFactor {
  std::vector<std::vector<int>> cycles;

  int n() const;
  Graph graph() const;
};

std::string two_factor_violation(const TwoFactor& f);
// Cycles of the given lengths on consecutive vertices.
TwoFactor two_factor_from_lengths(const std::vector<int>& lengths);
// Cycle decomposition of a 2-regular graph; throws ParameterError otherwise.
TwoFactor two_factor_from_graph(const Graph& g);
// Nondecreasing cycle-length multisets summing to n.
std::vector<std::vector<int>> two_factor_shapes(int n);

// parts[0] is the remainder (fewer than k vertices); parts[i] the i-th k-slice.
std::vector<std::vector<int>> cycle_partition(const TwoFactor& f, int k);

struct TwoFactorEmbed {
  Embedding embedding;
  Color color = Color::red;
  std::int64_t count = 0;
  std::int64_t bound = 0;
};

// Host bipartite_construction(3k, 1/3). Red: independent k-set onto X, exactly 2k.
// Blue: cycle-order layout onto Y, at least 2k - 1.
TwoFactorEmbed embed_2factor_bipartite(const TwoFactor& f, Color color);
// Host two_cliques_coloring(2k, red). Red at least 4k - 2, blue at least ceil(8k/3).
TwoFactorEmbed embed_2factor_two_cliques(const TwoFactor& f, Color color);

struct TwoFactorParams {
  std::optional<int> k_override;
  Rational imbalance = rat(1, 3);
  UnavoidableOptions search;
};

struct ModifiedTwoFactor {
  TwoFactor modified;
  std::vector<std::vector<int>> parts;  // each induces a 2-factor of modified
  std::int64_t added = 0;
  std::int64_t removed = 0;
};

// Closes every part of cycle_partition(f, k) into a union of cycles.
ModifiedTwoFactor close_parts(const TwoFactor& f, int k);

struct TwoFactorDriverResult {
  Embedding embedding;
  Color color = Color::red;
  std::int64_t count = 0;
  DiscrepancyReport report;
  int k = 0;
  int j_blocks = 0;
  int c_blocks = 0;
  int w_size = 0;
  std::int64_t modifications = 0;
  std::string strategy;
  std::string stop_reason;
  bool extraction_complete = false;
  Rational target;
  bool target_met = false;
  std::map<std::string, std::string> notes;
};

TwoFactorDriverResult two_factor_driver(const Coloring& coloring, const TwoFactor& f, const Rational& eps,
                                        Seed seed, const TwoFactorParams& params = {});

Json kk_factor_json(const KkFactor& f);
Json two_factor_json(const TwoFactor& f);
TwoFactor two_factor_from_json(const Json& j);
Json witness_json(const FmWitness& w);
Json unavoidable_json(const UnavoidableResult& r);
Json kk_driver_json(const KkDriverResult& r);
Json two_factor_driver_json(const TwoFactorDriverResult& r);

}  // namespace disc
