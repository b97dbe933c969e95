#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "disc/bitset.hpp"
#include "disc/graph.hpp"
#include "disc/json_io.hpp"
#include "disc/rational.hpp"
#include "disc/rng.hpp"

namespace disc {

struct SwitchParams {
  Rational beta = rat(1, 1000);
  Rational delta = rat(1, 20);
  Rational rho = rat(1, 100);
  int trials = 64;
  int retries = 16;
  int host_attempts = 8;
  std::int64_t search_budget = 20'000;
};

struct GuestCertificate {
  Bitset u_side;
  std::vector<std::pair<int, int>> pairs;
  std::vector<std::int64_t> d_values;
  bool u_independent = false;

  // sum of sqrt(d_i)
  double value_t() const;
  // Exact rational lower bound on value_t (2^-20 resolution per term).
  Rational value_t_lower() const;
};

struct HostCertificate {
  Bitset x_side;
  std::vector<std::pair<int, int>> pairs;
  Rational beta;
};

// ceil(n / 20)
inline int host_pair_count(int n) { return (n + 19) / 20; }

// Empty string when every defining condition holds; otherwise the first violation.
std::string guest_certificate_violation(const Graph& f, const GuestCertificate& gc);
std::string host_certificate_violation(const Coloring& coloring, const HostCertificate& hc);

struct HostCertifyResult {
  std::optional<HostCertificate> certificate;
  std::string failure;  // x_med_empty | symmetric_difference_window_starved | insufficient_pairs
  int x_med = 0;        // best attempt
  int pairs_found = 0;
};

HostCertifyResult certify_host(const Coloring& coloring, const Rational& beta, Seed seed, int attempts = 8);

// Random balanced partition, U* filter, greedy pairs; stops at max_pairs
// (default floor(n/100), at most floor(n/20)). Retries with derived seeds.
GuestCertificate certify_guest_regular(const Graph& f, Seed seed, int retries = 16, int max_pairs = -1);

struct GuestIndependentResult {
  GuestCertificate certificate;
  bool complete = false;      // floor(n/20) pairs reached
  std::string diagnostic;     // set when incomplete
  int max_degree_vertex = -1; // V-vertex of largest degree
};

GuestIndependentResult certify_guest_independent(const Graph& f, const Bitset& indep);

struct SwitchResult {
  Embedding embedding;
  DiscrepancyReport report;
  std::string strategy;
  std::string case_taken;
  Rational certificate_value;  // bound the branch claims (lower bound on the gap or discrepancy)
  std::int64_t gap = 0;        // count_1 - count_2 between the two switched copies
  std::vector<std::int64_t> deltas;
  std::map<std::string, std::string> notes;
};

// D_i for each certified pair under g (g[v] = host of v for v outside U),
// after orienting guest pairs by |V_i| >= |V'_i| and host pairs by |Y_i| >= |Y'_i|.
std::vector<std::int64_t> switch_pair_deltas(const Graph& f, const GuestCertificate& gc, const Coloring& coloring,
                                             const HostCertificate& hc, const std::vector<int>& g);

SwitchResult main_switch_embed(const Graph& f, const GuestCertificate& gc, const Coloring& coloring,
                               const HostCertificate& hc, const SwitchParams& params, Seed seed);

SwitchResult single_pair_switch_embed(const Graph& f, const Coloring& coloring, const Rational& eps,
                                      const Rational& delta = rat(1, 20));

// Lowest-index greedy maximal independent set.
Bitset greedy_independent_set(const Graph& f);

SwitchResult greedy_switch_embed(const Graph& f, const Coloring& coloring, const HostCertificate& hc,
                                 const Rational& delta);

SwitchResult embed_bounded_degree(const Graph& f, const Coloring& coloring, const Rational& eps, Seed seed,
                                  const SwitchParams& params = {});

SwitchResult embed_regular(const Graph& f, const Coloring& coloring, const Rational& eps, Seed seed,
                           const SwitchParams& params = {});

// Single branches of the drivers: density-guaranteed greedy embedding in the
// majority colour, and cut_embed on the most biased bisections found.
SwitchResult expectation_strategy(const Graph& f, const Coloring& coloring);
SwitchResult cut_strategy(const Graph& f, const Coloring& coloring, Seed seed, const SwitchParams& params = {});

Json guest_certificate_json(const GuestCertificate& gc);
Json host_certificate_json(const HostCertificate& hc);
Json switch_result_json(const SwitchResult& r);

}  // namespace disc
