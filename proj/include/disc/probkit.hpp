#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "disc/bitset.hpp"
#include "disc/rational.hpp"
#include "disc/rng.hpp"

namespace disc {

// |A ∩ P| for A a uniform k-subset of an n-set and |P| = p_count.
struct HypergeomSpec {
  std::int64_t n = 0;
  std::int64_t k = 0;
  std::int64_t p_count = 0;
};

Rational hypergeom_pmf(const HypergeomSpec& spec, std::int64_t t);

// C(P,t) C(n-P,k-t) for t = 0..k; divide by C(n,k) for probabilities.
std::vector<BigInt> hypergeom_counts(const HypergeomSpec& spec);

struct BoundRow {
  std::int64_t k = 0;
  std::int64_t n = 0;
  std::int64_t p_count = 0;
  bool holds = true;
  double margin = 0;  // smallest lhs/rhs over the checked points of this row
  std::int64_t points = 0;
};

// lhs >= rhs is checked at every point. For bounds with a square root both
// sides are stored squared (`squared` is then true). `margin` is lhs/rhs at
// the witness, the point of smallest ratio.
struct BoundCheck {
  bool holds = true;
  Rational lhs;
  Rational rhs;
  bool squared = false;
  double margin = 0;
  std::map<std::string, std::string> witness;
  std::optional<std::int64_t> k0;  // smallest grid k from which every larger grid k holds
  std::vector<BoundRow> rows;
  bool statistical = false;
  double estimate = 0;  // MC checks
  double sigma = 0;
  std::int64_t trials = 0;
};

// Smallest n >= k / (1 - eta) with p n integral.
std::int64_t minimal_population(const Rational& eta, const Rational& p, std::int64_t k);

// Pointwise bound pmf(t) >= 0.14 sqrt(eta / (p(1-p)k)) for every t with
// |pk - t| <= 0.5 sqrt(p(1-p) min(k, n-k)).
BoundCheck check_anticoncentration(const Rational& eta, const std::vector<HypergeomSpec>& points);
BoundCheck check_anticoncentration(const Rational& eta, const Rational& p, const std::vector<std::int64_t>& k_grid);

// P[X >= pk + 0.1 eta sqrt(k)] >= 0.04 eta and P[X <= pk - 0.1 eta sqrt(k)] >= 0.04 eta.
BoundCheck check_tails(const Rational& eta, const std::vector<HypergeomSpec>& points);
BoundCheck check_tails(const Rational& eta, const Rational& p, const std::vector<std::int64_t>& k_grid);

// Exhaustive over all k-subsets A (n <= 24):
//   (1) P[|A∩P| >= |A∩Q|] >= 1/2 when |P| >= |Q|;
//   (2) P[|A∩P| >= s, |A∩Q| <= t] >= P[|A∩P| >= s] P[|A∩Q| <= t] for all s, t.
BoundCheck check_coupling(int n, int k, const Bitset& p, const Bitset& q);

// P[Bin(n, 1/2) >= n/2] >= 1/2 for every n in 1..n_max, exactly.
BoundCheck check_binomial_fact(std::int64_t n_max);

// Uniform k-matchings of an n-set with P = {0..p_count-1}; estimates
// P[at least floor(eta k / 25) matching edges cross P] and gates it against 5/6
// with a one-sided 3 sigma margin.
BoundCheck mc_random_matching(std::int64_t n, std::int64_t p_count, std::int64_t k, const Rational& eta,
                              std::int64_t trials, Seed seed);

struct SqrtDeviationEstimate {
  double rho_hat = 0;  // sup{rho : P^[Z >= rho sqrt(a)] >= rho}
  double rho_lo = 0;   // same with P^ lowered by 3 sigma
  double rho_hi = 0;
  std::vector<std::pair<double, double>> curve;  // (rho, P^[Z >= rho sqrt(a)])
  std::int64_t trials = 0;
  bool positive = false;  // rho_lo > 0
};

// Disjoint uniform A (size a) and B (size b); Z = |A∩P| - |A∩Q| - |B∩P| + |B∩Q|
// with P = {0..p_count-1}, Q = {p_count..p_count+q_count-1}.
SqrtDeviationEstimate mc_sqrt_deviation(std::int64_t n, std::int64_t p_count, std::int64_t q_count, std::int64_t a,
                                        std::int64_t b, const Rational& eta, std::int64_t trials, Seed seed);

}  // namespace disc
