#pragma once

#include <cstdint>

#include "disc/graph.hpp"
#include "disc/rational.hpp"
#include "disc/rng.hpp"

namespace disc {

enum class Direction { max, min };

struct Bisection {
  Bitset u_side;  // |U| = floor(n/2)
  std::int64_t cut_size = 0;
  Rational deviation;  // cut_size - e/2
};

// Validates |U| = floor(n/2) and fills in cut size and deviation.
Bisection make_bisection(const Graph& f, Bitset u_side);
bool valid_bisection(const Graph& f, const Bisection& b);

// Optimum over all floor(n/2)-subsets; ties go to the lexicographically
// smallest U. Capacity: n <= 30.
Bisection exhaustive_extremal_bisection(const Graph& f, Direction dir);

// Seeded restarts of swap hill climbing (first improvement, index order).
// `budget` bounds the total number of evaluated swaps.
Bisection local_search_bisection(const Graph& f, Direction dir, std::int64_t budget, Seed seed);

// Exhaustive below 21 vertices, local search above.
Bisection extremal_bisection(const Graph& f, Direction dir, std::int64_t budget, Seed seed);

struct DiscPM {
  Rational disc_plus;
  Rational disc_minus;
  Bitset witness_plus;
  Bitset witness_minus;
  bool exact = true;
};

// disc(U) = e(U) - p * C(|U|, 2) with p = e(F) / C(n, 2).
Rational disc_of(const Graph& f, const Bitset& u);

inline constexpr int kDiscExactCap = 24;

// Exact by Gray-code enumeration for n <= 24; otherwise sampled flips with
// hill climbing, and `exact` is false.
DiscPM disc_pm(const Graph& f, Seed seed = Seed{0}, int restarts = 64);

}  // namespace disc
