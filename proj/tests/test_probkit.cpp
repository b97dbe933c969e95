#include <doctest.h>

#include <cmath>

#include "disc/error.hpp"
#include "disc/probkit.hpp"

using namespace disc;

namespace {

// C(P,a) C(Q,b) C(n-P-Q, k-a-b)
BigInt joint_count(int n, int k, int p, int q, int a, int b) {
  if (a > p || b > q || a + b > k || k - a - b > n - p - q) return 0;
  return binomial(p, a) * binomial(q, b) * binomial(n - p - q, k - a - b);
}

// Recomputes the coupling verdict from closed-form joint counts.
bool coupling_oracle(int n, int k, int p, int q) {
  BigInt total = binomial(n, k);
  if (p >= q) {
    BigInt ge = 0;
    for (int a = 0; a <= k; ++a)
      for (int b = 0; b <= a; ++b) ge += joint_count(n, k, p, q, a, b);
    if (2 * ge < total) return false;
  }
  for (int s = 0; s <= k; ++s)
    for (int t = 0; t <= k; ++t) {
      BigInt both = 0, ps = 0, qt = 0;
      for (int a = 0; a <= k; ++a)
        for (int b = 0; b <= k; ++b) {
          BigInt c = joint_count(n, k, p, q, a, b);
          if (a >= s) ps += c;
          if (b <= t) qt += c;
          if (a >= s && b <= t) both += c;
        }
      if (both * total < ps * qt) return false;
    }
  return true;
}

Bitset range(int n, int lo, int hi) {
  Bitset b(n);
  for (int i = lo; i < hi; ++i) b.set(i);
  return b;
}

}  // namespace

TEST_CASE("hypergeometric pmf") {
  CHECK(hypergeom_pmf({20, 10, 10}, 5) == rat(63504, 184756));
  CHECK(hypergeom_pmf({20, 10, 10}, 11) == 0);
  CHECK(hypergeom_pmf({20, 10, 10}, -1) == 0);
  CHECK(hypergeom_pmf({7, 7, 3}, 3) == 1);
  CHECK(hypergeom_pmf({7, 7, 3}, 2) == 0);
  for (std::int64_t n = 1; n <= 30; ++n)
    for (std::int64_t k = 1; k <= n; k += 3)
      for (std::int64_t p = 0; p <= n; p += 2) {
        HypergeomSpec s{n, k, p};
        auto counts = hypergeom_counts(s);
        Rational sum = 0;
        for (std::int64_t t = 0; t <= k; ++t) {
          CHECK(rat(counts[t], binomial(n, k)) == hypergeom_pmf(s, t));
          sum += hypergeom_pmf(s, t);
        }
        CHECK(sum == 1);
      }
  CHECK_THROWS_AS(hypergeom_pmf({5, 6, 1}, 0), ParameterError);
}

TEST_CASE("anticoncentration") {
  SUBCASE("single point") {
    BoundCheck bc = check_anticoncentration(rat(1, 2), {{20, 10, 10}});
    CHECK(bc.holds);
    CHECK(bc.squared);
    // window |5 - t| <= 0.5 sqrt(2.5): t in {5}
    CHECK(bc.rows.at(0).points == 1);
    CHECK(bc.lhs == rat(63504, 184756) * rat(63504, 184756));
    CHECK(bc.rhs == rat(49, 2500) * rat(1, 2) / rat(10, 4));
    CHECK(bc.margin == doctest::Approx(to_double(Rational(bc.lhs / bc.rhs))));
  }
  SUBCASE("sweep with k0") {
    std::vector<std::int64_t> ks;
    for (std::int64_t k = 100; k <= 2000; k += 100) ks.push_back(k);
    BoundCheck bc = check_anticoncentration(rat(1, 10), rat(1, 2), ks);
    CHECK(bc.rows.size() == ks.size());
    CHECK(bc.holds);
    REQUIRE(bc.k0.has_value());
    CHECK(*bc.k0 == 100);
    for (const auto& r : bc.rows) CHECK(r.n == minimal_population(rat(1, 10), rat(1, 2), r.k));
  }
  SUBCASE("witness re-evaluates") {
    BoundCheck bc = check_anticoncentration(rat(1, 4), rat(1, 3), {30, 60, 90});
    std::int64_t n = std::stoll(bc.witness.at("n")), k = std::stoll(bc.witness.at("k")),
                 p = std::stoll(bc.witness.at("p_count")), t = std::stoll(bc.witness.at("t"));
    Rational pmf = hypergeom_pmf({n, k, p}, t);
    CHECK(bc.lhs == pmf * pmf);
  }
  CHECK(minimal_population(rat(1, 10), rat(1, 2), 100) == 112);
  CHECK(minimal_population(rat(1, 2), rat(1, 3), 10) == 21);
  CHECK_THROWS_AS(check_anticoncentration(rat(1, 2), {{20, 11, 10}}), ParameterError);
  CHECK_THROWS_AS(check_anticoncentration(rat(0), {{20, 10, 10}}), ParameterError);
  CHECK_THROWS_AS(check_anticoncentration(rat(1, 4), {{20, 10, 2}}), ParameterError);
}

TEST_CASE("tails") {
  BoundCheck bc = check_tails(rat(1, 4), {{400, 200, 200}});
  CHECK(bc.holds);
  CHECK(bc.rhs == rat(1, 100));
  // symmetric case: both tails equal, recomputed directly
  auto counts = hypergeom_counts({400, 200, 200});
  // 0.1 * 0.25 * sqrt(200) ~ 0.354, so the tails start at 101 and 99
  BigInt up = 0, dn = 0;
  for (int t = 101; t <= 200; ++t) up += counts[t];
  for (int t = 0; t <= 99; ++t) dn += counts[t];
  CHECK(up == dn);
  CHECK(bc.lhs == rat(up, binomial(400, 200)));

  BoundCheck sweep = check_tails(rat(1, 10), rat(1, 2), {50, 100, 200});
  CHECK(sweep.rows.size() == 3);
  for (const auto& r : sweep.rows) CHECK(r.points == 2);
}

TEST_CASE("coupling") {
  SUBCASE("spec point") {
    BoundCheck bc = check_coupling(10, 4, range(10, 0, 3), range(10, 3, 5));
    CHECK(bc.holds);
    CHECK(coupling_oracle(10, 4, 3, 2));
    CHECK(bc.rows.at(0).points == 1 + 25);
  }
  SUBCASE("equal sizes") {
    BoundCheck bc = check_coupling(12, 5, range(12, 0, 4), range(12, 4, 8));
    CHECK(bc.holds);
  }
  SUBCASE("empty Q gives equality in item 2") {
    BoundCheck bc = check_coupling(9, 3, range(9, 0, 4), Bitset(9));
    CHECK(bc.holds);
    CHECK(bc.margin == doctest::Approx(1.0));
  }
  SUBCASE("agrees with closed-form oracle") {
    for (int n = 2; n <= 12; n += 2)
      for (int k = 1; k <= n; k += 2)
        for (int p = 0; p <= n; p += 3)
          for (int q = 0; p + q <= n; q += 2) {
            BoundCheck bc = check_coupling(n, k, range(n, 0, p), range(n, p, p + q));
            CHECK(bc.holds == coupling_oracle(n, k, p, q));
          }
  }
  CHECK_THROWS_AS(check_coupling(6, 2, range(6, 0, 3), range(6, 2, 4)), ParameterError);
  CHECK_THROWS_AS(check_coupling(25, 2, range(25, 0, 3), range(25, 3, 4)), CapacityError);
}

TEST_CASE("binomial fact") {
  BoundCheck bc = check_binomial_fact(2000);
  CHECK(bc.holds);
  CHECK(bc.rows.size() == 2000);
  // n = 1: P[Z >= 1/2] = 1/2 exactly
  CHECK(bc.lhs == rat(1, 2));
}

TEST_CASE("random matching") {
  BoundCheck bc = mc_random_matching(1000, 500, 200, rat(1, 2), 100'000, Seed{7});
  CHECK(bc.statistical);
  CHECK(bc.holds);
  CHECK(bc.estimate + 3 * bc.sigma >= 5.0 / 6.0);
  BoundCheck again = mc_random_matching(1000, 500, 200, rat(1, 2), 100'000, Seed{7});
  CHECK(again.estimate == bc.estimate);

  BoundCheck one = mc_random_matching(50, 20, 1, rat(1, 4), 10'000, Seed{1});
  CHECK(one.estimate == 1.0);

  CHECK_THROWS_AS(mc_random_matching(100, 100, 10, rat(1, 4), 10'000, Seed{}), ParameterError);
  CHECK_THROWS_AS(mc_random_matching(100, 50, 51, rat(1, 4), 10'000, Seed{}), ParameterError);
  CHECK_THROWS_AS(mc_random_matching(100, 50, 10, rat(1, 4), 100, Seed{}), ParameterError);
}

TEST_CASE("sqrt deviation") {
  SUBCASE("Q and B empty: curve matches exact hypergeometric tails") {
    const std::int64_t n = 200, p = 100, a = 64, trials = 40'000;
    SqrtDeviationEstimate e = mc_sqrt_deviation(n, p, 0, a, 0, rat(1, 4), trials, Seed{3});
    auto counts = hypergeom_counts({n, a, p});
    BigInt total = binomial(n, a);
    for (auto [rho, phat] : e.curve) {
      std::int64_t thr = static_cast<std::int64_t>(std::ceil(rho * 8.0 - 1e-12));
      BigInt tail = 0;
      for (std::int64_t t = std::max<std::int64_t>(thr, 0); t <= a; ++t) tail += counts[t];
      double exact = to_double(rat(tail, total));
      double sd = std::sqrt(exact * (1 - exact) / double(trials));
      CHECK(std::abs(phat - exact) <= 5 * sd + 1e-9);
    }
    CHECK(e.positive);
  }
  SUBCASE("spec point") {
    SqrtDeviationEstimate e = mc_sqrt_deviation(2000, 1000, 500, 400, 200, rat(1, 2), 100'000, Seed{11});
    CHECK(e.positive);
    CHECK(e.rho_lo <= e.rho_hat);
    CHECK(e.rho_hat <= e.rho_hi);
    CHECK(e.curve.size() == 21);
  }
  CHECK_THROWS_AS(mc_sqrt_deviation(100, 30, 40, 10, 5, rat(1, 4), 100, Seed{}), ParameterError);
  CHECK_THROWS_AS(mc_sqrt_deviation(100, 50, 10, 10, 11, rat(1, 4), 100, Seed{}), ParameterError);
}
