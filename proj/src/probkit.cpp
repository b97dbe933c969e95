#include "disc/probkit.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "disc/error.hpp"

namespace disc {

namespace {

void check_spec(const HypergeomSpec& s) {
  if (s.n < 1 || s.k < 1 || s.k > s.n || s.p_count < 0 || s.p_count > s.n)
    throw ParameterError("hypergeometric spec out of range");
}

double ratio(const Rational& lhs, const Rational& rhs) {
  if (rhs == 0) return lhs == 0 ? 1.0 : HUGE_VAL;
  return to_double(Rational(lhs / rhs));
}

void check_eta(const Rational& eta) {
  if (eta <= 0 || eta > rat(1, 2)) throw ParameterError("eta must lie in (0, 1/2]");
}

void check_point(const Rational& eta, const HypergeomSpec& s) {
  check_spec(s);
  Rational p = rat(s.p_count, s.n);
  if (p < eta || p > 1 - eta) throw ParameterError("p outside [eta, 1 - eta]");
  if (Rational(big(s.k)) > (1 - eta) * big(s.n)) throw ParameterError("grid violates k <= (1 - eta) n");
}

std::vector<HypergeomSpec> grid_points(const Rational& eta, const Rational& p, const std::vector<std::int64_t>& ks) {
  std::vector<HypergeomSpec> out;
  for (std::int64_t k : ks) {
    std::int64_t n = minimal_population(eta, p, k);
    out.push_back({n, k, to_int64(BigInt(p * big(n)))});
  }
  return out;
}

void record(BoundCheck& bc, BoundRow& row, const Rational& lhs, const Rational& rhs,
            std::map<std::string, std::string> where) {
  bool ok = lhs >= rhs;
  double m = ratio(lhs, rhs);
  ++row.points;
  if (!ok) row.holds = false;
  if (row.points == 1 || m < row.margin) row.margin = m;
  if (!ok) bc.holds = false;
  if (bc.witness.empty() || m < bc.margin) {
    bc.margin = m;
    bc.lhs = lhs;
    bc.rhs = rhs;
    bc.witness = std::move(where);
  }
}

void finish_k0(BoundCheck& bc) {
  std::vector<BoundRow> sorted = bc.rows;
  std::stable_sort(sorted.begin(), sorted.end(), [](const BoundRow& a, const BoundRow& b) { return a.k < b.k; });
  bc.k0.reset();
  for (auto it = sorted.rbegin(); it != sorted.rend() && it->holds; ++it) bc.k0 = it->k;
}

std::map<std::string, std::string> where(const HypergeomSpec& s, std::int64_t t, const char* side = nullptr) {
  std::map<std::string, std::string> w{{"n", std::to_string(s.n)},
                                       {"k", std::to_string(s.k)},
                                       {"p_count", std::to_string(s.p_count)},
                                       {"t", std::to_string(t)}};
  if (side) w["side"] = side;
  return w;
}

}  // namespace

std::vector<BigInt> hypergeom_counts(const HypergeomSpec& s) {
  check_spec(s);
  const std::int64_t p = s.p_count, q = s.n - s.p_count, k = s.k;
  std::vector<BigInt> out(k + 1, 0);
  std::int64_t lo = std::max<std::int64_t>(0, k - q), hi = std::min(k, p);
  BigInt term = binomial(p, lo) * binomial(q, k - lo);
  for (std::int64_t t = lo; t <= hi; ++t) {
    out[t] = term;
    if (t == hi) break;
    term *= big(p - t);
    mpz_divexact(term.get_mpz_t(), term.get_mpz_t(), big(t + 1).get_mpz_t());
    term *= big(k - t);
    mpz_divexact(term.get_mpz_t(), term.get_mpz_t(), big(q - k + t + 1).get_mpz_t());
  }
  return out;
}

Rational hypergeom_pmf(const HypergeomSpec& s, std::int64_t t) {
  check_spec(s);
  if (t < 0 || t > s.k) return 0;
  return rat(binomial(s.p_count, t) * binomial(s.n - s.p_count, s.k - t), binomial(s.n, s.k));
}

std::int64_t minimal_population(const Rational& eta, const Rational& p, std::int64_t k) {
  std::int64_t n = to_int64(ceil(Rational(big(k) / (1 - eta))));
  std::int64_t den = to_int64(p.get_den());
  return (n + den - 1) / den * den;
}

BoundCheck check_anticoncentration(const Rational& eta, const std::vector<HypergeomSpec>& points) {
  check_eta(eta);
  BoundCheck bc;
  bc.squared = true;
  for (const auto& s : points) {
    check_point(eta, s);
    Rational p = rat(s.p_count, s.n);
    Rational pq = p * (1 - p);
    Rational pk = p * big(s.k);
    Rational window_sq = pq * big(std::min(s.k, s.n - s.k)) / 4;
    Rational bound_sq = rat(49, 2500) * eta / (pq * big(s.k));
    auto counts = hypergeom_counts(s);
    BigInt total = binomial(s.n, s.k);
    BoundRow row{s.k, s.n, s.p_count, true, 0, 0};
    std::int64_t t0 = to_int64(floor(pk));
    for (std::int64_t t = t0; t <= s.k; ++t) {
      Rational d = pk - big(t);
      if (d * d > window_sq) break;
      Rational pmf = rat(counts[t], total);
      record(bc, row, pmf * pmf, bound_sq, where(s, t));
    }
    for (std::int64_t t = t0 - 1; t >= 0; --t) {
      Rational d = pk - big(t);
      if (d * d > window_sq) break;
      Rational pmf = rat(counts[t], total);
      record(bc, row, pmf * pmf, bound_sq, where(s, t));
    }
    bc.rows.push_back(row);
  }
  finish_k0(bc);
  return bc;
}

BoundCheck check_anticoncentration(const Rational& eta, const Rational& p, const std::vector<std::int64_t>& k_grid) {
  check_eta(eta);
  return check_anticoncentration(eta, grid_points(eta, p, k_grid));
}

BoundCheck check_tails(const Rational& eta, const std::vector<HypergeomSpec>& points) {
  check_eta(eta);
  BoundCheck bc;
  const Rational target = eta / 25;
  for (const auto& s : points) {
    check_point(eta, s);
    Rational pk = rat(s.p_count * s.k, s.n);
    Rational gap_sq = eta * eta * big(s.k) / 100;
    auto counts = hypergeom_counts(s);
    BigInt total = binomial(s.n, s.k);
    BoundRow row{s.k, s.n, s.p_count, true, 0, 0};

    std::int64_t t_up = to_int64(ceil(pk));
    while (true) {
      Rational d = Rational(big(t_up)) - pk;
      if (d * d >= gap_sq) break;
      ++t_up;
    }
    BigInt up = 0;
    for (std::int64_t t = std::max<std::int64_t>(t_up, 0); t <= s.k; ++t) up += counts[t];
    record(bc, row, rat(up, total), target, where(s, t_up, "upper"));

    std::int64_t t_dn = to_int64(floor(pk));
    while (true) {
      Rational d = pk - big(t_dn);
      if (d * d >= gap_sq) break;
      --t_dn;
    }
    BigInt dn = 0;
    for (std::int64_t t = 0; t <= std::min(t_dn, s.k); ++t) dn += counts[t];
    record(bc, row, rat(dn, total), target, where(s, t_dn, "lower"));
    bc.rows.push_back(row);
  }
  finish_k0(bc);
  return bc;
}

BoundCheck check_tails(const Rational& eta, const Rational& p, const std::vector<std::int64_t>& k_grid) {
  check_eta(eta);
  return check_tails(eta, grid_points(eta, p, k_grid));
}

BoundCheck check_coupling(int n, int k, const Bitset& p, const Bitset& q) {
  if (n > 24 || n < 1) throw CapacityError("coupling enumeration supports 1 <= n <= 24");
  if (k < 0 || k > n) throw ParameterError("k outside 0..n");
  if (p.size() != n || q.size() != n) throw DimensionError("P, Q must be subsets of the n-set");
  if (p.count_and(q)) throw ParameterError("P and Q overlap");
  std::uint32_t pm = 0, qm = 0;
  p.for_each([&](int v) { pm |= 1u << v; });
  q.for_each([&](int v) { qm |= 1u << v; });

  std::vector<std::vector<std::int64_t>> joint(k + 1, std::vector<std::int64_t>(k + 1, 0));
  std::int64_t total = 0;
  if (k == 0) {
    joint[0][0] = 1;
    total = 1;
  } else {
    const std::uint64_t limit = std::uint64_t{1} << n;
    for (std::uint64_t m = (std::uint64_t{1} << k) - 1; m < limit;) {
      std::uint32_t a = static_cast<std::uint32_t>(m);
      ++joint[std::popcount(a & pm)][std::popcount(a & qm)];
      ++total;
      std::uint64_t c = m & -m, r = m + c;
      m = (((r ^ m) >> 2) / c) | r;
    }
  }

  BoundCheck bc;
  BoundRow row{k, n, p.count(), true, 0, 0};
  auto wh = [&](const std::string& item, int s, int t) {
    return std::map<std::string, std::string>{{"n", std::to_string(n)},          {"k", std::to_string(k)},
                                              {"p", std::to_string(p.count())}, {"q", std::to_string(q.count())},
                                              {"item", item},                   {"s", std::to_string(s)},
                                              {"t", std::to_string(t)}};
  };
  if (p.count() >= q.count()) {
    std::int64_t ge = 0;
    for (int a = 0; a <= k; ++a)
      for (int b = 0; b <= a; ++b) ge += joint[a][b];
    record(bc, row, rat(ge, total), rat(1, 2), wh("1", -1, -1));
  }
  for (int s = 0; s <= k; ++s)
    for (int t = 0; t <= k; ++t) {
      std::int64_t both = 0, ps = 0, qt = 0;
      for (int a = 0; a <= k; ++a)
        for (int b = 0; b <= k; ++b) {
          if (a >= s) ps += joint[a][b];
          if (b <= t) qt += joint[a][b];
          if (a >= s && b <= t) both += joint[a][b];
        }
      record(bc, row, rat(both, total), rat(ps, total) * rat(qt, total), wh("2", s, t));
    }
  bc.rows.push_back(row);
  return bc;
}

BoundCheck check_binomial_fact(std::int64_t n_max) {
  BoundCheck bc;
  std::vector<BigInt> row{1};
  for (std::int64_t n = 1; n <= n_max; ++n) {
    std::vector<BigInt> next(n + 1);
    next[0] = next[n] = 1;
    for (std::int64_t i = 1; i < n; ++i) next[i] = row[i - 1] + row[i];
    row.swap(next);
    BigInt upper = 0;
    for (std::int64_t i = (n + 1) / 2; i <= n; ++i) upper += row[i];
    BigInt all;
    mpz_ui_pow_ui(all.get_mpz_t(), 2, static_cast<unsigned long>(n));
    BoundRow r{n, n, 0, true, 0, 0};
    record(bc, r, rat(upper, all), rat(1, 2), {{"n", std::to_string(n)}});
    bc.rows.push_back(r);
  }
  return bc;
}

BoundCheck mc_random_matching(std::int64_t n, std::int64_t p_count, std::int64_t k, const Rational& eta,
                              std::int64_t trials, Seed seed) {
  check_eta(eta);
  if (n < 2 * k || k < 1) throw ParameterError("need 1 <= k and 2k <= n");
  Rational p = rat(p_count, n);
  if (p < eta || p > 1 - eta) throw ParameterError("p outside [eta, 1 - eta]");
  if (trials < 10'000) throw ParameterError("at least 10^4 trials required");

  Rng rng(seed);
  std::vector<std::int64_t> verts(n);
  for (std::int64_t i = 0; i < n; ++i) verts[i] = i;
  const std::int64_t need = to_int64(floor(Rational(eta * big(k) / 25)));
  std::int64_t hits = 0;
  for (std::int64_t tr = 0; tr < trials; ++tr) {
    rng.partial_shuffle(verts, static_cast<std::size_t>(2 * k));
    std::int64_t cross = 0;
    for (std::int64_t i = 0; i < k; ++i) cross += (verts[2 * i] < p_count) != (verts[2 * i + 1] < p_count);
    if (cross >= need) ++hits;
  }
  BoundCheck bc;
  bc.statistical = true;
  bc.trials = trials;
  bc.estimate = double(hits) / double(trials);
  bc.sigma = std::sqrt(bc.estimate * (1 - bc.estimate) / double(trials));
  bc.lhs = rat(hits, trials);
  bc.rhs = rat(5, 6);
  bc.margin = bc.estimate / (5.0 / 6.0);
  bc.holds = bc.estimate + 3 * bc.sigma >= 5.0 / 6.0;
  bc.witness = {{"n", std::to_string(n)}, {"p_count", std::to_string(p_count)}, {"k", std::to_string(k)}};
  return bc;
}

SqrtDeviationEstimate mc_sqrt_deviation(std::int64_t n, std::int64_t p_count, std::int64_t q_count, std::int64_t a,
                                        std::int64_t b, const Rational& eta, std::int64_t trials, Seed seed) {
  check_eta(eta);
  if (p_count < 0 || q_count < 0 || p_count + q_count > n) throw ParameterError("P, Q do not fit");
  if (q_count > p_count) throw ParameterError("need |P| >= |Q|");
  if (b < 0 || b > a || a < 1 || a + b > n) throw ParameterError("need 0 <= b <= a and a + b <= n");
  if (Rational(big(a)) > (1 - eta) * big(n)) throw ParameterError("need a <= (1 - eta) n");
  Rational p = rat(p_count, n);
  if (p < eta || p > 1 - eta) throw ParameterError("p outside [eta, 1 - eta]");
  if (trials < 1) throw ParameterError("trials must be positive");

  Rng rng(seed);
  std::vector<std::int64_t> verts(n);
  for (std::int64_t i = 0; i < n; ++i) verts[i] = i;
  auto sign = [&](std::int64_t v) { return v < p_count ? 1 : (v < p_count + q_count ? -1 : 0); };
  std::vector<std::int64_t> z(trials);
  for (std::int64_t tr = 0; tr < trials; ++tr) {
    rng.partial_shuffle(verts, static_cast<std::size_t>(a + b));
    std::int64_t s = 0;
    for (std::int64_t i = 0; i < a; ++i) s += sign(verts[i]);
    for (std::int64_t i = a; i < a + b; ++i) s -= sign(verts[i]);
    z[tr] = s;
  }
  std::sort(z.begin(), z.end(), std::greater<>());

  SqrtDeviationEstimate est;
  est.trials = trials;
  const double sa = std::sqrt(double(a)), T = double(trials);
  for (std::int64_t j = 1; j <= trials; ++j) {
    // the j largest values are >= z_j, so P^[Z >= rho sqrt a] >= j/T for rho <= z_j / sqrt a
    double r = std::max(0.0, double(z[j - 1]) / sa);
    double f = double(j) / T;
    double sd = std::sqrt(f * (1 - f) / T);
    est.rho_hat = std::max(est.rho_hat, std::min(r, f));
    est.rho_lo = std::max(est.rho_lo, std::min(r, f - 3 * sd));
    est.rho_hi = std::max(est.rho_hi, std::min(r, f + 3 * sd));
  }
  for (int i = 0; i <= 20; ++i) {
    double rho = i / 20.0;
    double thr = rho * sa;
    auto cnt = std::count_if(z.begin(), z.end(), [&](std::int64_t v) { return double(v) >= thr; });
    est.curve.emplace_back(rho, double(cnt) / T);
  }
  est.positive = est.rho_lo > 0;
  return est;
}

}  // namespace disc
