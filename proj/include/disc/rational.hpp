#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace disc {

using BigInt = mpz_class;
using Rational = mpq_class;

inline BigInt big(std::int64_t v) { return BigInt(static_cast<long>(v)); }

inline Rational rat(std::int64_t num, std::int64_t den = 1) {
  Rational r(big(num), big(den));
  r.canonicalize();
  return r;
}

inline Rational rat(const BigInt& num, const BigInt& den) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

// Parses "a/b", "a" or a decimal like "0.05".
Rational parse_rational(const std::string& s);

std::string to_string(const Rational& r);
std::string to_string(const BigInt& z);

BigInt floor(const Rational& r);
BigInt ceil(const Rational& r);

inline double to_double(const Rational& r) { return r.get_d(); }

std::int64_t to_int64(const BigInt& z);

BigInt binomial(std::int64_t n, std::int64_t k);

// Exact test of a >= c * sqrt(s) for rational a, c >= 0 and s >= 0.
bool geq_scaled_sqrt(const Rational& a, const Rational& c, const Rational& s);

}  // namespace disc
