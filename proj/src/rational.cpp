#include "disc/rational.hpp"

#include <limits>

#include "disc/error.hpp"

namespace disc {

Rational parse_rational(const std::string& s) {
  if (s.empty()) throw ParameterError("empty rational");
  auto slash = s.find('/');
  try {
    if (slash != std::string::npos) {
      BigInt num(s.substr(0, slash), 10);
      BigInt den(s.substr(slash + 1), 10);
      if (den == 0) throw ParameterError("zero denominator in '" + s + "'");
      return rat(num, den);
    }
    auto dot = s.find('.');
    if (dot == std::string::npos) return Rational(BigInt(s, 10));
    std::string whole = s.substr(0, dot);
    std::string frac = s.substr(dot + 1);
    bool neg = !whole.empty() && whole[0] == '-';
    if (neg) whole = whole.substr(1);
    if (whole.empty()) whole = "0";
    if (frac.empty()) frac = "0";
    BigInt den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, frac.size());
    BigInt num = BigInt(whole, 10) * den + BigInt(frac, 10);
    if (neg) num = -num;
    return rat(num, den);
  } catch (const std::invalid_argument&) {
    throw ParameterError("not a rational: '" + s + "'");
  }
}

std::string to_string(const Rational& r) { return r.get_str(); }

std::string to_string(const BigInt& z) { return z.get_str(); }

BigInt floor(const Rational& r) {
  BigInt q;
  mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return q;
}

BigInt ceil(const Rational& r) {
  BigInt q;
  mpz_cdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return q;
}

std::int64_t to_int64(const BigInt& z) {
  if (!z.fits_slong_p()) throw ParameterError("integer out of 64-bit range");
  return z.get_si();
}

BigInt binomial(std::int64_t n, std::int64_t k) {
  if (k < 0 || n < 0 || k > n) return 0;
  BigInt r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return r;
}

bool geq_scaled_sqrt(const Rational& a, const Rational& c, const Rational& s) {
  if (c == 0 || s == 0) return a >= 0;
  if (a < 0) return false;
  return a * a >= c * c * s;
}

}  // namespace disc
