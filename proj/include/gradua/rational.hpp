#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

#include "gradua/errors.hpp"

namespace gradua {

using Integer = mpz_class;
// Exact rational; GMP keeps every value canonical (lowest terms, positive
// denominator) after each arithmetic operation.
using Rational = mpq_class;

// mpq_class(n, d) does not reduce; print in lowest terms regardless.
inline std::string to_string(Rational q) {
  q.canonicalize();
  return q.get_str();
}

inline Rational parse_rational(std::string_view text) {
  Rational q;
  if (text.empty() || q.set_str(std::string(text), 10) != 0) {
    throw DomainError("malformed rational literal '" + std::string(text) + "'");
  }
  if (q.get_den() == 0) throw DomainError("zero denominator in '" + std::string(text) + "'");
  q.canonicalize();
  return q;
}

inline Rational factorial(unsigned n) {
  Integer f;
  mpz_fac_ui(f.get_mpz_t(), n);
  return Rational(f);
}

inline Rational power(const Rational& base, unsigned exponent) {
  Rational result(1);
  mpz_pow_ui(result.get_num_mpz_t(), base.get_num_mpz_t(), exponent);
  mpz_pow_ui(result.get_den_mpz_t(), base.get_den_mpz_t(), exponent);
  result.canonicalize();
  return result;
}

}  // namespace gradua
