#pragma once
#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace treecouple {

using Rational = mpq_class;
using BigInt = mpz_class;

/// num/den in lowest terms (mpq_class(num, den) alone is not canonical).
Rational ratio(long num, unsigned long den);

/// "p/q" in lowest terms; integers keep the "/1" so every field parses the same way.
std::string to_fraction_string(const Rational& r);

double to_double(const Rational& r);

Rational rational_pow(const Rational& base, unsigned exponent);

BigInt binomial(unsigned n, unsigned k);

/// Exact value paired with its float mirror for reporting.
struct ExactValue {
  Rational exact;
  double approx = 0.0;
};

inline ExactValue make_exact(const Rational& r) { return {r, to_double(r)}; }

} // namespace treecouple
