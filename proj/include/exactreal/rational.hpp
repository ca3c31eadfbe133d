#pragma once

#include <gmpxx.h>

#include <string>

#include "exactreal/errors.hpp"

namespace exactreal {

// Unbounded signed integer. GMP supplies the limb arithmetic; everything the
// engine derives from integers (bit lengths, floors of logs, powers) is below.
using Integer = mpz_class;

// Exact fraction of Integers, always in lowest terms with positive
// denominator; zero is 0/1. mpq_class maintains exactly this canonical form
// as long as values are built through normalize() / the arithmetic operators.
using Rational = mpq_class;

// num/den in lowest terms, den > 0. Throws DomainError on den == 0.
Rational normalize(const Integer& num, const Integer& den);

// Exact field helpers. The arithmetic operators of Rational are the usual
// entry points; these names exist for the domain-checked cases.
Rational rat_inv(const Rational& q);  // DomainError on q == 0
int rat_cmp(const Rational& a, const Rational& b);

inline int sign(const Rational& q) { return sgn(q); }
inline Rational rat_abs(const Rational& q) { return abs(q); }

// Number of bits of |n|; 0 for n == 0.
std::size_t bit_length(const Integer& n);

// Unique e with 2^e <= q < 2^(e+1). DomainError unless q > 0.
// Computed from numerator/denominator bit lengths plus one comparison step.
long floor_log2(const Rational& q);

// Least k >= 0 with 2^k >= n, for n >= 1.
long ceil_log2(const Integer& n);

// Least i in N+ with i >= log2(q), for q > 1. Exact: finds the first i with
// 2^i >= q, then steps back if 2^(i-1) >= q would also do (it cannot; kept
// as a comparison against the exact power).
long ceil_log2_rational(const Rational& q);

// 2^e as a Rational, e may be negative.
Rational pow2(long e);

// Exact q^e for e >= 0; q^0 == 1.
Rational pow_int(const Rational& q, unsigned long e);

Integer pow_uint(const Integer& base, unsigned long e);

// Parses "123" or "-4" style integer text (throws ParseError on junk).
Integer integer_from_string(const std::string& text, SourceSpan span);

std::string to_string(const Rational& q);

}  // namespace exactreal
