#pragma once

#include "exactreal/rational.hpp"

namespace exactreal {

// The engine's unit of currency: a nonzero rational value v together with a
// guarantee that the represented real x satisfies |x - v| < |v| * 2^-prec.
// Zero cannot appear here; exact zeros travel as ExactValue.
struct Approximation {
    Rational value;
    long prec = 0;
};

// A subexpression whose exact rational value is known (constant folding or
// exact propagation). May be zero.
struct ExactValue {
    Rational value;
};

// True iff |x - a.value| < |a.value| * 2^-a.prec, as an exact comparison.
// A testing aid: only usable when the represented real is itself rational.
bool check_represents(const Approximation& a, const Rational& x);

// The exponent a with q = f * 2^a, f in [1/2, 1); equals floor_log2(q) + 1.
long mantissa_exponent(const Rational& q);

// Rounds q to a dyadic with about `bits` significant bits.
// |result - q| <= |q| * 2^-(bits-1).
Rational round_dyadic(const Rational& q, long bits);

// Re-represents (q, prec) as a coarser but still valid tuple: the result is
// a dyadic with ~prec+7 significant bits and carries guarantee prec-1.
//   |x - q^| <= |x - q| + |q - q^| < |q| 2^-prec (1 + 2^-6) <= |q^| 2^-(prec-1)
Approximation compress(const Rational& q, long prec);

// Exact q^i plus the precision loss 2*ceil(log2 i) charged by the power rule
// (loss 0 for i == 1).
struct PowerWithLoss {
    Rational value;
    long loss = 0;
};
PowerWithLoss pow_with_loss(const Rational& q, unsigned long i);

}  // namespace exactreal
