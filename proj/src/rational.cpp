#include "exactreal/rational.hpp"

namespace exactreal {

Rational normalize(const Integer& num, const Integer& den) {
    if (den == 0) {
        throw DomainError("zero denominator", SourceSpan{});
    }
    Rational q(num, den);
    q.canonicalize();
    return q;
}

Rational rat_inv(const Rational& q) {
    if (q == 0) {
        throw DomainError("inverse of zero", SourceSpan{});
    }
    return normalize(q.get_den(), q.get_num());
}

int rat_cmp(const Rational& a, const Rational& b) {
    return cmp(a, b);
}

std::size_t bit_length(const Integer& n) {
    if (n == 0) return 0;
    return mpz_sizeinbase(n.get_mpz_t(), 2);
}

long floor_log2(const Rational& q) {
    if (sgn(q) <= 0) {
        throw DomainError("floor_log2 of nonpositive value", SourceSpan{});
    }
    const Integer& num = q.get_num();
    const Integer& den = q.get_den();
    long e = static_cast<long>(bit_length(num)) - static_cast<long>(bit_length(den));
    // bit-length difference is off by at most one; settle with exact compares
    auto le_pow = [&](long k) {
        // 2^k <= q ?
        if (k >= 0) return den << static_cast<unsigned long>(k) <= num;
        return den <= num << static_cast<unsigned long>(-k);
    };
    if (!le_pow(e)) --e;
    if (le_pow(e + 1)) ++e;
    return e;
}

long ceil_log2(const Integer& n) {
    if (n <= 0) {
        throw DomainError("ceil_log2 of nonpositive value", SourceSpan{});
    }
    if (n == 1) return 0;
    long k = static_cast<long>(bit_length(n - 1));
    return k;
}

long ceil_log2_rational(const Rational& q) {
    if (q <= 1) {
        throw DomainError("ceil_log2_rational requires q > 1", SourceSpan{});
    }
    long e = floor_log2(q);  // 2^e <= q < 2^(e+1)
    if (pow2(e) == q) return e;
    return e + 1;
}

Rational pow2(long e) {
    Rational r;
    if (e >= 0) {
        r = Rational(Integer(1) << static_cast<unsigned long>(e));
    } else {
        r = Rational(1, Integer(1) << static_cast<unsigned long>(-e));
    }
    r.canonicalize();
    return r;
}

Rational pow_int(const Rational& q, unsigned long e) {
    Rational r;
    mpz_pow_ui(r.get_num().get_mpz_t(), q.get_num().get_mpz_t(), e);
    mpz_pow_ui(r.get_den().get_mpz_t(), q.get_den().get_mpz_t(), e);
    // num/den already coprime, so the power is too
    return r;
}

Integer pow_uint(const Integer& base, unsigned long e) {
    Integer r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

Integer integer_from_string(const std::string& text, SourceSpan span) {
    Integer n;
    if (mpz_set_str(n.get_mpz_t(), text.c_str(), 10) != 0) {
        throw ParseError("malformed integer literal '" + text + "'", span);
    }
    return n;
}

std::string to_string(const Rational& q) {
    return q.get_str();
}

}  // namespace exactreal
