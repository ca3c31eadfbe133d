#include "exactreal/approximation.hpp"

namespace exactreal {

bool check_represents(const Approximation& a, const Rational& x) {
    Rational err = abs(x - a.value);
    Rational bound = abs(a.value) * pow2(-a.prec);
    return err < bound;
}

long mantissa_exponent(const Rational& q) {
    return floor_log2(q) + 1;
}

Rational round_dyadic(const Rational& q, long bits) {
    if (q == 0) return q;
    long e = floor_log2(abs(q)) - (bits - 1);
    // round(q / 2^e) * 2^e, round half away from zero
    Rational scaled = q * pow2(-e);
    Integer num = scaled.get_num(), den = scaled.get_den();
    Integer twice = 2 * num + (sgn(num) >= 0 ? den : -den);
    Integer rounded;
    mpz_fdiv_q(rounded.get_mpz_t(), twice.get_mpz_t(), Integer(2 * den).get_mpz_t());
    return Rational(rounded) * pow2(e);
}

Approximation compress(const Rational& q, long prec) {
    if (prec < 1) return {q, prec};
    return {round_dyadic(q, prec + 7), prec - 1};
}

PowerWithLoss pow_with_loss(const Rational& q, unsigned long i) {
    PowerWithLoss r;
    r.value = pow_int(q, i);
    r.loss = (i <= 1) ? 0 : 2 * ceil_log2(Integer(i));
    return r;
}

}  // namespace exactreal
