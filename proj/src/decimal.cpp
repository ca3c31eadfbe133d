#include "exactreal/decimal.hpp"

namespace exactreal {

namespace {

// floor(log10(q)) for q > 0.
long floor_log10(const Rational& q) {
    // start from a digit-count estimate, then correct by exact comparison
    long est = static_cast<long>(mpz_sizeinbase(q.get_num().get_mpz_t(), 10)) -
               static_cast<long>(mpz_sizeinbase(q.get_den().get_mpz_t(), 10));
    auto pow10 = [](long k) {
        Rational r;
        Integer p = pow_uint(10, static_cast<unsigned long>(k >= 0 ? k : -k));
        return k >= 0 ? Rational(p) : Rational(1, p);
    };
    while (q < pow10(est)) --est;
    while (q >= pow10(est + 1)) ++est;
    return est;
}

}  // namespace

std::string render_decimal(const Rational& q, long digits) {
    if (q == 0) return "0";
    bool neg = sgn(q) < 0;
    Rational a = abs(q);
    long e = floor_log10(a);  // 10^e <= a < 10^(e+1)

    // round a * 10^(digits-1-e) half to even
    Rational scaled = a;
    long shift = digits - 1 - e;
    if (shift >= 0) {
        scaled *= Rational(pow_uint(10, static_cast<unsigned long>(shift)));
    } else {
        scaled /= Rational(pow_uint(10, static_cast<unsigned long>(-shift)));
    }
    Integer whole;
    mpz_fdiv_q(whole.get_mpz_t(), scaled.get_num().get_mpz_t(), scaled.get_den().get_mpz_t());
    Rational frac = scaled - Rational(whole);
    if (frac > Rational(1, 2) || (frac == Rational(1, 2) && mpz_odd_p(whole.get_mpz_t()))) {
        whole += 1;
    }
    std::string s = whole.get_str();
    if (static_cast<long>(s.size()) > digits) {
        // rounding overflowed into one more digit (e.g. 999 -> 1000)
        ++e;
        s.pop_back();
    }

    bool scientific = (e + 1 > digits) || (e < -4);
    std::string out;
    if (scientific) {
        out = s.substr(0, 1);
        if (digits > 1) out += "." + s.substr(1);
        out += "e" + std::to_string(e);
    } else if (e >= 0) {
        // e+1 integer digits, the rest fractional
        out = s.substr(0, static_cast<std::size_t>(e + 1));
        if (digits > e + 1) out += "." + s.substr(static_cast<std::size_t>(e + 1));
    } else {
        out = "0." + std::string(static_cast<std::size_t>(-e - 1), '0') + s;
    }
    return neg ? "-" + out : out;
}

}  // namespace exactreal
