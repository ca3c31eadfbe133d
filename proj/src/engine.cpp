#include "exactreal/engine.hpp"

#include <mutex>

namespace exactreal {

// ------------------------------------------------------------- selectors

namespace params {

long sqrt_inner(long p_x) {
    // ceil(log2(log2(2^(q)+1))) with q = p_x+3 lies strictly between
    // log2(q) and log2(q+1); it equals the least k with 2^k >= q+1.
    return ceil_log2(Integer(p_x + 4));
}

SqrtParams sqrt_params(long p) {
    for (long p_x = p + 8;; ++p_x) {
        long inner = sqrt_inner(p_x);
        if (p + 4 * inner + 4 <= p_x) {
            return {p_x, inner + 1};
        }
    }
}

Integer exp_term_count(long pp) {
    long e = (pp + 11 + 2) / 3;  // ceil((pp+11)/3), pp >= 0
    Integer threshold = Integer(1) << static_cast<unsigned long>(e);
    if (threshold < 8) threshold = 8;
    Integer n = threshold + 1;
    if (mpz_odd_p(n.get_mpz_t())) n += 1;
    return n;
}

Integer ln_rect_count(const Rational& arg, long p_x) {
    Rational r = pow2(p_x - 2) * arg * arg / (arg - 1);
    Integer n;
    mpz_cdiv_q(n.get_mpz_t(), r.get_num().get_mpz_t(), r.get_den().get_mpz_t());
    return n;
}

Integer arctan_rect_count(const Rational& arg, long p) {
    Rational sq = arg * arg;
    Integer csq;
    mpz_cdiv_q(csq.get_mpz_t(), sq.get_num().get_mpz_t(), sq.get_den().get_mpz_t());
    return (Integer(1) << static_cast<unsigned long>(p - 2)) * csq;
}

long choose_N_sin(long p) {
    for (long n = 1;; n += 2) {
        Integer fac;
        mpz_fac_ui(fac.get_mpz_t(), static_cast<unsigned long>(2 * n + 2));
        Integer lhs = 5 * fac * Integer(2 * n - 1) * Integer(2 * n - 1);
        Integer rhs = Integer(6) << static_cast<unsigned long>(p + 2 * n);
        if (lhs > rhs) return n;
    }
}

long choose_N_cos(long p) {
    for (long n = 1;; n += 2) {
        Integer fac;
        mpz_fac_ui(fac.get_mpz_t(), static_cast<unsigned long>(2 * n + 1));
        Integer lhs = fac * Integer(2 * n - 2) * Integer(2 * n - 2);
        Integer rhs = Integer(1) << static_cast<unsigned long>(p + 2 * n);
        if (lhs > rhs) return n;
    }
}

std::optional<long> add_loss_bits(const Rational& a, const Rational& b) {
    Rational aa = abs(a), ab = abs(b);
    if (aa == ab) return std::nullopt;
    Rational lo = std::min(aa, ab), hi = std::max(aa, ab);
    Rational ratio = (hi + lo) / (hi - lo);  // == (1+r)/(1-r), r = lo/hi
    return ceil_log2_rational(ratio);
}

}  // namespace params

// ------------------------------------------------------ series kernels

namespace series {

Rational taylor_sin_paired(const Rational& q, long n_odd) {
    long k = (n_odd - 1) / 2;
    Rational q2 = q * q;
    Rational sum = 0;
    for (long i = 0; i <= k; ++i) {
        Integer fac;
        mpz_fac_ui(fac.get_mpz_t(), static_cast<unsigned long>(4 * i + 1));
        Rational power = pow_int(q, static_cast<unsigned long>(4 * i + 1));
        Rational pair = 1 - q2 / Rational((4 * i + 2) * (4 * i + 3));
        sum += power / Rational(fac) * pair;
    }
    return sum;
}

Rational taylor_cos_paired(const Rational& q, long n_odd) {
    long k = (n_odd - 1) / 2;
    Rational q2 = q * q;
    Rational sum = 0;
    for (long i = 0; i <= k; ++i) {
        Integer fac;
        mpz_fac_ui(fac.get_mpz_t(), static_cast<unsigned long>(4 * i));
        Rational power = pow_int(q, static_cast<unsigned long>(4 * i));
        Rational pair = 1 - q2 / Rational((4 * i + 1) * (4 * i + 2));
        sum += power / Rational(fac) * pair;
    }
    return sum;
}

Rational taylor_sin_plain(const Rational& q, long terms) {
    Rational sum = 0;
    for (long i = 0; i < terms; ++i) {
        Integer fac;
        mpz_fac_ui(fac.get_mpz_t(), static_cast<unsigned long>(2 * i + 1));
        Rational t = pow_int(q, static_cast<unsigned long>(2 * i + 1)) / Rational(fac);
        sum += (i % 2 == 0) ? t : -t;
    }
    return sum;
}

Rational taylor_cos_plain(const Rational& q, long terms) {
    Rational sum = 0;
    for (long i = 0; i < terms; ++i) {
        Integer fac;
        mpz_fac_ui(fac.get_mpz_t(), static_cast<unsigned long>(2 * i));
        Rational t = pow_int(q, static_cast<unsigned long>(2 * i)) / Rational(fac);
        sum += (i % 2 == 0) ? t : -t;
    }
    return sum;
}

namespace {
Rational riemann_ln(const Rational& x, unsigned long n, unsigned long first) {
    // sum over i of (x-1)/n * 1/(1 + (i/n)(x-1))  ==  (m-n')/(n'*N + i(m-n'))
    const Integer& m = x.get_num();
    const Integer& nn = x.get_den();
    Integer diff = m - nn;
    Rational sum = 0;
    for (unsigned long i = first; i < first + n; ++i) {
        sum += normalize(diff, Integer(n) * nn + Integer(i) * diff);
    }
    return sum;
}

Rational riemann_arctan(const Rational& x, unsigned long n, unsigned long first) {
    const Integer& m = x.get_num();
    const Integer& nn = x.get_den();
    Integer n2 = Integer(n) * Integer(n) * nn * nn;
    Rational sum = 0;
    for (unsigned long i = first; i < first + n; ++i) {
        sum += normalize(m * nn * Integer(n), n2 + Integer(i) * Integer(i) * m * m);
    }
    return sum;
}
}  // namespace

Rational riemann_ln_upper(const Rational& x, unsigned long n) { return riemann_ln(x, n, 0); }
Rational riemann_ln_lower(const Rational& x, unsigned long n) { return riemann_ln(x, n, 1); }
Rational riemann_arctan_upper(const Rational& x, unsigned long n) { return riemann_arctan(x, n, 0); }
Rational riemann_arctan_lower(const Rational& x, unsigned long n) { return riemann_arctan(x, n, 1); }

Rational exp_bracket_lower(const Rational& x, unsigned long n_even) {
    return pow_int(1 + 2 * x / Rational(static_cast<unsigned long>(n_even)), n_even / 2);
}

Rational exp_bracket_upper(const Rational& x, unsigned long n_even) {
    Rational n(static_cast<unsigned long>(n_even));
    return pow_int(n / (n - 2 * x), n_even / 2);
}

}  // namespace series

// --------------------------------------------------------- the evaluator

namespace {

struct Val {
    Rational v;
    bool exact = false;
    long delivered = 0;  // meaningful when !exact
};

std::size_t coeff_bits(const Rational& q) {
    return std::max(bit_length(q.get_num()), bit_length(q.get_den()));
}

// Certified fixed-point accumulation of N positive rectangle terms.
// `numer` is the (constant) term numerator, `den0` the first denominator and
// `step(d, i)` advances it. Result R satisfies |R - S_exact| <= (N/2) 2^-F.
struct RoundedSum {
    Rational value;
    Rational abs_error;  // (N/2) * 2^-F
};

template <typename StepFn>
RoundedSum rounded_positive_sum(const Integer& numer, Integer den, unsigned long n, long frac_bits,
                                StepFn step) {
    Integer acc = 0;
    Integer shifted = numer << static_cast<unsigned long>(frac_bits);
    Integer q;
    for (unsigned long i = 0; i < n; ++i) {
        mpz_fdiv_q(q.get_mpz_t(), shifted.get_mpz_t(), den.get_mpz_t());
        acc += q;
        step(den, i);
    }
    acc += Integer(n / 2);
    RoundedSum out;
    out.value = Rational(acc) * pow2(-frac_bits);
    out.abs_error = Rational(Integer(n / 2 + 1)) * pow2(-frac_bits);
    return out;
}

// Upper ln sum with certified rounding; arg > 1, error <= |S| 2^-(t+8).
Rational ln_sum_rounded(const Rational& arg, const Integer& n_terms, long t, SourceSpan span,
                        const EvalConfig& cfg) {
    if (n_terms > Integer(cfg.term_budget)) {
        throw PrecisionDivergence("rectangle count exceeds the term budget", span);
    }
    unsigned long n = n_terms.get_ui();
    const Integer& m = arg.get_num();
    const Integer& nn = arg.get_den();
    Integer diff = m - nn;
    for (long frac = t + static_cast<long>(bit_length(Integer(n))) + 16;; frac += 32) {
        Integer den0 = Integer(n) * nn;
        auto sum = rounded_positive_sum(diff, den0, n, frac,
                                        [&](Integer& d, unsigned long) { d += diff; });
        if (sum.abs_error * pow2(t + 8) <= sum.value) return sum.value;
    }
}

// Upper arctan sum with certified rounding; arg > 0.
Rational arctan_sum_rounded(const Rational& arg, const Integer& n_terms, long t, SourceSpan span,
                            const EvalConfig& cfg) {
    if (n_terms > Integer(cfg.term_budget)) {
        throw PrecisionDivergence("rectangle count exceeds the term budget", span);
    }
    unsigned long n = n_terms.get_ui();
    const Integer& m = arg.get_num();
    const Integer& nn = arg.get_den();
    Integer m2 = m * m;
    Integer numer = m * nn * Integer(n);
    for (long frac = t + static_cast<long>(bit_length(Integer(n))) + 16;; frac += 32) {
        Integer den0 = Integer(n) * Integer(n) * nn * nn;
        Integer odd = m2;  // (2i+1) m^2 increments
        auto sum = rounded_positive_sum(numer, den0, n, frac, [&](Integer& d, unsigned long) {
            d += odd;
            odd += 2 * m2;
        });
        if (sum.abs_error * pow2(t + 8) <= sum.value) return sum.value;
    }
}

// base^e with per-step dyadic compression; base > 0. Relative error of the
// result is below 2^-(keep_bits - 2*bitlen(e) - 2).
Rational pow_compressed(const Rational& base, const Integer& e, long keep_bits) {
    if (e == 0) return Rational(1);
    std::size_t nbits = bit_length(e);
    Rational r = base;
    for (std::size_t i = nbits - 1; i-- > 0;) {
        r = round_dyadic(r * r, keep_bits);
        if (mpz_tstbit(e.get_mpz_t(), static_cast<mp_bitcnt_t>(i))) {
            r = round_dyadic(r * base, keep_bits);
        }
    }
    return r;
}

struct PiCache {
    std::mutex mu;
    long prec = -1;
    Rational value;
};
PiCache& pi_cache() {
    static PiCache c;
    return c;
}

class Evaluator {
  public:
    explicit Evaluator(const EvalConfig& cfg) : cfg_(cfg) {}

    Val eval(const ExprPtr& e, long p, TraceNode* tr) {
        if (tr) {
            tr->op = e->kind;
            tr->requested = p;
        }
        Val out;
        switch (e->kind) {
            case Kind::Const: out = Val{e->constant, true, p}; break;
            case Kind::Neg: out = eval_neg(e, p, tr); break;
            case Kind::Add: out = eval_add(e, p, tr); break;
            case Kind::Mul: out = eval_mul(e, p, tr); break;
            case Kind::Inv: out = eval_inv(e, p, tr); break;
            case Kind::Sqrt: out = eval_sqrt(e, p, tr); break;
            case Kind::Exp: out = eval_exp(e, p, tr); break;
            case Kind::Ln: out = eval_ln(e, p, tr); break;
            case Kind::Arctan: out = eval_arctan(e, p, tr); break;
            case Kind::Sin: out = eval_sincos(e, p, tr, /*is_sin=*/true); break;
            case Kind::Cos: out = eval_sincos(e, p, tr, /*is_sin=*/false); break;
        }
        if (tr) {
            tr->exact = out.exact;
            tr->delivered = out.exact ? p : out.delivered;
            tr->coeff_bits = std::max(tr->coeff_bits, coeff_bits(out.v));
        }
        return out;
    }

    Rational pi_at(long q, SourceSpan span) {
        PiCache& c = pi_cache();
        {
            std::lock_guard<std::mutex> lock(c.mu);
            if (c.prec >= q) return c.value;
        }
        long t = q + 1;
        Rational v = 4 * arctan_positive(Rational(1), t, span);
        Rational packed = compress(v, t).value;
        std::lock_guard<std::mutex> lock(c.mu);
        if (c.prec < q) {
            c.prec = q;
            c.value = packed;
        }
        return c.value;
    }

  private:
    const EvalConfig& cfg_;

    TraceNode* child_slot(TraceNode* tr, std::size_t arity_hint) {
        if (!tr) return nullptr;
        if (tr->kids.size() >= arity_hint) tr->kids.clear();
        tr->kids.push_back(std::make_unique<TraceNode>());
        return tr->kids.back().get();
    }

    [[noreturn]] void diverge(const ExprPtr& e, const char* what) {
        throw PrecisionDivergence(std::string(what) +
                                      " (suspected exact zero or removable singularity)",
                                  e->span);
    }

    Val finish(const Rational& value, long internal_target, TraceNode* tr) {
        Approximation a = compress(value, internal_target);
        if (tr) tr->coeff_bits = std::max(tr->coeff_bits, coeff_bits(value));
        return Val{a.value, false, a.prec};
    }

    Val eval_neg(const ExprPtr& e, long p, TraceNode* tr) {
        Val c = eval(e->kids[0], p, child_slot(tr, 1));
        return Val{-c.v, c.exact, c.delivered};
    }

    Val eval_inv(const ExprPtr& e, long p, TraceNode* tr) {
        Val c = eval(e->kids[0], p + 1, child_slot(tr, 1));
        if (c.exact) {
            if (c.v == 0) throw DomainError("inverse of zero", e->span);
            return Val{rat_inv(c.v), true, p};
        }
        return Val{rat_inv(c.v), false, c.delivered - 1};
    }

    Val eval_mul(const ExprPtr& e, long p, TraceNode* tr) {
        // an exact constant operand costs nothing, so the other side only
        // needs p bits
        bool lc = e->kids[0]->is_const(), rc = e->kids[1]->is_const();
        long pl = rc && !lc ? p : p + 2;
        long pr = lc && !rc ? p : p + 2;
        Val a = eval(e->kids[0], pl, child_slot(tr, 2));
        Val b = eval(e->kids[1], pr, child_slot(tr, 2));
        Rational prod = a.v * b.v;
        if (a.exact && b.exact) return Val{prod, true, p};
        if (a.exact || b.exact) {
            if ((a.exact && a.v == 0) || (b.exact && b.v == 0)) return Val{Rational(0), true, p};
            return Val{prod, false, a.exact ? b.delivered : a.delivered};
        }
        return Val{prod, false, std::min(a.delivered, b.delivered) - 2};
    }

    Val eval_add(const ExprPtr& e, long p, TraceNode* tr) {
        long dp = p;
        for (long round = 0;; ++round, ++dp) {
            if (round > cfg_.max_refine) diverge(e, "addition refinement cap exceeded");
            if (tr) {
                tr->kids.clear();
                tr->refinements = round;
            }
            Val a = eval(e->kids[0], dp, child_slot(tr, 2));
            Val b = eval(e->kids[1], dp, child_slot(tr, 2));
            if (a.exact && a.v == 0) return b;
            if (b.exact && b.v == 0) return a;
            Rational sum = a.v + b.v;
            if (a.exact && b.exact) return Val{sum, true, p};
            long avail;  // precision both operands carry
            if (a.exact) {
                avail = b.delivered;
            } else if (b.exact) {
                avail = a.delivered;
            } else {
                avail = std::min(a.delivered, b.delivered);
            }
            if (sgn(a.v) == sgn(b.v)) {
                return Val{sum, false, avail};
            }
            auto loss = params::add_loss_bits(a.v, b.v);
            if (loss && avail - *loss >= p) {
                return Val{sum, false, avail - *loss};
            }
            // equal magnitudes (undefined loss) or not enough headroom
        }
    }

    Val eval_sqrt(const ExprPtr& e, long p, TraceNode* tr) {
        long t = p + 1;
        auto pr = params::sqrt_params(t);
        Val c = eval(e->kids[0], pr.p_x, child_slot(tr, 1));
        if (sgn(c.v) < 0) throw DomainError("square root of a negative value", e->span);
        if (c.exact && c.v == 0) return Val{Rational(0), true, p};
        long a = mantissa_exponent(c.v);
        long half_up = a >= 0 ? (a + 1) / 2 : -((-a) / 2);
        Rational y = pow2(half_up + 1);
        std::size_t peak = 0;
        for (long i = 0; i < pr.newton_steps; ++i) {
            y = (y * y + c.v) / (2 * y);
            peak = std::max(peak, coeff_bits(y));
        }
        if (tr) {
            tr->terms = static_cast<unsigned long>(pr.newton_steps);
            tr->coeff_bits = std::max(tr->coeff_bits, peak);
        }
        return finish(y, t, tr);
    }

    // Upper-sum arctangent for q > 0 whose child representation carries
    // precision target+6 (exact children satisfy any precision).
    Rational arctan_positive(const Rational& q, long target, SourceSpan span,
                             unsigned long* terms_out = nullptr) {
        long p_x = target + 6;
        Integer n = params::arctan_rect_count(q, p_x);
        if (terms_out) *terms_out = mpz_fits_ulong_p(n.get_mpz_t()) ? n.get_ui() : ~0ul;
        return arctan_sum_rounded(q, n, target, span, cfg_);
    }

    Val eval_arctan(const ExprPtr& e, long p, TraceNode* tr) {
        long t = p + 1;
        Val c = eval(e->kids[0], t + 6, child_slot(tr, 1));
        if (c.exact && c.v == 0) return Val{Rational(0), true, p};
        int s = sgn(c.v);
        unsigned long terms = 0;
        Rational sum = arctan_positive(abs(c.v), t, e->span, &terms);
        if (tr) tr->terms = terms;
        return finish(s > 0 ? sum : -sum, t, tr);
    }

    Val eval_ln(const ExprPtr& e, long p, TraceNode* tr) {
        long t = p + 1;
        long p_x = t + 5;
        for (long round = 0;; ++round, ++p_x) {
            if (round > cfg_.max_refine) diverge(e, "logarithm refinement cap exceeded");
            if (tr) {
                tr->kids.clear();
                tr->refinements = round;
            }
            Val c = eval(e->kids[0], p_x, child_slot(tr, 1));
            if (sgn(c.v) <= 0) throw DomainError("logarithm of a nonpositive value", e->span);
            if (c.exact && c.v == 1) return Val{Rational(0), true, p};
            if (c.v == 1) continue;  // either side of 1 possible: refine
            bool big = c.v > 1;
            Rational arg = big ? c.v : rat_inv(c.v);
            long ell = big ? 4 : 5;
            long j = params::add_loss_bits(arg, Rational(-1)).value_or(0);
            if (p_x - j - ell < t) continue;
            Integer n = params::ln_rect_count(arg, p_x);
            if (tr) tr->terms = mpz_fits_ulong_p(n.get_mpz_t()) ? n.get_ui() : ~0ul;
            Rational sum = ln_sum_rounded(arg, n, t, e->span, cfg_);
            return finish(big ? sum : -sum, t, tr);
        }
    }

    Val eval_exp(const ExprPtr& e, long p, TraceNode* tr) {
        long t = p + 1;
        long p_c = t + 4;
        for (long round = 0;; ++round) {
            if (round > cfg_.max_refine) diverge(e, "exponential refinement cap exceeded");
            if (tr) {
                tr->kids.clear();
                tr->refinements = round;
            }
            Val c = eval(e->kids[0], p_c, child_slot(tr, 1));
            if (c.exact && c.v == 0) return Val{Rational(1), true, p};
            Rational aq = abs(c.v);
            long k = aq < 1 ? 0 : floor_log2(aq) + 1;
            if (p_c < t + k + 4) {
                p_c = t + k + 4;
                continue;
            }
            Rational q_b = aq * pow2(-k);  // in (0,1)
            // N covers the bracketing error at the halved argument and the
            // theorem's own selector
            Integer n_req;
            {
                Rational need = q_b * q_b * pow2(t + k + 5);
                mpz_cdiv_q(n_req.get_mpz_t(), need.get_num().get_mpz_t(),
                           need.get_den().get_mpz_t());
                if (mpz_odd_p(n_req.get_mpz_t())) n_req += 1;
                Integer floor_n = params::exp_term_count(t);
                if (n_req < floor_n) n_req = floor_n;
                if (n_req < 16) n_req = 16;
            }
            if (tr) tr->terms = mpz_fits_ulong_p(n_req.get_mpz_t()) ? n_req.get_ui() : ~0ul;
            Rational nr(n_req);
            Rational base = nr / (nr - 2 * q_b);
            Integer e_pow = (n_req >> 1) << static_cast<unsigned long>(k);
            long keep = t + 2 * static_cast<long>(bit_length(e_pow)) + 12;
            Rational powed = pow_compressed(base, e_pow, keep);
            if (sgn(c.v) < 0) powed = rat_inv(powed);
            return finish(powed, t, tr);
        }
    }

    struct Reduction {
        Rational reduced;   // in (0, pi~)
        Integer multiples;  // k (sin) or h (cos) applied to pi~ resp. pi~/2
        int sign = 1;       // (-1)^k factor for cosine
        bool ok = false;
    };

    Reduction reduce_sin(const Rational& q, const Rational& pi) {
        Reduction r;
        Rational ratio = q / pi;
        Integer k;
        mpz_fdiv_q(k.get_mpz_t(), ratio.get_num().get_mpz_t(), ratio.get_den().get_mpz_t());
        k = -k;
        r.reduced = q + Rational(k) * pi;
        r.multiples = k;
        r.ok = r.reduced != 0;  // exact multiple of pi~: retry at higher precision
        return r;
    }

    Reduction reduce_cos(const Rational& q, const Rational& pi) {
        Reduction r;
        Rational c = -2 * q / pi;
        Integer f;
        mpz_fdiv_q(f.get_mpz_t(), c.get_num().get_mpz_t(), c.get_den().get_mpz_t());
        for (Integer h = f; h <= f + 2; h += 1) {
            if (mpz_even_p(h.get_mpz_t())) continue;
            Rational red = q + Rational(h) * pi / 2;
            if (red > 0 && red < pi) {
                r.reduced = red;
                r.multiples = h;
                Integer k = (h - 1) / 2;
                r.sign = mpz_odd_p(k.get_mpz_t()) ? -1 : 1;
                r.ok = true;
                return r;
            }
        }
        return r;  // boundary hit: retry at higher precision
    }

    Val eval_sincos(const ExprPtr& e, long p, TraceNode* tr, bool is_sin) {
        long t = p + 1;
        long p_x = t + 4;
        long p_pi = t + 6;
        for (long round = 0;; ++round, ++p_x, ++p_pi) {
            if (round > cfg_.max_refine) {
                diverge(e, is_sin ? "sine refinement cap exceeded" : "cosine refinement cap exceeded");
            }
            if (tr) {
                tr->kids.clear();
                tr->refinements = round;
            }
            Val c = eval(e->kids[0], p_x, child_slot(tr, 1));
            if (c.exact && c.v == 0) {
                return is_sin ? Val{Rational(0), true, p} : Val{Rational(1), true, p};
            }
            if (abs(c.v) < 1) {
                long n = is_sin ? params::choose_N_sin(t + 4) : params::choose_N_cos(t + 4);
                Rational s = is_sin ? series::taylor_sin_paired(c.v, n)
                                    : series::taylor_cos_paired(c.v, n);
                if (tr) tr->terms = static_cast<unsigned long>(n);
                return finish(s, t, tr);
            }

            // range reduction; needs pi~
            Rational pi = pi_at(p_pi, e->span);
            if (pi >= 4 || pi <= 3) continue;  // absurdly coarse pi~: refine
            Reduction red = is_sin ? reduce_sin(c.v, pi) : reduce_cos(c.v, pi);
            if (!red.ok) continue;
            const Rational& rq = red.reduced;

            long n1 = params::choose_N_sin(t + 5);
            long n2 = params::choose_N_cos(t + 5);
            Rational f;
            unsigned long terms = 0;
            bool case_iii = false;
            if (rq < 1) {
                f = series::taylor_sin_paired(rq, n1);
                terms = static_cast<unsigned long>(n1);
            } else if (rq < 2) {
                Rational half = rq / 2;
                f = 2 * series::taylor_sin_paired(half, n1) * series::taylor_cos_paired(half, n2);
                terms = static_cast<unsigned long>(n1 + n2);
            } else {
                case_iii = true;
                Rational quarter = rq / 4;
                Rational u = (pi - rq) / 4;
                long n3 = n1, n4 = n2;
                f = 8 * series::taylor_sin_paired(quarter, n1) *
                    series::taylor_cos_paired(quarter, n2) * series::taylor_sin_paired(u, n3) *
                    series::taylor_cos_paired(u, n4);
                terms = static_cast<unsigned long>(n1 + n2 + n3 + n4);
            }
            if (f == 0) continue;

            // a-posteriori accuracy of the reduced argument: crude but
            // certain derivative bounds on the factorized identities
            Rational mult_weight = is_sin ? Rational(8) : Rational(4);
            Rational pi_coeff = mult_weight * abs(Rational(red.multiples));
            if (case_iii) pi_coeff += 4;
            Rational delta = pi_coeff * pi * pow2(-p_pi);
            if (!c.exact) delta += 8 * abs(c.v) * pow2(-p_x);
            if (delta > abs(f) * pow2(-(t + 2))) continue;

            if (tr) tr->terms = terms;
            return finish(is_sin ? f : red.sign * f, t, tr);
        }
    }
};

}  // namespace

Computation compute(const ExprPtr& e, long p, const EvalConfig& cfg) {
    ExprPtr folded = fold_exact(e);
    Evaluator ev(cfg);
    Computation out;
    std::unique_ptr<TraceNode> root;
    TraceNode* tr = nullptr;
    if (cfg.trace_enabled) {
        root = std::make_unique<TraceNode>();
        tr = root.get();
    }
    Val v = ev.eval(folded, p, tr);
    out.value = v.v;
    out.exact = v.exact;
    out.delivered = v.exact ? p : v.delivered;
    if (root) {
        int next_id = 0;
        // pre-order ids
        std::vector<TraceNode*> stack{root.get()};
        while (!stack.empty()) {
            TraceNode* n = stack.back();
            stack.pop_back();
            n->id = next_id++;
            for (auto it = n->kids.rbegin(); it != n->kids.rend(); ++it) stack.push_back(it->get());
        }
        out.trace = std::move(root);
    }
    return out;
}

Rational pi_approx(long p, const EvalConfig& cfg) {
    Evaluator ev(cfg);
    return ev.pi_at(p, SourceSpan{});
}

}  // namespace exactreal
