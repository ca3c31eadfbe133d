#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "exactreal/approximation.hpp"
#include "exactreal/expression.hpp"

namespace exactreal {

struct EvalConfig {
    long max_refine = 256;        // cap on precision bumps per node
    bool trace_enabled = false;
    unsigned long term_budget = 1ul << 28;  // cap on rectangles per sum
};

// Per-node evaluation telemetry.
struct TraceNode {
    int id = 0;
    Kind op = Kind::Const;
    long requested = 0;
    long delivered = 0;       // claimed precision of the returned value
    long refinements = 0;     // loop iterations beyond the first
    unsigned long terms = 0;  // rectangles / Taylor terms / Newton steps
    std::size_t coeff_bits = 0;  // max numerator/denominator bits seen
    bool exact = false;
    std::vector<std::unique_ptr<TraceNode>> kids;
};

struct Computation {
    Rational value;
    bool exact = false;   // value is the exact real (may be zero)
    long delivered = 0;   // meaningful when !exact
    std::unique_ptr<TraceNode> trace;  // present iff cfg.trace_enabled
};

// Evaluates a (folded) expression so that the result r satisfies
// |v - r| < |r| * 2^-p against the exact real value v, or is exact.
// Folds internally; throws DomainError / PrecisionDivergence with spans.
Computation compute(const ExprPtr& e, long p, const EvalConfig& cfg = {});

// pi = 4*arctan(1) at precision p; cached per process, recomputed only for
// higher p. Safe for concurrent use.
Rational pi_approx(long p, const EvalConfig& cfg = {});

// ----------------------------------------------------------------------
// Parameter selectors and series kernels, exposed for verification. Each
// reproduces a closed form used by the evaluator.
namespace params {

// Square root: least p_x >= p + 4*ceil(log2(log2(2^(p_x+3)+1))) + 4 by
// ascending search from p+8, and Newton step count N = inner(p_x) + 1.
struct SqrtParams {
    long p_x = 0;
    long newton_steps = 0;
};
SqrtParams sqrt_params(long p);
long sqrt_inner(long p_x);  // ceil(log2(log2(2^(p_x+3)+1))), exactly

// Exponential: smallest even N > max(2^ceil((pp+11)/3), 8).
Integer exp_term_count(long pp);

// Natural logarithm: N = ceil(2^(p_x-2) * arg^2 / (arg-1)) for arg > 1.
Integer ln_rect_count(const Rational& arg, long p_x);

// Arctangent: N = 2^(p-2) * ceil(arg^2) for the input precision p (>= 2).
Integer arctan_rect_count(const Rational& arg, long p);

// Smallest odd N with (5/6) (2N+2)! (2N-1)^2 / 2^(2N) > 2^p.
long choose_N_sin(long p);
// Smallest odd N with (2N+1)! (2N-2)^2 / 2^(2N) > 2^p.
long choose_N_cos(long p);

// Bits lost adding opposite-sign a, b per the componentwise rule:
// ceil(log2((1+r)/(1-r))) with r = min(|a|,|b|)/max(|a|,|b|).
// nullopt when |a| == |b| (the log is undefined; forced refinement).
std::optional<long> add_loss_bits(const Rational& a, const Rational& b);

}  // namespace params

// ----------------------------------------------------------------------
// Exact series/bracket kernels (small-N; used by the evaluator for Taylor
// sums and by the verification suites as independent brackets).
namespace series {

// Paired partial sums of the sine/cosine Taylor expansions, N = 2k+1 odd:
//   sin: sum_{i=0..k} q^(4i+1)/(4i+1)! * (1 - q^2/((4i+2)(4i+3)))
//   cos: sum_{i=0..k} q^(4i)  /(4i)!   * (1 - q^2/((4i+1)(4i+2)))
Rational taylor_sin_paired(const Rational& q, long n_odd);
Rational taylor_cos_paired(const Rational& q, long n_odd);

// Plain alternating partial sums (test oracle).
Rational taylor_sin_plain(const Rational& q, long terms);
Rational taylor_cos_plain(const Rational& q, long terms);

// Riemann sums for ln on [1, x], x > 1: upper uses left endpoints
// (i = 0..N-1), lower uses right endpoints (i = 1..N).
Rational riemann_ln_upper(const Rational& x, unsigned long n);
Rational riemann_ln_lower(const Rational& x, unsigned long n);

// Riemann sums for arctan on [0, x], x > 0.
Rational riemann_arctan_upper(const Rational& x, unsigned long n);
Rational riemann_arctan_lower(const Rational& x, unsigned long n);

// The exponential brackets (1+2x/N)^(N/2) and (N/(N-2x))^(N/2), N even > 2x.
Rational exp_bracket_lower(const Rational& x, unsigned long n_even);
Rational exp_bracket_upper(const Rational& x, unsigned long n_even);

}  // namespace series

}  // namespace exactreal
