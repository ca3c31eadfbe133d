#pragma once

#include <optional>
#include <string>
#include <vector>

#include "exactreal/engine.hpp"
#include "exactreal/expression.hpp"

namespace exactreal {

enum class ConditionClass {
    ConstantBounded,
    ArgumentDependent,
    IllConditionedNearSingularity,
};

const char* condition_class_name(ConditionClass c);

struct ConditionEstimate {
    int node = 0;
    Kind op = Kind::Const;
    Rational condition;   // nonnegative; ignore when infinite
    bool infinite = false;
    ConditionClass cls = ConditionClass::ConstantBounded;
    bool flagged = false;  // expected-iteration flag
};

struct ConditionReport {
    std::vector<ConditionEstimate> nodes;
    Rational threshold;
    // max finite-difference sensitivity over constant-value groups;
    // absent when the expression folds to a constant or evaluation fails
    std::optional<Rational> whole_expression_condition;
};

struct AnalyzeConfig {
    long working_prec = 12;   // precision for evaluating condition factors
    Rational threshold = 4;   // flag loops whose condition exceeds this
    EvalConfig eval;
};

// |x f'(x)/f(x)| at a for the unary operations:
//   neg, inv -> 1   sqrt -> 1/2   exp -> |a|   ln -> |1/ln a|
//   arctan -> |a/((1+a^2) arctan a)|   sin -> |a cot a|   cos -> |a tan a|
// Transcendental factors are engine-evaluated at working_prec; for
// |a| >= 1 arctan uses the bracket arctan(a) > 3/4 instead.
// DomainError outside the operation's domain.
Rational condition_unary(Kind op, const Rational& a, const AnalyzeConfig& cfg = {});

// (|a|+|b|)/|a+b| exactly; nullopt encodes the infinite sentinel a+b == 0.
std::optional<Rational> condition_add(const Rational& a, const Rational& b);

// Always 2 for nonzero arguments.
Rational condition_mul(const Rational& a, const Rational& b);

// Per-node condition estimates over the folded expression, plus the
// whole-expression sensitivity probe. Node ids are pre-order indices.
ConditionReport analyze(const ExprPtr& e, const AnalyzeConfig& cfg = {});

// JSON per the CLI schema: report:[{node,op,condition,class,flagged}].
std::string report_to_json(const ConditionReport& report);

}  // namespace exactreal
