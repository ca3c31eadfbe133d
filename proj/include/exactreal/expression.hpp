#pragma once

#include <memory>
#include <string>
#include <vector>

#include "exactreal/rational.hpp"

namespace exactreal {

enum class Kind {
    Const,
    Neg,
    Add,
    Mul,
    Inv,
    Sqrt,
    Exp,
    Ln,
    Arctan,
    Sin,
    Cos,
};

const char* kind_name(Kind k);

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

// Immutable AST node. Arity is fixed by kind (Const: 0, Add/Mul: 2, rest: 1).
struct Expr {
    Kind kind;
    Rational constant;  // meaningful iff kind == Const
    std::vector<ExprPtr> kids;
    SourceSpan span;

    bool is_const() const { return kind == Kind::Const; }
};

ExprPtr make_const(Rational value, SourceSpan span = {});
ExprPtr make_unary(Kind k, ExprPtr child, SourceSpan span = {});
ExprPtr make_binary(Kind k, ExprPtr lhs, ExprPtr rhs, SourceSpan span = {});

// Structural equality (spans ignored).
bool equal(const ExprPtr& a, const ExprPtr& b);

// Parses the expression language:
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := '-' factor | atom
//   atom   := INTEGER | DECIMAL | NAME '(' expr ')' | '(' expr ')'
// NAME in {sqrt,exp,ln,arctan,sin,cos,tan,cot,arcsin,arccos,arccot,inv}.
// Binary '-' and '/' desugar to Add(a, Neg(b)) and Mul(a, Inv(b)); decimal
// literals become exact rationals; derived names expand per
// rewrite_derived. Throws ParseError with a SourceSpan.
ExprPtr parse(const std::string& text);

// Expands tan/cot/arcsin/arccos/arccot into the core grammar.
ExprPtr rewrite_derived(const std::string& name, ExprPtr arg, SourceSpan span = {});

// Minimal-parenthesis text form; parse(to_text(e)) == e for parser outputs.
std::string to_text(const ExprPtr& e);

// Replaces every maximal {Const,Neg,Add,Mul,Inv}-only subtree by its exact
// rational value and resolves the exact special points:
//   Sqrt(0) -> 0   Sin(0) -> 0   Arctan(0) -> 0
//   Ln(1) -> 0     Exp(0) -> 1   Cos(0) -> 1
// Throws DomainError for Inv(0), Ln of a nonpositive constant, Sqrt of a
// negative constant. Idempotent.
ExprPtr fold_exact(const ExprPtr& e);

// The explicitly-invoked cancellation rewrite: sqrt(a) - sqrt(b) becomes
// (a - b) * inv(sqrt(a) + sqrt(b)). Applied recursively wherever the
// pattern occurs; everything else is left alone. Never applied by the
// engine on its own.
ExprPtr rewrite_sqrt_difference(const ExprPtr& e);

}  // namespace exactreal
