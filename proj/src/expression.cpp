#include "exactreal/expression.hpp"

#include <cctype>
#include <map>
#include <sstream>

namespace exactreal {

const char* kind_name(Kind k) {
    switch (k) {
        case Kind::Const: return "const";
        case Kind::Neg: return "neg";
        case Kind::Add: return "add";
        case Kind::Mul: return "mul";
        case Kind::Inv: return "inv";
        case Kind::Sqrt: return "sqrt";
        case Kind::Exp: return "exp";
        case Kind::Ln: return "ln";
        case Kind::Arctan: return "arctan";
        case Kind::Sin: return "sin";
        case Kind::Cos: return "cos";
    }
    return "?";
}

ExprPtr make_const(Rational value, SourceSpan span) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::Const;
    e->constant = std::move(value);
    e->span = span;
    return e;
}

ExprPtr make_unary(Kind k, ExprPtr child, SourceSpan span) {
    auto e = std::make_shared<Expr>();
    e->kind = k;
    e->kids = {std::move(child)};
    e->span = span;
    return e;
}

ExprPtr make_binary(Kind k, ExprPtr lhs, ExprPtr rhs, SourceSpan span) {
    auto e = std::make_shared<Expr>();
    e->kind = k;
    e->kids = {std::move(lhs), std::move(rhs)};
    e->span = span;
    return e;
}

bool equal(const ExprPtr& a, const ExprPtr& b) {
    if (a.get() == b.get()) return true;
    if (a->kind != b->kind) return false;
    if (a->kind == Kind::Const) return a->constant == b->constant;
    if (a->kids.size() != b->kids.size()) return false;
    for (std::size_t i = 0; i < a->kids.size(); ++i) {
        if (!equal(a->kids[i], b->kids[i])) return false;
    }
    return true;
}

// ---------------------------------------------------------------- parsing

namespace {

struct Lexer {
    const std::string& text;
    std::size_t pos = 0;

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }
    bool eof() {
        skip_ws();
        return pos >= text.size();
    }
    char peek() {
        skip_ws();
        return pos < text.size() ? text[pos] : '\0';
    }
};

struct Parser {
    Lexer lex;

    explicit Parser(const std::string& t) : lex{t} {}

    [[noreturn]] void fail(const std::string& msg, std::size_t at, std::size_t end) {
        throw ParseError(msg, SourceSpan{at, end});
    }

    bool accept(char c) {
        if (lex.peek() == c) {
            ++lex.pos;
            return true;
        }
        return false;
    }

    void expect(char c, const char* what) {
        if (!accept(c)) {
            fail(std::string("expected ") + what, lex.pos, lex.pos + 1);
        }
    }

    ExprPtr parse_expr() {
        std::size_t start = lex.pos;
        ExprPtr acc = parse_term();
        for (;;) {
            if (accept('+')) {
                ExprPtr rhs = parse_term();
                acc = make_binary(Kind::Add, acc, rhs, SourceSpan{start, lex.pos});
            } else if (accept('-')) {
                std::size_t op_at = lex.pos - 1;
                ExprPtr rhs = parse_term();
                acc = make_binary(Kind::Add, acc,
                                  make_unary(Kind::Neg, rhs, SourceSpan{op_at, lex.pos}),
                                  SourceSpan{start, lex.pos});
            } else {
                return acc;
            }
        }
    }

    ExprPtr parse_term() {
        std::size_t start = lex.pos;
        ExprPtr acc = parse_factor();
        for (;;) {
            if (accept('*')) {
                ExprPtr rhs = parse_factor();
                acc = make_binary(Kind::Mul, acc, rhs, SourceSpan{start, lex.pos});
            } else if (accept('/')) {
                std::size_t op_at = lex.pos - 1;
                ExprPtr rhs = parse_factor();
                acc = make_binary(Kind::Mul, acc,
                                  make_unary(Kind::Inv, rhs, SourceSpan{op_at, lex.pos}),
                                  SourceSpan{start, lex.pos});
            } else {
                return acc;
            }
        }
    }

    ExprPtr parse_factor() {
        if (accept('-')) {
            std::size_t at = lex.pos - 1;
            ExprPtr inner = parse_factor();
            return make_unary(Kind::Neg, inner, SourceSpan{at, lex.pos});
        }
        return parse_atom();
    }

    ExprPtr parse_atom() {
        char c = lex.peek();
        std::size_t start = lex.pos;
        if (c == '(') {
            ++lex.pos;
            ExprPtr inner = parse_expr();
            expect(')', "')'");
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            return parse_number();
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            std::string name;
            while (lex.pos < lex.text.size() &&
                   std::isalpha(static_cast<unsigned char>(lex.text[lex.pos]))) {
                name += lex.text[lex.pos++];
            }
            SourceSpan name_span{start, lex.pos};
            expect('(', "'(' after function name");
            ExprPtr arg = parse_expr();
            expect(')', "')'");
            SourceSpan full{start, lex.pos};
            static const std::map<std::string, Kind> core = {
                {"sqrt", Kind::Sqrt}, {"exp", Kind::Exp},   {"ln", Kind::Ln},
                {"arctan", Kind::Arctan}, {"sin", Kind::Sin}, {"cos", Kind::Cos},
                {"inv", Kind::Inv},
            };
            if (auto it = core.find(name); it != core.end()) {
                return make_unary(it->second, arg, full);
            }
            if (name == "tan" || name == "cot" || name == "arcsin" || name == "arccos" ||
                name == "arccot") {
                return rewrite_derived(name, arg, full);
            }
            fail("unknown function '" + name + "'", name_span.start, name_span.end);
        }
        fail(c == '\0' ? "unexpected end of input" : std::string("unexpected character '") + c + "'",
             start, start + 1);
    }

    ExprPtr parse_number() {
        std::size_t start = lex.pos;
        std::string digits;
        while (lex.pos < lex.text.size() &&
               std::isdigit(static_cast<unsigned char>(lex.text[lex.pos]))) {
            digits += lex.text[lex.pos++];
        }
        if (lex.pos < lex.text.size() && lex.text[lex.pos] == '.') {
            ++lex.pos;
            std::string frac;
            while (lex.pos < lex.text.size() &&
                   std::isdigit(static_cast<unsigned char>(lex.text[lex.pos]))) {
                frac += lex.text[lex.pos++];
            }
            SourceSpan span{start, lex.pos};
            if (frac.empty()) {
                fail("malformed decimal literal", start, lex.pos);
            }
            Integer whole = integer_from_string(digits + frac, span);
            Integer scale = pow_uint(10, frac.size());
            return make_const(normalize(whole, scale), span);
        }
        SourceSpan span{start, lex.pos};
        return make_const(Rational(integer_from_string(digits, span)), span);
    }
};

}  // namespace

ExprPtr parse(const std::string& text) {
    Parser p(text);
    if (p.lex.eof()) {
        throw ParseError("empty expression", SourceSpan{0, 0});
    }
    ExprPtr e = p.parse_expr();
    if (!p.lex.eof()) {
        throw ParseError("trailing input", SourceSpan{p.lex.pos, text.size()});
    }
    return e;
}

ExprPtr rewrite_derived(const std::string& name, ExprPtr arg, SourceSpan span) {
    auto one = [&] { return make_const(Rational(1), span); };
    auto tan_of = [&](ExprPtr x) {
        return make_binary(Kind::Mul, make_unary(Kind::Sin, x, span),
                           make_unary(Kind::Inv, make_unary(Kind::Cos, x, span), span), span);
    };
    // sqrt(1 - x^2) resp. sqrt(1 + x^2)
    auto root_one_plus = [&](ExprPtr x, bool minus) {
        ExprPtr sq = make_binary(Kind::Mul, x, x, span);
        ExprPtr second = minus ? make_unary(Kind::Neg, sq, span) : sq;
        return make_unary(Kind::Sqrt, make_binary(Kind::Add, one(), second, span), span);
    };
    auto arccos_of = [&](ExprPtr x) {
        return make_unary(Kind::Arctan,
                          make_binary(Kind::Mul, root_one_plus(x, true),
                                      make_unary(Kind::Inv, x, span), span),
                          span);
    };
    if (name == "tan") return tan_of(arg);
    if (name == "cot") return make_unary(Kind::Inv, tan_of(arg), span);
    if (name == "arcsin") {
        return make_unary(Kind::Arctan,
                          make_binary(Kind::Mul, arg,
                                      make_unary(Kind::Inv, root_one_plus(arg, true), span), span),
                          span);
    }
    if (name == "arccos") return arccos_of(arg);
    if (name == "arccot") {
        ExprPtr inner = make_binary(Kind::Mul, arg,
                                    make_unary(Kind::Inv, root_one_plus(arg, false), span), span);
        return arccos_of(inner);
    }
    throw ParseError("unknown derived function '" + name + "'", span);
}

// ----------------------------------------------------------- pretty print

namespace {

// Precedence levels for printing: 0 additive, 1 multiplicative, 2 unary/atom.
void print(std::ostringstream& out, const ExprPtr& e, int parent_level) {
    switch (e->kind) {
        case Kind::Const: {
            bool neg = sgn(e->constant) < 0;
            Rational q = abs(e->constant);
            std::string body;
            int level = 2;  // atom
            if (q.get_den() == 1) {
                body = q.get_num().get_str();
            } else {
                // denominators of the form 2^a 5^b have an exact decimal form,
                // which reparses to the same Const node
                Integer den = q.get_den();
                unsigned long twos = 0, fives = 0;
                while (mpz_even_p(den.get_mpz_t())) { den >>= 1; ++twos; }
                while (mpz_divisible_ui_p(den.get_mpz_t(), 5)) { den /= 5; ++fives; }
                if (den == 1) {
                    unsigned long k = std::max(twos, fives);
                    Integer digits = q.get_num() * pow_uint(2, k - twos) * pow_uint(5, k - fives);
                    std::string s = digits.get_str();
                    if (s.size() <= k) s.insert(0, std::string(k + 1 - s.size(), '0'));
                    s.insert(s.size() - k, ".");
                    body = s;
                } else {
                    body = q.get_str();  // a/b: term-level syntax on reparse
                    level = 1;
                }
            }
            if (neg) {
                body = "-" + body;
                level = 0;
            }
            bool paren = parent_level > level;
            out << (paren ? "(" + body + ")" : body);
            return;
        }
        case Kind::Neg: {
            bool paren = parent_level >= 1;
            if (paren) out << "(";
            out << "-";
            print(out, e->kids[0], 2);
            if (paren) out << ")";
            return;
        }
        case Kind::Add: {
            bool paren = parent_level >= 1;
            if (paren) out << "(";
            print(out, e->kids[0], 0);
            const ExprPtr& rhs = e->kids[1];
            if (rhs->kind == Kind::Neg) {
                out << " - ";
                print(out, rhs->kids[0], 1);
            } else {
                out << " + ";
                print(out, rhs, 1);
            }
            if (paren) out << ")";
            return;
        }
        case Kind::Mul: {
            bool paren = parent_level >= 2;
            if (paren) out << "(";
            print(out, e->kids[0], 1);
            const ExprPtr& rhs = e->kids[1];
            if (rhs->kind == Kind::Inv) {
                out << " / ";
                print(out, rhs->kids[0], 2);
            } else {
                out << " * ";
                print(out, rhs, 2);
            }
            if (paren) out << ")";
            return;
        }
        case Kind::Inv:
        case Kind::Sqrt:
        case Kind::Exp:
        case Kind::Ln:
        case Kind::Arctan:
        case Kind::Sin:
        case Kind::Cos: {
            out << kind_name(e->kind) << "(";
            print(out, e->kids[0], 0);
            out << ")";
            return;
        }
    }
}

}  // namespace

std::string to_text(const ExprPtr& e) {
    std::ostringstream out;
    print(out, e, 0);
    return out.str();
}

// ----------------------------------------------------------------- folding

namespace {

bool is_zero_const(const ExprPtr& e) { return e->is_const() && e->constant == 0; }

ExprPtr fold_node(const ExprPtr& e) {
    if (e->is_const()) return e;

    std::vector<ExprPtr> kids;
    kids.reserve(e->kids.size());
    bool changed = false;
    bool all_const = true;
    for (const auto& k : e->kids) {
        ExprPtr f = fold_node(k);
        changed |= (f.get() != k.get());
        all_const &= f->is_const();
        kids.push_back(std::move(f));
    }

    auto rebuilt = [&]() -> ExprPtr {
        if (!changed) return e;
        auto n = std::make_shared<Expr>();
        n->kind = e->kind;
        n->kids = kids;
        n->span = e->span;
        return n;
    };

    switch (e->kind) {
        case Kind::Neg:
            if (all_const) return make_const(-kids[0]->constant, e->span);
            return rebuilt();
        case Kind::Add:
            if (all_const) return make_const(kids[0]->constant + kids[1]->constant, e->span);
            return rebuilt();
        case Kind::Mul:
            if (all_const) return make_const(kids[0]->constant * kids[1]->constant, e->span);
            return rebuilt();
        case Kind::Inv:
            if (all_const) {
                if (kids[0]->constant == 0) {
                    throw DomainError("inverse of zero", e->span);
                }
                return make_const(rat_inv(kids[0]->constant), e->span);
            }
            return rebuilt();
        case Kind::Sqrt:
            if (all_const) {
                if (sgn(kids[0]->constant) < 0) {
                    throw DomainError("square root of a negative value", e->span);
                }
                if (kids[0]->constant == 0) return make_const(Rational(0), e->span);
            }
            return rebuilt();
        case Kind::Ln:
            if (all_const) {
                if (sgn(kids[0]->constant) <= 0) {
                    throw DomainError("logarithm of a nonpositive value", e->span);
                }
                if (kids[0]->constant == 1) return make_const(Rational(0), e->span);
            }
            return rebuilt();
        case Kind::Exp:
            if (all_const && is_zero_const(kids[0])) return make_const(Rational(1), e->span);
            return rebuilt();
        case Kind::Sin:
        case Kind::Arctan:
            if (all_const && is_zero_const(kids[0])) return make_const(Rational(0), e->span);
            return rebuilt();
        case Kind::Cos:
            if (all_const && is_zero_const(kids[0])) return make_const(Rational(1), e->span);
            return rebuilt();
        case Kind::Const:
            return e;
    }
    return e;
}

}  // namespace

ExprPtr fold_exact(const ExprPtr& e) {
    return fold_node(e);
}

ExprPtr rewrite_sqrt_difference(const ExprPtr& e) {
    if (e->is_const()) return e;
    std::vector<ExprPtr> kids;
    kids.reserve(e->kids.size());
    bool changed = false;
    for (const auto& k : e->kids) {
        ExprPtr f = rewrite_sqrt_difference(k);
        changed |= (f.get() != k.get());
        kids.push_back(std::move(f));
    }
    auto node = [&]() -> ExprPtr {
        if (!changed) return e;
        auto n = std::make_shared<Expr>();
        n->kind = e->kind;
        n->kids = kids;
        n->span = e->span;
        return n;
    }();

    if (node->kind != Kind::Add) return node;
    const ExprPtr& l = node->kids[0];
    const ExprPtr& r = node->kids[1];
    ExprPtr a, b;  // sqrt(a) - sqrt(b)
    if (l->kind == Kind::Sqrt && r->kind == Kind::Neg && r->kids[0]->kind == Kind::Sqrt) {
        a = l->kids[0];
        b = r->kids[0]->kids[0];
    } else if (l->kind == Kind::Neg && l->kids[0]->kind == Kind::Sqrt && r->kind == Kind::Sqrt) {
        a = r->kids[0];
        b = l->kids[0]->kids[0];
    } else {
        return node;
    }
    SourceSpan sp = node->span;
    ExprPtr diff = make_binary(Kind::Add, a, make_unary(Kind::Neg, b, sp), sp);
    ExprPtr roots = make_binary(Kind::Add, make_unary(Kind::Sqrt, a, sp),
                                make_unary(Kind::Sqrt, b, sp), sp);
    ExprPtr res = make_binary(Kind::Mul, diff, make_unary(Kind::Inv, roots, sp), sp);
    if (l->kind == Kind::Neg) {
        // started as sqrt(b)-negated first: -(sqrt(b)) + sqrt(a) == sqrt(a) - sqrt(b)
        return res;
    }
    return res;
}

}  // namespace exactreal
