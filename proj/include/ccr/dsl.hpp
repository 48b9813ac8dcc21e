#pragma once

#include <cctype>
#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ccr/errors.hpp"
#include "ccr/opcore.hpp"
#include "ccr/operators.hpp"
#include "ccr/poly.hpp"
#include "ccr/qnum.hpp"

/*
 * Operator language.
 *
 *   input   = expr ;
 *   expr    = term , { ( "+" | "-" ) , term } ;
 *   term    = unary , { "*" , unary } ;
 *   unary   = "-" , unary | power ;
 *   power   = primary , [ "^" , digits ] ;
 *   primary = number | atom | call | "(" , expr , ")" ;
 *   call    = ( "qb" | "qn" | "inv" | "exp" | "poly" ) , "(" , expr , ")" ;
 *   atom    = "x" | "d" | "Dq" | "xq" | "Ddelta" | "xdelta" | "A" | "B"
 *           | "S" | "Mq" | "U" | "q" | "delta" ;
 *   number  = digits , [ "/" , digits ] ;
 *
 * "*" is the noncommutative operator product; the right factor acts first.
 * qb, qn and inv take diagonal arguments only. A whole input of the form
 * poly(...) denotes a polynomial rather than an operator.
 */

namespace ccr::dsl {

struct Params {
    std::optional<Rational> q;
    std::optional<Rational> delta;
    /// Largest index for which q-numbers are tabulated.
    std::size_t max_index = 64;
};

using Parsed = std::variant<OpExpr, Poly>;

namespace detail {

enum class Tok { Number, Ident, Plus, Minus, Star, Caret, LParen, RParen, End };

struct Token {
    Tok kind;
    std::string text;
    std::size_t line;
    std::size_t col;
};

inline std::vector<Token> lex(std::string_view s) {
    std::vector<Token> out;
    std::size_t line = 1, col = 1, i = 0;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k, ++i) {
            if (s[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    };
    while (i < s.size()) {
        char c = s[i];
        if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
            advance(1);
            continue;
        }
        std::size_t l = line, cc = col;
        auto isdig = [](char ch) { return ch >= '0' && ch <= '9'; };
        auto isalpha_ = [](char ch) { return (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') || ch == '_'; };
        if (isdig(c)) {
            std::size_t j = i;
            while (j < s.size() && isdig(s[j])) ++j;
            if (j + 1 < s.size() && s[j] == '/' && isdig(s[j + 1])) {
                ++j;
                while (j < s.size() && isdig(s[j])) ++j;
            }
            out.push_back({Tok::Number, std::string(s.substr(i, j - i)), l, cc});
            advance(j - i);
            continue;
        }
        if (isalpha_(c)) {
            std::size_t j = i;
            while (j < s.size() && (isalpha_(s[j]) || isdig(s[j]))) ++j;
            out.push_back({Tok::Ident, std::string(s.substr(i, j - i)), l, cc});
            advance(j - i);
            continue;
        }
        Tok k;
        switch (c) {
        case '+': k = Tok::Plus; break;
        case '-': k = Tok::Minus; break;
        case '*': k = Tok::Star; break;
        case '^': k = Tok::Caret; break;
        case '(': k = Tok::LParen; break;
        case ')': k = Tok::RParen; break;
        default: {
            std::string shown = (static_cast<unsigned char>(c) >= 32 && static_cast<unsigned char>(c) < 127)
                                    ? std::string("'") + c + "'"
                                    : "byte " + std::to_string(static_cast<unsigned char>(c));
            throw parse_error(l, cc, "unexpected character " + shown);
        }
        }
        out.push_back({k, std::string(1, c), l, cc});
        advance(1);
    }
    out.push_back({Tok::End, "", line, col});
    return out;
}

constexpr std::size_t kMaxDepth = 200;
constexpr unsigned long kMaxExponent = 256;

} // namespace detail

std::string print(const OpExpr& e);
std::string print(const Poly& p);

namespace detail {

enum class Ctx { Top, SumTerm, Factor, Base };

inline bool is_neg_scaled(const OpExpr& e) {
    auto s = e.as<ScaledNode>();
    return s && s->scalar.sign() < 0;
}

inline std::string print_at(const OpExpr& e, Ctx ctx);

inline std::string frame_suffix(const std::shared_ptr<const Frame>& f) { return f ? "@[" + f->label() + "]" : ""; }

inline std::string print_at(const OpExpr& e, Ctx ctx) {
    auto paren = [](const std::string& s) { return "(" + s + ")"; };
    if (auto g = e.as<GenNode>()) return g->which == Generator::X ? "x" : "d";
    if (auto n = e.as<NamedNode>()) return n->label;
    if (auto dn = e.as<DiagNode>()) return dn->name + frame_suffix(dn->frame);
    if (auto in = e.as<InvNode>()) return "inv(" + in->diag.name + ")" + frame_suffix(in->diag.frame);
    if (auto ex = e.as<ExpNode>()) return "exp(" + print_at(ex->arg, Ctx::Top) + ")";
    if (auto pw = e.as<PowerNode>()) {
        std::string s = print_at(pw->base, Ctx::Base) + "^" + std::to_string(pw->exponent);
        return ctx >= Ctx::Base ? paren(s) : s;
    }
    if (auto pr = e.as<ProductNode>()) {
        if (pr->factors.empty()) return "1";
        std::string s;
        for (std::size_t i = 0; i < pr->factors.size(); ++i) {
            if (i) s += "*";
            s += print_at(pr->factors[i], Ctx::Factor);
        }
        return (ctx >= Ctx::Factor && pr->factors.size() > 1) ? paren(s) : s;
    }
    if (auto sm = e.as<SumNode>()) {
        if (sm->terms.empty()) return "0";
        std::string s;
        for (std::size_t i = 0; i < sm->terms.size(); ++i) {
            const OpExpr& t = sm->terms[i];
            if (i == 0) {
                s += print_at(t, Ctx::SumTerm);
            } else if (is_neg_scaled(t)) {
                auto sc = t.as<ScaledNode>();
                s += " - " + print_at(op::scaled(-sc->scalar, sc->arg), Ctx::SumTerm);
            } else {
                s += " + " + print_at(t, Ctx::SumTerm);
            }
        }
        return ctx >= Ctx::SumTerm ? paren(s) : s;
    }
    const auto& sc = *e.as<ScaledNode>();
    std::string s;
    if (sc.arg.is_identity()) {
        s = sc.scalar.to_string();
        bool simple = sc.scalar.is_integer() && sc.scalar.sign() >= 0;
        if (ctx >= Ctx::Base && !simple) return paren(s);
        if (ctx >= Ctx::Factor && sc.scalar.sign() < 0) return paren(s);
        return s;
    }
    if (sc.scalar.is_one())
        s = print_at(sc.arg, ctx);
    else if (sc.scalar == Rational(-1))
        s = "-" + print_at(sc.arg, Ctx::Factor);
    else
        s = sc.scalar.to_string() + "*" + print_at(sc.arg, Ctx::Factor);
    if (sc.scalar.is_one()) return s;
    return ctx >= Ctx::Factor ? paren(s) : s;
}

class Parser {
public:
    Parser(std::string_view text, Params params) : toks_(lex(text)), params_(std::move(params)) {}

    Parsed parse_input() {
        // A lone poly(...) literal is a polynomial value.
        if (peek().kind == Tok::Ident && peek().text == "poly" && toks_.size() >= 3 && toks_[1].kind == Tok::LParen) {
            std::size_t save = pos_;
            next();
            next();
            Poly p = poly_expr();
            expect(Tok::RParen, "')'");
            if (peek().kind == Tok::End) return p;
            pos_ = save;
        }
        OpExpr e = expr();
        if (peek().kind != Tok::End) fail(peek(), "unexpected '" + peek().text + "'");
        return e;
    }

private:
    [[noreturn]] static void fail(const Token& t, const std::string& msg) { throw parse_error(t.line, t.col, msg); }

    const Token& peek() const { return toks_[pos_]; }
    const Token& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
    void expect(Tok k, const char* what) {
        if (peek().kind != k) fail(peek(), std::string("expected ") + what + (peek().kind == Tok::End ? " before end of input" : ", found '" + peek().text + "'"));
        next();
    }

    struct DepthGuard {
        Parser& p;
        DepthGuard(Parser& pp, const Token& at) : p(pp) {
            if (++p.depth_ > kMaxDepth) fail(at, "expression nested too deeply");
        }
        ~DepthGuard() { --p.depth_; }
    };

    std::shared_ptr<const QContext> qctx(const Token& at) {
        if (!params_.q) fail(at, "'" + at.text + "' needs q, which is unbound");
        if (!ctx_) {
            try {
                ctx_ = QContext::make(*params_.q, params_.max_index);
            } catch (const ccr::error& e) {
                fail(at, e.what());
            }
        }
        return ctx_;
    }
    const Rational& delta(const Token& at) {
        if (!params_.delta) fail(at, "'" + at.text + "' needs delta, which is unbound");
        if (params_.delta->is_zero() && at.text != "delta") fail(at, "'" + at.text + "' needs delta != 0");
        return *params_.delta;
    }

    Rational number(const Token& t) {
        try {
            return Rational::parse(t.text);
        } catch (const ccr::error& e) {
            fail(t, e.what());
        }
    }

    unsigned exponent() {
        const Token& t = peek();
        if (t.kind != Tok::Number || t.text.find('/') != std::string::npos) fail(t, "exponent must be a natural number");
        next();
        if (t.text.size() > 6 || std::stoul(t.text) > kMaxExponent)
            fail(t, "exponent larger than " + std::to_string(kMaxExponent));
        return static_cast<unsigned>(std::stoul(t.text));
    }

    // Operator grammar -------------------------------------------------------

    OpExpr expr() {
        DepthGuard g(*this, peek());
        std::vector<OpExpr> terms{term()};
        while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
            bool minus = next().kind == Tok::Minus;
            OpExpr t = term();
            terms.push_back(minus ? negate(t) : t);
        }
        if (terms.size() == 1) return terms.front();
        return op::sum(std::move(terms));
    }

    static OpExpr negate(const OpExpr& e) {
        if (auto s = e.as<ScaledNode>()) return op::scaled(-s->scalar, s->arg);
        return op::scaled(Rational(-1), e);
    }

    // Scalars are pulled to the front of a product.
    OpExpr term() {
        std::vector<OpExpr> raw{unary()};
        while (peek().kind == Tok::Star) {
            next();
            raw.push_back(unary());
        }
        if (raw.size() == 1) return raw.front();
        Rational coef(1);
        std::vector<OpExpr> factors;
        for (auto& f : raw) {
            if (auto s = f.as<ScaledNode>()) {
                coef *= s->scalar;
                if (!s->arg.is_identity()) factors.push_back(s->arg);
            } else {
                factors.push_back(f);
            }
        }
        OpExpr body = factors.empty() ? op::identity() : (factors.size() == 1 ? factors.front() : op::product(std::move(factors)));
        if (coef.is_one() && !body.is_identity()) return body;
        return op::scaled(coef, body);
    }

    OpExpr unary() {
        if (peek().kind == Tok::Minus) {
            DepthGuard g(*this, peek());
            next();
            return negate(unary());
        }
        return power();
    }

    OpExpr power() {
        OpExpr base = primary();
        if (peek().kind == Tok::Caret) {
            next();
            return op::power(base, exponent());
        }
        return base;
    }

    SpectralFn require_diagonal(const OpExpr& e, const Token& at, const std::string& fn) {
        auto g = diagonal_spectrum(e);
        if (!g) fail(at, fn + "(...) requires a diagonal argument (a function of A or B)");
        return *g;
    }

    OpExpr primary() {
        const Token t = peek();
        switch (t.kind) {
        case Tok::Number: next(); return op::scalar(number(t));
        case Tok::LParen: {
            next();
            OpExpr e = expr();
            expect(Tok::RParen, "')'");
            return e;
        }
        case Tok::Ident: break;
        default: fail(t, t.kind == Tok::End ? "unexpected end of input" : "unexpected '" + t.text + "'");
        }
        next();
        if (peek().kind == Tok::LParen && is_call(t.text)) return call(t);
        return atom(t);
    }

    static bool is_call(const std::string& s) {
        return s == "qb" || s == "qn" || s == "inv" || s == "exp" || s == "poly";
    }

    OpExpr call(const Token& fn) {
        DepthGuard g(*this, fn);
        next();  // '('
        if (fn.text == "poly") {
            Poly p = poly_expr();
            expect(Tok::RParen, "')'");
            return op::named("poly(" + print(p) + ")", ops::multiply_by(p));
        }
        const Token arg_tok = peek();
        OpExpr arg = expr();
        expect(Tok::RParen, "')'");
        if (fn.text == "exp") return op::exp(arg);
        std::string arg_text = print(arg);
        if (fn.text == "inv") {
            if (auto dn = arg.as<DiagNode>(); dn && !dn->frame) return op::inv(*dn);
            SpectralFn gfn = require_diagonal(arg, arg_tok, "inv");
            return op::inv(op::diag_fn(arg_text, gfn));
        }
        SpectralFn gfn = require_diagonal(arg, arg_tok, fn.text);
        auto ctx = qctx(fn);
        if (fn.text == "qb") return op::diag(ops::dbracket_of(ctx, arg_text, gfn));
        return op::diag(ops::qnumber_of(ctx, arg_text, gfn));
    }

    OpExpr atom(const Token& t) {
        const std::string& s = t.text;
        if (s == "x") return op::x();
        if (s == "d") return op::d();
        if (s == "A") return ops::degree_A();
        if (s == "B") return ops::degree_B();
        if (s == "Dq") return ops::jackson_derivative(qctx(t));
        if (s == "xq") return ops::jackson_conjugate(qctx(t));
        if (s == "S") return ops::jackson_integral(qctx(t));
        if (s == "Mq") return ops::quantum_average(qctx(t));
        if (s == "U") return ops::similarity(qctx(t));
        if (s == "q") return op::scalar(qctx(t)->q());
        if (s == "Ddelta") return ops::delta_derivative(delta(t));
        if (s == "xdelta") return ops::delta_conjugate(delta(t));
        if (s == "delta") return op::scalar(delta(t));
        if (is_call(s)) fail(t, "'" + s + "' must be followed by '('");
        fail(t, "unknown identifier '" + s + "'");
    }

    // Polynomial grammar (same shape, commutative, atoms x, q, delta) --------

    Poly poly_expr() {
        DepthGuard g(*this, peek());
        Poly acc = poly_term();
        while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
            bool minus = next().kind == Tok::Minus;
            Poly t = poly_term();
            acc += minus ? -t : t;
        }
        return acc;
    }
    Poly poly_term() {
        Poly acc = poly_unary();
        while (peek().kind == Tok::Star) {
            next();
            acc = acc * poly_unary();
        }
        return acc;
    }
    Poly poly_unary() {
        if (peek().kind == Tok::Minus) {
            DepthGuard g(*this, peek());
            next();
            return -poly_unary();
        }
        Poly base = poly_primary();
        if (peek().kind == Tok::Caret) {
            next();
            unsigned n = exponent();
            Poly r = Poly::constant(Rational(1));
            for (unsigned i = 0; i < n; ++i) r = r * base;
            return r;
        }
        return base;
    }
    Poly poly_primary() {
        const Token t = peek();
        switch (t.kind) {
        case Tok::Number: next(); return Poly::constant(number(t));
        case Tok::LParen: {
            next();
            Poly p = poly_expr();
            expect(Tok::RParen, "')'");
            return p;
        }
        case Tok::Ident:
            next();
            if (t.text == "x") return Poly::monomial(1);
            if (t.text == "q") return Poly::constant(qctx(t)->q());
            if (t.text == "delta") return Poly::constant(delta(t));
            fail(t, "'" + t.text + "' is not allowed inside poly(...)");
        default: fail(t, t.kind == Tok::End ? "unexpected end of input" : "unexpected '" + t.text + "'");
        }
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    std::size_t depth_ = 0;
    Params params_;
    std::shared_ptr<const QContext> ctx_;
};

} // namespace detail

/// Parses an operator expression, or a polynomial when the input is a single poly(...).
inline Parsed parse(std::string_view text, const Params& params = {}) {
    return detail::Parser(text, params).parse_input();
}

inline OpExpr parse_operator(std::string_view text, const Params& params = {}) {
    Parsed r = parse(text, params);
    if (auto e = std::get_if<OpExpr>(&r)) return *e;
    // poly(...) used where an operator is expected acts by multiplication.
    const Poly& p = std::get<Poly>(r);
    return op::named("poly(" + print(p) + ")", ops::multiply_by(p));
}

inline Poly parse_poly(std::string_view text, const Params& params = {}) {
    Parsed r = parse(text, params);
    if (auto p = std::get_if<Poly>(&r)) return *p;
    throw parse_error(1, 1, "expected a polynomial literal poly(...)");
}

/// Canonical text of an expression; reparsing it gives an expression with the same action.
inline std::string print(const OpExpr& e) { return detail::print_at(e, detail::Ctx::Top); }

/// Descending-degree text, e.g. "7/4*x^2 - x + 1". Falling bases print x^(n) for x_delta^(n).
inline std::string print(const Poly& p) {
    if (p.is_zero()) return "0";
    const bool falling = !p.is_monomial_basis();
    std::string s;
    bool first = true;
    for (std::size_t i = p.coeffs().size(); i-- > 0;) {
        const Rational& c = p.coeffs()[i];
        if (c.is_zero()) continue;
        Rational a = abs(c);
        std::string mono = i == 0 ? "" : (falling ? "x^(" + std::to_string(i) + ")" : (i == 1 ? "x" : "x^" + std::to_string(i)));
        std::string body;
        if (mono.empty())
            body = a.to_string();
        else if (a.is_one())
            body = mono;
        else
            body = a.to_string() + "*" + mono;
        if (first)
            s += (c.sign() < 0 ? "-" : "") + body;
        else
            s += (c.sign() < 0 ? " - " : " + ") + body;
        first = false;
    }
    return s;
}

inline std::string print_literal(const Poly& p) { return "poly(" + print(p) + ")"; }

} // namespace ccr::dsl
