#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "ccr/errors.hpp"
#include "ccr/linop.hpp"
#include "ccr/opexpr.hpp"
#include "ccr/poly.hpp"

namespace ccr {

struct ApplyOptions {
    /// Drop terms above the truncation degree instead of raising overflow_error.
    bool allow_truncation = false;
};

namespace detail {

class Evaluator {
public:
    Evaluator(std::size_t degree, ApplyOptions opts) : degree_(degree), opts_(opts) {}

    Poly run(const OpExpr& e, const Poly& p) const {
        return std::visit([&](const auto& n) { return eval(n, p); }, e.node().v);
    }

private:
    Poly eval(const GenNode& g, const Poly& p) const {
        if (g.which == Generator::D) return derivative(p);
        if (!p.is_zero() && p.degree() >= static_cast<int>(degree_)) {
            if (!opts_.allow_truncation)
                throw overflow_error("multiplication by x leaves the space of degree <= " + std::to_string(degree_));
            return times_x(p).truncated(degree_);
        }
        return times_x(p);
    }
    Poly eval(const ScaledNode& s, const Poly& p) const {
        if (s.scalar.is_zero()) return Poly();
        return run(s.arg, p) * s.scalar;
    }
    Poly eval(const SumNode& s, const Poly& p) const {
        Poly acc;
        for (const auto& t : s.terms) acc += run(t, p);
        return acc;
    }
    Poly eval(const ProductNode& s, const Poly& p) const {
        Poly acc = p;
        for (auto it = s.factors.rbegin(); it != s.factors.rend(); ++it) {
            if (acc.is_zero()) break;
            acc = run(*it, acc);
        }
        return acc;
    }
    Poly eval(const PowerNode& s, const Poly& p) const {
        Poly acc = p;
        for (unsigned i = 0; i < s.exponent && !acc.is_zero(); ++i) acc = run(s.base, acc);
        return acc;
    }
    Poly eval(const DiagNode& s, const Poly& p) const { return spectral(s, p, false); }
    Poly eval(const InvNode& s, const Poly& p) const { return spectral(s.diag, p, true); }
    Poly eval(const NamedNode& s, const Poly& p) const { return run(s.body, p); }

    // sum_k arg^k / k! applied to p. A degree-lowering argument terminates
    // after at most deg(p) + 1 terms.
    Poly eval(const ExpNode& s, const Poly& p) const {
        Poly acc = p;
        Poly term = p;
        for (std::size_t k = 1; !term.is_zero(); ++k) {
            if (k > degree_ + 2)
                throw nontermination_error("exponential series does not terminate on degree <= " +
                                           std::to_string(degree_));
            try {
                term = run(s.arg, term) * (Rational(1) / Rational(static_cast<unsigned long>(k)));
            } catch (const overflow_error&) {
                throw nontermination_error("exponential of a degree-raising operator on degree <= " +
                                           std::to_string(degree_));
            }
            acc += term;
        }
        return acc;
    }

    Poly spectral(const DiagNode& s, const Poly& p, bool inverse) const {
        std::vector<Rational> c = s.frame ? s.frame->to_coords(p) : p.coeffs();
        for (std::size_t n = 0; n < c.size(); ++n) {
            if (c[n].is_zero()) continue;
            Rational g = s.fn(n);
            if (inverse) {
                if (g.is_zero())
                    throw singular_operator("inv(" + s.name + ") is singular on basis vector " + std::to_string(n));
                c[n] /= g;
            } else {
                c[n] *= g;
            }
        }
        return s.frame ? s.frame->from_coords(c) : Poly(std::move(c));
    }

    std::size_t degree_;
    ApplyOptions opts_;
};

} // namespace detail

/**
 * Exact left action of `e` on a monomial-basis polynomial of degree <= D.
 *
 * Throws overflow_error if any intermediate result leaves the degree-D space
 * (unless opts.allow_truncation), nontermination_error for exponentials that
 * do not terminate, singular_operator for a singular inverse.
 */
inline Poly apply(const OpExpr& e, const Poly& p, Truncation t, ApplyOptions opts = {}) {
    if (!p.is_monomial_basis()) throw unsupported_operation("apply expects a monomial-basis polynomial");
    if (p.degree() > static_cast<int>(t.degree))
        throw overflow_error("input degree " + std::to_string(p.degree()) + " exceeds truncation " +
                             std::to_string(t.degree));
    return detail::Evaluator(t.degree, opts).run(e, p);
}

/// columns[n] = apply(e, x^n); overflowing columns are left undefined.
inline LinOp realize(const OpExpr& e, Truncation t, ApplyOptions opts = {}) {
    std::vector<std::optional<Poly>> cols;
    cols.reserve(t.degree + 1);
    detail::Evaluator ev(t.degree, opts);
    for (std::size_t n = 0; n <= t.degree; ++n) {
        try {
            cols.emplace_back(ev.run(e, Poly::monomial(n)));
        } catch (const overflow_error&) {
            cols.emplace_back(std::nullopt);
        }
    }
    return LinOp(t.degree, std::move(cols));
}

/// e1 e2 - rho e2 e1 restricted to the leading degrees free of overflow.
inline LinOp q_commutator(const OpExpr& e1, const OpExpr& e2, const Rational& rho, Truncation t) {
    OpExpr c = op::sum({op::product({e1, e2}), op::scaled(-rho, op::product({e2, e1}))});
    LinOp l = realize(c, t);
    std::size_t w = l.window();
    if (w == 0) throw overflow_error("commutator has an empty safe window at degree " + std::to_string(t.degree));
    return l.restricted(w);
}

inline LinOp commutator(const OpExpr& e1, const OpExpr& e2, Truncation t) {
    return q_commutator(e1, e2, Rational(1), t);
}

/**
 * Spectral function of an expression that is diagonal on monomials, or
 * nullopt if the expression contains x, d, an exponential or a framed node.
 */
inline std::optional<SpectralFn> diagonal_spectrum(const OpExpr& e) {
    struct V {
        std::optional<SpectralFn> operator()(const GenNode&) const { return std::nullopt; }
        std::optional<SpectralFn> operator()(const ExpNode&) const { return std::nullopt; }
        std::optional<SpectralFn> operator()(const ScaledNode& s) const {
            auto g = diagonal_spectrum(s.arg);
            if (!g) return std::nullopt;
            return SpectralFn([c = s.scalar, g = *g](std::size_t n) { return c * g(n); });
        }
        std::optional<SpectralFn> operator()(const SumNode& s) const {
            std::vector<SpectralFn> gs;
            for (const auto& t : s.terms) {
                auto g = diagonal_spectrum(t);
                if (!g) return std::nullopt;
                gs.push_back(*g);
            }
            return SpectralFn([gs](std::size_t n) {
                Rational acc(0);
                for (const auto& g : gs) acc += g(n);
                return acc;
            });
        }
        std::optional<SpectralFn> operator()(const ProductNode& s) const {
            std::vector<SpectralFn> gs;
            for (const auto& f : s.factors) {
                auto g = diagonal_spectrum(f);
                if (!g) return std::nullopt;
                gs.push_back(*g);
            }
            return SpectralFn([gs](std::size_t n) {
                Rational acc(1);
                for (const auto& g : gs) acc *= g(n);
                return acc;
            });
        }
        std::optional<SpectralFn> operator()(const PowerNode& s) const {
            auto g = diagonal_spectrum(s.base);
            if (!g) return std::nullopt;
            return SpectralFn([g = *g, k = s.exponent](std::size_t n) { return pow(g(n), static_cast<long>(k)); });
        }
        std::optional<SpectralFn> operator()(const DiagNode& s) const {
            if (s.frame) return std::nullopt;
            return s.fn;
        }
        std::optional<SpectralFn> operator()(const InvNode& s) const {
            if (s.diag.frame) return std::nullopt;
            return SpectralFn([g = s.diag.fn, name = s.diag.name](std::size_t n) {
                Rational v = g(n);
                if (v.is_zero())
                    throw singular_operator("inv(" + name + ") is singular on basis vector " + std::to_string(n));
                return Rational(1) / v;
            });
        }
        std::optional<SpectralFn> operator()(const NamedNode& s) const { return diagonal_spectrum(s.body); }
    };
    return std::visit(V{}, e.node().v);
}

/**
 * The *-involution x* = d, d* = x. Reverses every product, fixes scalars.
 * Diagonal and inverse nodes have no structural image and are rejected.
 */
inline OpExpr star(const OpExpr& e) {
    struct V {
        OpExpr operator()(const GenNode& g) const {
            return g.which == Generator::X ? op::d() : op::x();
        }
        OpExpr operator()(const ScaledNode& s) const { return op::scaled(s.scalar, star(s.arg)); }
        OpExpr operator()(const SumNode& s) const {
            std::vector<OpExpr> t;
            for (const auto& a : s.terms) t.push_back(star(a));
            return op::sum(std::move(t));
        }
        OpExpr operator()(const ProductNode& s) const {
            std::vector<OpExpr> f;
            for (auto it = s.factors.rbegin(); it != s.factors.rend(); ++it) f.push_back(star(*it));
            return op::product(std::move(f));
        }
        OpExpr operator()(const PowerNode& s) const { return op::power(star(s.base), s.exponent); }
        OpExpr operator()(const ExpNode& s) const { return op::exp(star(s.arg)); }
        OpExpr operator()(const NamedNode& s) const { return star(s.body); }
        OpExpr operator()(const DiagNode& s) const {
            throw unsupported_operation("star is not defined on the diagonal node " + s.name);
        }
        OpExpr operator()(const InvNode& s) const {
            throw unsupported_operation("star is not defined on inv(" + s.diag.name + ")");
        }
    };
    return std::visit(V{}, e.node().v);
}

} // namespace ccr
