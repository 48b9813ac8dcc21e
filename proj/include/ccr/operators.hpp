#pragma once

#include <memory>
#include <string>

#include "ccr/opexpr.hpp"
#include "ccr/qnum.hpp"

// The named operators of q- and delta-calculus as expressions over x and d.

namespace ccr::ops {

using QContextPtr = std::shared_ptr<const QContext>;

/// A = x d, diagonal with eigenvalue n on x^n.
inline DiagNode degree_A_fn() {
    return op::diag_fn("A", [](std::size_t n) { return Rational(static_cast<unsigned long>(n)); });
}
inline OpExpr degree_A() { return op::diag(degree_A_fn()); }

/// B = 1 + A.
inline DiagNode degree_B_fn() {
    return op::diag_fn("B", [](std::size_t n) { return Rational(static_cast<unsigned long>(n + 1)); });
}
inline OpExpr degree_B() { return op::diag(degree_B_fn()); }

/// {g(n)} for an integer-valued spectral function g.
inline DiagNode qnumber_of(const QContextPtr& ctx, const std::string& arg, SpectralFn g) {
    return op::diag_fn("qn(" + arg + ")", [ctx, g = std::move(g)](std::size_t n) {
        return ctx->qnumber_at(g(n).to_long());
    });
}

/// [[g(n)]] for an integer-valued spectral function g.
inline DiagNode dbracket_of(const QContextPtr& ctx, const std::string& arg, SpectralFn g) {
    return op::diag_fn("qb(" + arg + ")", [ctx, g = std::move(g)](std::size_t n) {
        return ctx->dbracket_at(g(n).to_long());
    });
}

inline DiagNode dbracket_B(const QContextPtr& ctx) { return dbracket_of(ctx, "B", degree_B_fn().fn); }

/// Jackson derivative, d_q = [[B]]^-1 d.  d_q x^n = {n} x^(n-1).
inline OpExpr jackson_derivative(const QContextPtr& ctx) {
    return op::named("Dq", op::inv(dbracket_B(ctx)) * op::d());
}

/// Canonical conjugate of d_q, x_q = x [[B]].  x_q x^n = [[n+1]] x^(n+1).
inline OpExpr jackson_conjugate(const QContextPtr& ctx) {
    return op::named("xq", op::x() * op::diag(dbracket_B(ctx)));
}

/// Jackson integral S = {A}^-1 x.  S x^n = x^(n+1) / {n+1}.
inline OpExpr jackson_integral(const QContextPtr& ctx) {
    return op::named("S", op::inv(qnumber_of(ctx, "A", degree_A_fn().fn)) * op::x());
}

/// Quantum averaging M_q = (1/x) S = {B}^-1.
inline OpExpr quantum_average(const QContextPtr& ctx) {
    return op::named("Mq", op::inv(qnumber_of(ctx, "B", degree_B_fn().fn)));
}

/// U(A) = Gamma_q(A+1) / Gamma(A+1), diagonal with u(n) = {n}!/n!.
inline DiagNode similarity_fn(const QContextPtr& ctx) {
    return op::diag_fn("U", [ctx](std::size_t n) { return ctx->gamma_ratio(n); });
}
inline OpExpr similarity(const QContextPtr& ctx) { return op::diag(similarity_fn(ctx)); }

/// Forward difference d_delta = delta^-1 (exp(delta d) - 1).
inline OpExpr delta_derivative(const Rational& delta) {
    return op::named("Ddelta", op::scaled(Rational(1) / delta, op::exp(op::scaled(delta, op::d())) - op::identity()));
}

/// Conjugate of d_delta, x_delta = x exp(-delta d).
inline OpExpr delta_conjugate(const Rational& delta) {
    return op::named("xdelta", op::x() * op::exp(op::scaled(-delta, op::d())));
}

/// Multiplication by a fixed polynomial, as sum_k c_k x^k.
inline OpExpr multiply_by(const Poly& p) {
    std::vector<OpExpr> terms;
    for (std::size_t k = 0; k < p.coeffs().size(); ++k) {
        if (p.coeffs()[k].is_zero()) continue;
        OpExpr xk = k == 0 ? op::identity() : (k == 1 ? op::x() : op::power(op::x(), static_cast<unsigned>(k)));
        terms.push_back(op::scaled(p.coeffs()[k], xk));
    }
    if (terms.empty()) return op::scalar(Rational(0));
    if (terms.size() == 1) return terms.front();
    return op::sum(std::move(terms));
}

} // namespace ccr::ops
