#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "ccr/maps.hpp"
#include "ccr/opcore.hpp"
#include "ccr/operators.hpp"

// Jackson calculus on polynomials: integral, averaging, the q-Rolle identity,
// the similarity transform U(A), and the q-canonical conjugate of a_delta.

namespace ccr {

using QContextPtr = std::shared_ptr<const QContext>;

/// (f(x) - f(qx)) / ((1 - q) x), the difference form of the Jackson derivative.
inline Poly jackson_difference(const Poly& p, const Rational& q) {
    Poly num = (p - qscale(p, q)) * (Rational(1) / (Rational(1) - q));
    if (num.is_zero()) return num;
    if (!num.coeffs().front().is_zero()) throw invariant_violation("jackson_difference: numerator not divisible by x");
    return Poly(std::vector<Rational>(num.coeffs().begin() + 1, num.coeffs().end()));
}

/// (f(x + delta) - f(x)) / delta.
inline Poly forward_difference(const Poly& p, const Rational& delta) {
    return (shift(p, delta) - p) * (Rational(1) / delta);
}

/// S p with x^n -> x^(n+1) / {n+1}.
inline Poly jackson_integral(const Poly& p, const QContext& ctx, Truncation t) {
    detail::require_monomial(p, "jackson_integral");
    if (p.is_zero()) return p;
    if (p.degree() + 1 > static_cast<int>(t.degree))
        throw overflow_error("jackson_integral leaves the space of degree <= " + std::to_string(t.degree));
    std::vector<Rational> out(p.coeffs().size() + 1);
    for (std::size_t n = 0; n < p.coeffs().size(); ++n) out[n + 1] = p.coeffs()[n] / ctx.qnumber(n + 1);
    return Poly(std::move(out));
}

/// M_q p with x^n -> x^n / {n+1}.
inline Poly quantum_average(const Poly& p, const QContext& ctx) {
    detail::require_monomial(p, "quantum_average");
    std::vector<Rational> out(p.coeffs());
    for (std::size_t n = 0; n < out.size(); ++n) out[n] /= ctx.qnumber(n + 1);
    return Poly(std::move(out));
}

/// x_q f = x (<f>_q + <x f'>_q), both sides computed independently.
inline bool rolle_check(const Poly& f, const QContextPtr& ctx, Truncation t) {
    Poly lhs = apply(ops::jackson_conjugate(ctx), f, t);
    Poly avg = quantum_average(f, *ctx) + quantum_average(times_x(derivative(f)), *ctx);
    return lhs == times_x(avg);
}

/// Diagonal realization of U(A): u(n) = {n}! / n!.
inline LinOp similarity_U(const QContext& ctx, Truncation t) {
    std::vector<Rational> u;
    for (std::size_t n = 0; n <= t.degree; ++n) u.push_back(ctx.gamma_ratio(n));
    return LinOp::diagonal(t.degree, u);
}

/// U^-1 d U = d_q and U^-1 x U = x_q on the overflow-free window.
inline bool similarity_check(const QContextPtr& ctx, Truncation t) {
    DiagNode u = ops::similarity_fn(ctx);
    OpExpr conj_d = op::inv(u) * op::d() * op::diag(u);
    OpExpr conj_x = op::inv(u) * op::x() * op::diag(u);
    LinOp ld = realize(conj_d, t), rd = realize(ops::jackson_derivative(ctx), t);
    LinOp lx = realize(conj_x, t), rx = realize(ops::jackson_conjugate(ctx), t);
    std::size_t wx = lx.window();
    if (ld.window() != t.degree + 1 || wx == 0 || rx.window() != wx) return false;
    return ld == rd && lx.restricted(wx) == rx.restricted(wx);
}

/**
 * The q-conjugate of a_delta: phi_delta(x [[B]]^-1). Functions of B_delta act
 * diagonally on the falling delta-factorials. delta = 0 gives the undeformed
 * pair (d, x [[B]]^-1).
 */
inline DeformMap qcc_delta_map(const QContextPtr& ctx, const Rational& delta, MapOptions opts = {}) {
    DeformMap base = delta.is_zero() ? make_identity() : make_phi_delta(delta, opts);
    return compose(base, make_phi_q_prime(ctx, opts), opts);
}

/// a_delta Y - q Y a_delta = 1 with Y = phi_delta(x [[B]]^-1).
inline bool qcc_delta_check(const QContextPtr& ctx, const Rational& delta, Truncation t) {
    DeformMap m = qcc_delta_map(ctx, delta, MapOptions{0});
    return q_commutator(m.image_a(), m.image_b(), ctx->q(), t).is_identity_on_window();
}

} // namespace ccr
