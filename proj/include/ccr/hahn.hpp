#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ccr/errors.hpp"
#include "ccr/maps.hpp"
#include "ccr/opcore.hpp"
#include "ccr/operators.hpp"

namespace ccr::hahn {

/**
 * Hahn operator coefficients. The free parameters are alpha, beta, N with the
 * normalization delta = 1, c1 = -1 by default:
 *   c2 = N - 2 - beta,  c3 = -alpha - beta - 1,  c4 = (beta + 1)(N - 1).
 */
struct HahnParams {
    Rational alpha;
    Rational beta;
    Rational N;
    Rational delta{1};
    Rational c1{-1};

    Rational c2() const { return N - Rational(2) - beta; }
    Rational c3() const { return -alpha - beta - Rational(1); }
    Rational c4() const { return (beta + Rational(1)) * (N - Rational(1)); }

    std::string to_string() const {
        return "alpha=" + alpha.to_string() + " beta=" + beta.to_string() + " N=" + N.to_string() +
               " delta=" + delta.to_string() + " c1=" + c1.to_string();
    }
};

enum class Variant { ThreePoint, Abstract, Continuous, QDeformed, QSpectrum };

inline const char* variant_name(Variant v) {
    switch (v) {
    case Variant::ThreePoint: return "three-point";
    case Variant::Abstract: return "abstract";
    case Variant::Continuous: return "continuous";
    case Variant::QDeformed: return "q-deformed";
    case Variant::QSpectrum: return "q-spectrum";
    }
    return "?";
}

inline std::optional<Variant> parse_variant(const std::string& s) {
    for (Variant v : {Variant::ThreePoint, Variant::Abstract, Variant::Continuous, Variant::QDeformed, Variant::QSpectrum})
        if (s == variant_name(v)) return v;
    return std::nullopt;
}

inline bool needs_q(Variant v) { return v == Variant::QDeformed || v == Variant::QSpectrum; }

namespace detail {

inline void check_params(const HahnParams& p) {
    if (p.delta.is_zero()) throw domain_error("Hahn operator requires delta != 0");
}

inline OpExpr lin(const Rational& c0, const Rational& c1) { return ops::multiply_by(Poly({c0, c1})); }

} // namespace detail

/**
 * The five forms of the Hahn operator as expressions:
 *
 *   ThreePoint  d^-3 [P+(x) f(x+d) - P0(x) f(x) - P-(x) f(x-d)]
 *   Abstract    c1 (b a)^2 (a + 1/delta) + c2 b a^2 + c3 b a + c4 a,  (a, b) = (a_delta, b_delta)
 *   Continuous  c1 x^2 d^3 + [(c1+c2) + c1/delta x] x d^2 + [c4 + (c1/delta + c3) x] d
 *   QDeformed   c1 A^2 (d_q + 1/delta) + c2 A d_q + c3 A + c4 d_q
 *   QSpectrum   Continuous with d -> d_q
 */
inline OpExpr build(Variant v, const HahnParams& p, const std::shared_ptr<const QContext>& ctx = nullptr) {
    detail::check_params(p);
    if (needs_q(v) && !ctx) throw domain_error(std::string("Hahn variant ") + variant_name(v) + " requires q");
    const Rational& d = p.delta;
    const Rational inv_d = Rational(1) / d;
    const Rational c1 = p.c1, c2 = p.c2(), c3 = p.c3(), c4 = p.c4();

    switch (v) {
    case Variant::ThreePoint: {
        Poly plus({c4 * d * d, c2 * d, c1});
        Poly mid({c4 * d * d, -(d * (c1 - Rational(2) * c2 + c3 * d)), Rational(2) * c1});
        Poly minus({Rational(0), d * (c1 - c2 + c3 * d), -c1});
        OpExpr fwd = op::exp(op::scaled(d, op::d()));
        OpExpr bwd = op::exp(op::scaled(-d, op::d()));
        return op::scaled(inv_d * inv_d * inv_d,
                          op::sum({ops::multiply_by(plus) * fwd, op::scaled(Rational(-1), ops::multiply_by(mid)),
                                   op::scaled(Rational(-1), ops::multiply_by(minus) * bwd)}));
    }
    case Variant::Abstract: {
        DeformMap m = make_phi_delta(d, MapOptions{0});
        OpExpr a = m.image_a(), b = m.image_b();
        OpExpr ba = op::product({b, a});
        return op::sum({op::scaled(c1, op::product({ba, ba, a + op::scalar(inv_d)})),
                        op::scaled(c2, op::product({b, a, a})), op::scaled(c3, ba), op::scaled(c4, a)});
    }
    case Variant::Continuous:
    case Variant::QSpectrum: {
        OpExpr der = v == Variant::Continuous ? op::d() : ops::jackson_derivative(ctx);
        OpExpr x = op::x();
        return op::sum({op::scaled(c1, op::product({op::power(x, 2), op::power(der, 3)})),
                        op::product({detail::lin(c1 + c2, c1 * inv_d), x, op::power(der, 2)}),
                        op::product({detail::lin(c4, c1 * inv_d + c3), der})});
    }
    case Variant::QDeformed: {
        OpExpr dq = ops::jackson_derivative(ctx);
        OpExpr A = ops::degree_A();
        return op::sum({op::scaled(c1, op::product({op::power(A, 2), dq + op::scalar(inv_d)})),
                        op::scaled(c2, op::product({A, dq})), op::scaled(c3, A), op::scaled(c4, dq)});
    }
    }
    throw domain_error("unknown Hahn variant");
}

/// lambda_k = c1 k^2 / delta + c3 k, or for QSpectrum c1/delta {k}({k-1} + 1) + c3 {k}.
inline Rational spectrum(Variant v, const HahnParams& p, const std::shared_ptr<const QContext>& ctx, std::size_t k) {
    detail::check_params(p);
    const Rational inv_d = Rational(1) / p.delta;
    if (v != Variant::QSpectrum) {
        Rational kk(static_cast<unsigned long>(k));
        return p.c1 * inv_d * kk * kk + p.c3() * kk;
    }
    if (!ctx) throw domain_error("q-spectrum requires q");
    if (k == 0) return Rational(0);
    const Rational& qk = ctx->qnumber(k);
    return p.c1 * inv_d * qk * (ctx->qnumber(k - 1) + Rational(1)) + p.c3() * qk;
}

/// Realization on degree <= D. The three-point stencil needs two degrees of headroom internally.
inline LinOp realize_variant(Variant v, const HahnParams& p, const std::shared_ptr<const QContext>& ctx, Truncation t) {
    LinOp l = realize(build(v, p, ctx), Truncation{t.degree + 2});
    std::vector<std::optional<Poly>> cols(l.columns().begin(), l.columns().begin() + static_cast<std::ptrdiff_t>(t.degree + 1));
    for (auto& c : cols)
        if (c && c->degree() > static_cast<int>(t.degree)) c.reset();
    return LinOp(t.degree, std::move(cols));
}

/**
 * Back-substitution for (H - lambda) p = 0 with p = sum_{i<=k} g_i x^i, g_k = 1,
 * on a degree-non-increasing realization H.
 */
inline std::vector<Rational> triangular_eigenvector(const LinOp& h, std::size_t k, const Rational& lambda) {
    if (!(h.entry(k, k) == lambda))
        throw invariant_violation("diagonal entry " + std::to_string(k) + " is " + h.entry(k, k).to_string() +
                                  ", expected " + lambda.to_string());
    std::vector<Rational> g(k + 1);
    g[k] = 1;
    for (std::size_t jj = k; jj-- > 0;) {
        Rational rhs(0);
        for (std::size_t i = jj + 1; i <= k; ++i) rhs -= h.entry(jj, i) * g[i];
        Rational pivot = h.entry(jj, jj) - lambda;
        if (pivot.is_zero()) throw degeneracy_error(jj, k);
        g[jj] = rhs / pivot;
    }
    return g;
}

struct Eigenpolynomial {
    std::size_t k = 0;
    Rational eigenvalue;
    /// Coefficients along the variant's natural basis (falling factorials for ThreePoint/Abstract).
    std::vector<Rational> gamma;
    Poly natural;
    Poly monomial;
    /// (H - lambda) h, computed by applying the operator expression.
    Poly residual;
};

/// Pairwise distinctness of lambda_0..lambda_kmax.
inline void require_distinct(Variant v, const HahnParams& p, const std::shared_ptr<const QContext>& ctx, std::size_t kmax) {
    std::vector<Rational> lam;
    for (std::size_t k = 0; k <= kmax; ++k) lam.push_back(spectrum(v, p, ctx, k));
    for (std::size_t k = 0; k <= kmax; ++k)
        for (std::size_t j = 0; j < k; ++j)
            if (lam[j] == lam[k]) throw degeneracy_error(j, k);
}

/**
 * Polynomial eigenfunctions h_0..h_kmax, monic in the leading basis element.
 *
 * The coefficients g_i come from the Continuous operator by back-substitution;
 * ThreePoint/Abstract use sum g_i x_delta^(i), QDeformed uses sum g_i [[i]]! x^i.
 * QSpectrum is solved against its own realization.
 */
inline std::vector<Eigenpolynomial> eigenpolynomials(Variant v, const HahnParams& p,
                                                     const std::shared_ptr<const QContext>& ctx, std::size_t kmax,
                                                     Truncation t) {
    if (kmax > t.degree) throw domain_error("kmax exceeds the truncation degree");
    if (needs_q(v) && !ctx) throw domain_error(std::string("Hahn variant ") + variant_name(v) + " requires q");
    require_distinct(v, p, ctx, kmax);

    Variant solved = v == Variant::QSpectrum ? Variant::QSpectrum : Variant::Continuous;
    LinOp h = realize_variant(solved, p, ctx, Truncation{kmax});
    OpExpr op_v = build(v, p, ctx);
    Truncation work{t.degree + 2};

    std::vector<Eigenpolynomial> out;
    for (std::size_t k = 0; k <= kmax; ++k) {
        Eigenpolynomial e;
        e.k = k;
        e.eigenvalue = spectrum(v, p, ctx, k);
        std::vector<Rational> g = triangular_eigenvector(h, k, spectrum(solved, p, ctx, k));
        switch (v) {
        case Variant::ThreePoint:
        case Variant::Abstract:
            e.gamma = g;
            e.natural = Poly(g, FallingBasis{p.delta});
            e.monomial = to_monomial(e.natural);
            break;
        case Variant::Continuous:
        case Variant::QSpectrum:
            e.gamma = g;
            e.natural = Poly(g);
            e.monomial = e.natural;
            break;
        case Variant::QDeformed: {
            std::vector<Rational> w(g.size());
            for (std::size_t i = 0; i < g.size(); ++i) w[i] = g[i] * ctx->dbracket_factorial(i);
            e.gamma = g;
            e.natural = Poly(w);
            e.monomial = e.natural;
            break;
        }
        }
        e.residual = apply(op_v, e.monomial, work) - e.monomial * e.eigenvalue;
        out.push_back(std::move(e));
    }
    return out;
}

struct IsospectralEntry {
    std::size_t param_index = 0;
    std::optional<Rational> q;
    Variant variant = Variant::Continuous;
    std::size_t k = 0;
    Rational expected;
    Rational observed;
    bool triangular = true;
    bool ok() const { return triangular && expected == observed; }
};

struct IsospectralReport {
    std::vector<IsospectralEntry> entries;
    bool passed() const {
        for (const auto& e : entries)
            if (!e.ok()) return false;
        return !entries.empty();
    }
};

/// Diagonal of every realized variant against the closed-form spectra.
inline IsospectralReport isospectral_check(const std::vector<HahnParams>& paramsets,
                                           const std::vector<std::shared_ptr<const QContext>>& qs, std::size_t kmax,
                                           Truncation t) {
    IsospectralReport r;
    auto record = [&](std::size_t pi, const std::shared_ptr<const QContext>& ctx, Variant v) {
        const HahnParams& p = paramsets[pi];
        LinOp l = realize_variant(v, p, ctx, t);
        bool tri = l.window() == t.degree + 1 && l.is_degree_non_increasing();
        for (std::size_t k = 0; k <= kmax && k <= t.degree; ++k) {
            IsospectralEntry e;
            e.param_index = pi;
            if (ctx) e.q = ctx->q();
            e.variant = v;
            e.k = k;
            e.expected = spectrum(v, p, ctx, k);
            e.observed = l.column(k) ? l.entry(k, k) : Rational(0);
            e.triangular = tri && l.column(k).has_value();
            r.entries.push_back(std::move(e));
        }
    };
    for (std::size_t pi = 0; pi < paramsets.size(); ++pi) {
        for (Variant v : {Variant::ThreePoint, Variant::Abstract, Variant::Continuous}) record(pi, nullptr, v);
        for (const auto& ctx : qs) {
            record(pi, ctx, Variant::QDeformed);
            record(pi, ctx, Variant::QSpectrum);
        }
    }
    return r;
}

} // namespace ccr::hahn
