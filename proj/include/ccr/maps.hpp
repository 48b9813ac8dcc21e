#pragma once

#include <cstddef>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ccr/errors.hpp"
#include "ccr/opcore.hpp"
#include "ccr/operators.hpp"
#include "ccr/poly.hpp"
#include "ccr/qnum.hpp"

namespace ccr {

enum class MapKind { Identity, PhiQ, PhiDelta, PhiQPrime, PhiF, Compose };

struct MapParams {
    std::shared_ptr<const QContext> q;
    std::optional<Rational> delta;
};

struct MapOptions {
    /// Degree window of the construction-time relation check; 0 skips it.
    std::size_t check_degree = 16;
};

class DeformMap;

namespace detail {

struct MapCore {
    MapKind kind = MapKind::Identity;
    std::string name;
    OpExpr image_a;
    OpExpr image_b;
    /// image_a image_b - rho image_b image_a = 1.
    Rational rho{1};
    std::shared_ptr<const QContext> q;
    std::optional<Rational> delta;
    std::shared_ptr<const DeformMap> outer, inner;
};

} // namespace detail

/// A frame that knows which deformation map's adapted basis it spans.
class MapFrame : public Frame, public std::enable_shared_from_this<MapFrame> {
public:
    explicit MapFrame(std::shared_ptr<const detail::MapCore> core) : core_(std::move(core)) {}
    DeformMap map() const;
    std::string label() const override { return core_->name; }

protected:
    std::shared_ptr<const detail::MapCore> core_;
};

/**
 * A substitution (d, x) -> (image_a, image_b) that preserves the (q-)canonical
 * commutation relation and annihilates constants.
 *
 * frame() spans the adapted basis |n> = image_b^n 1. It is null when the adapted
 * basis is proportional to the monomials, which holds for every map of the form
 * d -> f(B)^-1 d, x -> x f(B).
 */
class DeformMap {
public:
    DeformMap(std::shared_ptr<const detail::MapCore> core, std::shared_ptr<const Frame> frame)
        : core_(std::move(core)), frame_(std::move(frame)) {}

    MapKind kind() const { return core_->kind; }
    const std::string& name() const { return core_->name; }
    const OpExpr& image_a() const { return core_->image_a; }
    const OpExpr& image_b() const { return core_->image_b; }
    const Rational& relation() const { return core_->rho; }
    const std::shared_ptr<const QContext>& qcontext() const { return core_->q; }
    const std::optional<Rational>& delta() const { return core_->delta; }
    const std::shared_ptr<const DeformMap>& outer() const { return core_->outer; }
    const std::shared_ptr<const DeformMap>& inner() const { return core_->inner; }
    const std::shared_ptr<const Frame>& frame() const { return frame_; }

    /// The image of an operator word: every x, d and diagonal node is substituted.
    OpExpr operator()(const OpExpr& e) const;

private:
    std::shared_ptr<const detail::MapCore> core_;
    std::shared_ptr<const Frame> frame_;
};

inline DeformMap MapFrame::map() const { return DeformMap(core_, shared_from_this()); }

namespace detail {

/// Falling delta-factorials, the adapted basis of phi_delta.
class FallingFrame final : public MapFrame {
public:
    FallingFrame(std::shared_ptr<const MapCore> core, Rational delta)
        : MapFrame(std::move(core)), delta_(std::move(delta)) {}
    std::vector<Rational> to_coords(const Poly& p) const override { return to_falling(p, delta_).coeffs(); }
    Poly from_coords(const std::vector<Rational>& c) const override {
        return to_monomial(Poly(c, FallingBasis{delta_}));
    }

private:
    Rational delta_;
};

/// Adapted basis computed as image_b^n 1, extended on demand.
class AdaptedFrame final : public MapFrame {
public:
    using MapFrame::MapFrame;

    const Poly& element(std::size_t n) const {
        std::lock_guard lock(mu_);
        while (elems_.size() <= n) {
            if (elems_.empty()) {
                elems_.push_back(Poly::constant(Rational(1)));
                continue;
            }
            std::size_t m = elems_.size();
            Poly next = apply(core_->image_b, elems_.back(), Truncation{m});
            if (next.degree() != static_cast<int>(m))
                throw invariant_violation("adapted basis element " + std::to_string(m) + " of " + core_->name +
                                          " does not have degree " + std::to_string(m));
            elems_.push_back(std::move(next));
        }
        return elems_[n];
    }

    std::vector<Rational> to_coords(const Poly& p) const override {
        Poly r = p;
        std::vector<Rational> c(p.coeffs().size());
        for (int n = p.degree(); n >= 0; --n) {
            auto k = static_cast<std::size_t>(n);
            const Poly& e = element(k);
            Rational t = r.coeff(k) / e.coeffs().back();
            c[k] = t;
            if (!t.is_zero()) r -= e * t;
        }
        return c;
    }

    Poly from_coords(const std::vector<Rational>& c) const override {
        Poly out;
        for (std::size_t n = 0; n < c.size(); ++n)
            if (!c[n].is_zero()) out += element(n) * c[n];
        return out;
    }

private:
    mutable std::mutex mu_;
    mutable std::vector<Poly> elems_;
};

inline Rational rho_number(const Rational& rho, std::size_t n) {
    if (rho.is_one()) return Rational(static_cast<unsigned long>(n));
    return (Rational(1) - pow(rho, static_cast<long>(n))) / (Rational(1) - rho);
}

inline void check_relations(const DeformMap& m, std::size_t degree) {
    if (degree == 0) return;
    LinOp c = q_commutator(m.image_a(), m.image_b(), m.relation(), Truncation{degree});
    if (!c.is_identity_on_window())
        throw invariant_violation(m.name() + ": commutation relation fails on degree <= " + std::to_string(degree));
    if (!apply(m.image_a(), Poly::constant(Rational(1)), Truncation{degree}).is_zero())
        throw invariant_violation(m.name() + ": image of d does not annihilate constants");
}

inline std::shared_ptr<const MapCore> make_core(MapKind kind, std::string name, OpExpr a, OpExpr b) {
    auto c = std::make_shared<MapCore>();
    c->kind = kind;
    c->name = std::move(name);
    c->image_a = std::move(a);
    c->image_b = std::move(b);
    return c;
}

} // namespace detail

inline DeformMap make_identity() {
    return DeformMap(detail::make_core(MapKind::Identity, "identity", op::d(), op::x()), nullptr);
}

/// phi_q: d -> [[B]]^-1 d, x -> x [[B]].
inline DeformMap make_phi_q(std::shared_ptr<const QContext> ctx, MapOptions opts = {}) {
    if (!ctx) throw domain_error("phi_q requires q");
    auto core = std::make_shared<detail::MapCore>();
    core->kind = MapKind::PhiQ;
    core->name = "phi_q(" + ctx->q().to_string() + ")";
    core->image_a = op::inv(ops::dbracket_B(ctx)) * op::d();
    core->image_b = op::x() * op::diag(ops::dbracket_B(ctx));
    core->q = ctx;
    DeformMap m(core, nullptr);
    detail::check_relations(m, opts.check_degree);
    return m;
}

/// phi_delta: d -> delta^-1 (exp(delta d) - 1), x -> x exp(-delta d). delta != 0.
inline DeformMap make_phi_delta(const Rational& delta, MapOptions opts = {}) {
    if (delta.is_zero()) throw domain_error("phi_delta requires delta != 0");
    auto core = std::make_shared<detail::MapCore>();
    core->kind = MapKind::PhiDelta;
    core->name = "phi_delta(" + delta.to_string() + ")";
    core->image_a = op::scaled(Rational(1) / delta, op::exp(op::scaled(delta, op::d())) - op::identity());
    core->image_b = op::x() * op::exp(op::scaled(-delta, op::d()));
    core->delta = delta;
    auto frame = std::make_shared<detail::FallingFrame>(core, delta);
    DeformMap m(core, frame);
    detail::check_relations(m, opts.check_degree);
    return m;
}

/// phi'_q: d -> d, x -> x [[B]]^-1. Produces the q-relation d x' - q x' d = 1.
inline DeformMap make_phi_q_prime(std::shared_ptr<const QContext> ctx, MapOptions opts = {}) {
    if (!ctx) throw domain_error("phi_q_prime requires q");
    auto core = std::make_shared<detail::MapCore>();
    core->kind = MapKind::PhiQPrime;
    core->name = "phi_q_prime(" + ctx->q().to_string() + ")";
    core->image_a = op::d();
    core->image_b = op::x() * op::inv(ops::dbracket_B(ctx));
    core->rho = ctx->q();
    core->q = ctx;
    DeformMap m(core, nullptr);
    detail::check_relations(m, opts.check_degree);
    return m;
}

/**
 * Member of the f(B) family: d -> f(B)^-1 d, x -> x f(B).
 * f is given on k >= 1 and must not vanish there.
 */
inline DeformMap make_phi_f(const std::string& fname, SpectralFn f, MapOptions opts = {}) {
    auto fb = op::diag_fn(fname + "(B)", [f](std::size_t n) { return f(n + 1); });
    auto core = std::make_shared<detail::MapCore>();
    core->kind = MapKind::PhiF;
    core->name = "phi_f(" + fname + ")";
    core->image_a = op::inv(fb) * op::d();
    core->image_b = op::x() * op::diag(fb);
    DeformMap m(core, nullptr);
    detail::check_relations(m, opts.check_degree);
    return m;
}

inline DeformMap make_map(MapKind kind, const MapParams& params, MapOptions opts = {}) {
    switch (kind) {
    case MapKind::Identity: return make_identity();
    case MapKind::PhiQ: return make_phi_q(params.q, opts);
    case MapKind::PhiQPrime: return make_phi_q_prime(params.q, opts);
    case MapKind::PhiDelta:
        if (!params.delta) throw domain_error("phi_delta requires delta");
        return make_phi_delta(*params.delta, opts);
    case MapKind::PhiF: throw unsupported_operation("phi_f needs a spectral function; use make_phi_f");
    case MapKind::Compose: throw unsupported_operation("use compose(outer, inner)");
    }
    throw domain_error("unknown map kind");
}

inline DeformMap compose(const DeformMap& outer, const DeformMap& inner, MapOptions opts = {});

namespace detail {

inline DeformMap map_of(const std::shared_ptr<const Frame>& f) {
    if (!f) return make_identity();
    auto mf = std::dynamic_pointer_cast<const MapFrame>(f);
    if (!mf) throw unsupported_operation("diagonal node over frame " + f->label() + " has no map to substitute through");
    return mf->map();
}

inline DiagNode substitute_diag(const DiagNode& d, const DeformMap& outer) {
    DeformMap base = map_of(d.frame);
    DeformMap target = compose(outer, base, MapOptions{0});
    return DiagNode{d.name, d.fn, target.frame()};
}

inline OpExpr substitute(const OpExpr& e, const DeformMap& outer) {
    struct V {
        const DeformMap& m;
        OpExpr operator()(const GenNode& g) const { return g.which == Generator::X ? m.image_b() : m.image_a(); }
        OpExpr operator()(const ScaledNode& s) const { return op::scaled(s.scalar, substitute(s.arg, m)); }
        OpExpr operator()(const SumNode& s) const {
            std::vector<OpExpr> t;
            for (const auto& a : s.terms) t.push_back(substitute(a, m));
            return op::sum(std::move(t));
        }
        OpExpr operator()(const ProductNode& s) const {
            std::vector<OpExpr> f;
            for (const auto& a : s.factors) f.push_back(substitute(a, m));
            return op::product(std::move(f));
        }
        OpExpr operator()(const PowerNode& s) const { return op::power(substitute(s.base, m), s.exponent); }
        OpExpr operator()(const ExpNode& s) const { return op::exp(substitute(s.arg, m)); }
        OpExpr operator()(const NamedNode& s) const { return substitute(s.body, m); }
        OpExpr operator()(const DiagNode& s) const { return op::diag(substitute_diag(s, m)); }
        OpExpr operator()(const InvNode& s) const { return op::inv(substitute_diag(s.diag, m)); }
    };
    return std::visit(V{outer}, e.node().v);
}

} // namespace detail

inline OpExpr DeformMap::operator()(const OpExpr& e) const {
    if (kind() == MapKind::Identity) return e;
    if (!relation().is_one())
        throw unsupported_operation(name() + " does not preserve the canonical relation; substitution through it is undefined");
    return detail::substitute(e, *this);
}

/**
 * outer o inner: the generator images of inner with outer substituted into them.
 *
 * A function g(A) inside inner's images becomes g(A_outer), which acts
 * diagonally on the adapted basis of the corresponding composite map.
 */
inline DeformMap compose(const DeformMap& outer, const DeformMap& inner, MapOptions opts) {
    if (inner.kind() == MapKind::Identity) return outer;
    if (outer.kind() == MapKind::Identity) return inner;
    if (!outer.relation().is_one())
        throw unsupported_operation("cannot compose with outer map " + outer.name() +
                                    ": it does not preserve the canonical relation");
    auto core = std::make_shared<detail::MapCore>();
    core->kind = MapKind::Compose;
    auto wrap = [](const DeformMap& m) {
        return m.kind() == MapKind::Compose ? "(" + m.name() + ")" : m.name();
    };
    core->name = wrap(outer) + " o " + wrap(inner);
    core->image_a = outer(inner.image_a());
    core->image_b = outer(inner.image_b());
    core->rho = inner.relation();
    core->outer = std::make_shared<const DeformMap>(outer);
    core->inner = std::make_shared<const DeformMap>(inner);
    auto frame = std::make_shared<detail::AdaptedFrame>(core);
    DeformMap m(core, frame);
    detail::check_relations(m, opts.check_degree);
    return m;
}

/// Number multiplying |n-1> in the lowering law: n for the canonical relation, {n}_rho otherwise.
inline Rational lowering_factor(const DeformMap& m, std::size_t n) { return detail::rho_number(m.relation(), n); }

/**
 * |n>_alpha = image_b^n 1. The lowering law image_a |n> = n |n-1> (or {n}|n-1>
 * for a q-relation) is checked before returning.
 */
inline Poly adapted_basis(const DeformMap& m, std::size_t n, Truncation t) {
    if (n > t.degree) throw overflow_error("adapted basis element " + std::to_string(n) + " exceeds degree " + std::to_string(t.degree));
    Poly prev, cur = Poly::constant(Rational(1));
    for (std::size_t k = 0; k < n; ++k) {
        prev = cur;
        cur = apply(m.image_b(), cur, t);
    }
    Poly lowered = apply(m.image_a(), cur, t);
    Poly expected = n == 0 ? Poly() : prev * lowering_factor(m, n);
    if (!(lowered == expected))
        throw invariant_violation(m.name() + ": lowering law fails on |" + std::to_string(n) + ">");
    return cur;
}

/// All adapted basis elements |0>..|D>, with the ladder laws available as checks.
class AdaptedBasis {
public:
    AdaptedBasis(DeformMap m, Truncation t) : map_(std::move(m)), trunc_(t) {
        elems_.push_back(Poly::constant(Rational(1)));
        for (std::size_t n = 1; n <= t.degree; ++n) elems_.push_back(apply(map_.image_b(), elems_.back(), t));
    }

    const DeformMap& map() const { return map_; }
    Truncation truncation() const { return trunc_; }
    const Poly& operator[](std::size_t n) const { return elems_.at(n); }
    std::size_t size() const { return elems_.size(); }

    bool raising_law_holds() const {
        for (std::size_t n = 0; n < trunc_.degree; ++n)
            if (!(apply(map_.image_b(), elems_[n], trunc_) == elems_[n + 1])) return false;
        return true;
    }
    bool lowering_law_holds() const {
        for (std::size_t n = 0; n <= trunc_.degree; ++n) {
            Poly expected = n == 0 ? Poly() : elems_[n - 1] * lowering_factor(map_, n);
            if (!(apply(map_.image_a(), elems_[n], trunc_) == expected)) return false;
        }
        return true;
    }

private:
    DeformMap map_;
    Truncation trunc_;
    std::vector<Poly> elems_;
};

/// A finite series together with the truncation it was cut at.
struct Series {
    Poly value;
    Truncation truncation;
};

/// sum_{n <= D} lambda^n x^n / n!.
inline Poly exp_series(const Rational& lambda, Truncation t) {
    std::vector<Rational> c(t.degree + 1);
    Rational term(1);
    for (std::size_t n = 0; n <= t.degree; ++n) {
        c[n] = term;
        term = term * lambda / Rational(static_cast<unsigned long>(n + 1));
    }
    return Poly(std::move(c));
}

/**
 * b-projection f^ = f(b_alpha)|0> = sum_n f_n |n>_alpha, for f given by its
 * monomial coefficients up to degree D.
 */
inline Series b_projection(const Poly& f, const DeformMap& m, Truncation t) {
    if (!f.is_monomial_basis()) throw unsupported_operation("b_projection expects monomial coefficients");
    if (f.degree() > static_cast<int>(t.degree)) throw overflow_error("b_projection input exceeds truncation");
    Poly out;
    Poly elem = Poly::constant(Rational(1));
    for (std::size_t n = 0; n < f.coeffs().size(); ++n) {
        if (n > 0) elem = apply(m.image_b(), elem, t);
        if (!f.coeffs()[n].is_zero()) out += elem * f.coeffs()[n];
    }
    return Series{std::move(out), t};
}

/// G_alpha applied to f^ equals the projection of G applied to f.
inline bool intertwine_check(const OpExpr& g, const Poly& f, const DeformMap& m, Truncation t) {
    Poly lhs = apply(m(g), b_projection(f, m, t).value, t);
    Poly rhs = b_projection(apply(g, f, t), m, t).value;
    return lhs == rhs;
}

} // namespace ccr
