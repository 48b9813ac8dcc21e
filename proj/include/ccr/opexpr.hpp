#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "ccr/poly.hpp"
#include "ccr/rational.hpp"

namespace ccr {

/// Eigenvalue of a diagonal operator on its n-th basis vector.
using SpectralFn = std::function<Rational(std::size_t)>;

/**
 * A basis of the polynomial space in which some diagonal operators act
 * diagonally. A null frame means the monomial basis.
 *
 * to_coords(p) returns the coordinates of p along the frame's basis vectors,
 * from_coords inverts it. Both must be exact.
 */
class Frame {
public:
    virtual ~Frame() = default;
    virtual std::vector<Rational> to_coords(const Poly& p) const = 0;
    virtual Poly from_coords(const std::vector<Rational>& coords) const = 0;
    virtual std::string label() const = 0;
};

class OpExpr;

enum class Generator { X, D };

struct GenNode {
    Generator which;
};
struct ScaledNode;
struct SumNode;
struct ProductNode;
struct PowerNode;
struct DiagNode;
struct ExpNode;
struct InvNode;
struct NamedNode;

/**
 * Immutable operator expression over the generators x (multiplication) and
 * d (differentiation), with diagonal spectral nodes and exponentials.
 *
 * Product factors are ordered: the rightmost factor acts first. An empty
 * product is the identity.
 */
class OpExpr {
public:
    struct Node;

    OpExpr();  // identity
    explicit OpExpr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

    const Node& node() const { return *node_; }

    template <class T>
    const T* as() const;

    bool is_identity() const;

private:
    std::shared_ptr<const Node> node_;
};

struct ScaledNode {
    Rational scalar;
    OpExpr arg;
};
struct SumNode {
    std::vector<OpExpr> terms;
};
struct ProductNode {
    std::vector<OpExpr> factors;
};
struct PowerNode {
    OpExpr base;
    unsigned exponent;
};
/// Operator acting as e_n -> fn(n) e_n on the basis vectors of `frame` (monomials if null).
struct DiagNode {
    std::string name;
    SpectralFn fn;
    std::shared_ptr<const Frame> frame;
};
struct ExpNode {
    OpExpr arg;
};
struct InvNode {
    DiagNode diag;
};
/// Transparent alias; acts as `body`, prints as `label`.
struct NamedNode {
    std::string label;
    OpExpr body;
};

struct OpExpr::Node {
    std::variant<GenNode, ScaledNode, SumNode, ProductNode, PowerNode, DiagNode, ExpNode, InvNode, NamedNode> v;
};

inline OpExpr::OpExpr() : node_(std::make_shared<const Node>(Node{ProductNode{}})) {}

template <class T>
const T* OpExpr::as() const {
    return std::get_if<T>(&node_->v);
}

inline bool OpExpr::is_identity() const {
    auto p = as<ProductNode>();
    return p && p->factors.empty();
}

namespace op {

inline OpExpr make(OpExpr::Node n) { return OpExpr(std::make_shared<const OpExpr::Node>(std::move(n))); }

inline OpExpr identity() { return OpExpr(); }
inline OpExpr x() { return make({GenNode{Generator::X}}); }
inline OpExpr d() { return make({GenNode{Generator::D}}); }
inline OpExpr scaled(const Rational& c, OpExpr e) { return make({ScaledNode{c, std::move(e)}}); }
inline OpExpr scalar(const Rational& c) { return scaled(c, identity()); }
inline OpExpr sum(std::vector<OpExpr> terms) { return make({SumNode{std::move(terms)}}); }
inline OpExpr product(std::vector<OpExpr> factors) { return make({ProductNode{std::move(factors)}}); }
inline OpExpr power(OpExpr base, unsigned n) { return make({PowerNode{std::move(base), n}}); }
inline OpExpr exp(OpExpr arg) { return make({ExpNode{std::move(arg)}}); }
inline OpExpr named(std::string label, OpExpr body) { return make({NamedNode{std::move(label), std::move(body)}}); }

inline DiagNode diag_fn(std::string name, SpectralFn fn, std::shared_ptr<const Frame> frame = nullptr) {
    return DiagNode{std::move(name), std::move(fn), std::move(frame)};
}
inline OpExpr diag(DiagNode d) { return make({std::move(d)}); }
inline OpExpr diag(std::string name, SpectralFn fn, std::shared_ptr<const Frame> frame = nullptr) {
    return diag(diag_fn(std::move(name), std::move(fn), std::move(frame)));
}
inline OpExpr inv(DiagNode d) { return make({InvNode{std::move(d)}}); }

} // namespace op

// Products flatten nested unnamed products so a*b*c stays a single ordered word.
inline OpExpr operator*(const OpExpr& a, const OpExpr& b) {
    std::vector<OpExpr> f;
    for (const OpExpr* e : {&a, &b}) {
        if (auto p = e->as<ProductNode>())
            f.insert(f.end(), p->factors.begin(), p->factors.end());
        else
            f.push_back(*e);
    }
    if (f.size() == 1) return f.front();
    return op::product(std::move(f));
}

inline OpExpr operator*(const Rational& c, const OpExpr& e) { return op::scaled(c, e); }

inline OpExpr operator+(const OpExpr& a, const OpExpr& b) {
    std::vector<OpExpr> t;
    for (const OpExpr* e : {&a, &b}) {
        if (auto s = e->as<SumNode>())
            t.insert(t.end(), s->terms.begin(), s->terms.end());
        else
            t.push_back(*e);
    }
    return op::sum(std::move(t));
}

inline OpExpr operator-(const OpExpr& a, const OpExpr& b) { return a + op::scaled(Rational(-1), b); }
inline OpExpr operator-(const OpExpr& a) { return op::scaled(Rational(-1), a); }

} // namespace ccr
