#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "ccr/errors.hpp"
#include "ccr/qnum.hpp"
#include "ccr/rational.hpp"

namespace ccr {

struct MonomialBasis {
    friend bool operator==(const MonomialBasis&, const MonomialBasis&) = default;
};

/// Falling delta-factorials x(x-delta)...(x-(n-1)delta). delta lives in the tag.
struct FallingBasis {
    Rational delta;
    friend bool operator==(const FallingBasis&, const FallingBasis&) = default;
};

using Basis = std::variant<MonomialBasis, FallingBasis>;

inline std::string basis_name(const Basis& b) {
    if (std::holds_alternative<MonomialBasis>(b)) return "monomial";
    return "falling(delta=" + std::get<FallingBasis>(b).delta.to_string() + ")";
}

/// Maximum retained degree of a truncated polynomial space.
struct Truncation {
    std::size_t degree = 16;
};

/**
 * Dense univariate polynomial over Rational, tagged with its basis.
 *
 * coeffs()[n] is the coefficient of the n-th basis element. Trailing zeros are
 * trimmed, so the zero polynomial has no coefficients and degree -1.
 */
class Poly {
public:
    Poly() = default;
    explicit Poly(std::vector<Rational> coeffs, Basis basis = MonomialBasis{})
        : coeffs_(std::move(coeffs)), basis_(std::move(basis)) {
        trim();
    }

    static Poly constant(const Rational& c, Basis basis = MonomialBasis{}) {
        return Poly(std::vector<Rational>{c}, std::move(basis));
    }

    /// c * e_n, where e_n is the n-th element of the basis.
    static Poly monomial(std::size_t n, const Rational& c = Rational(1), Basis basis = MonomialBasis{}) {
        std::vector<Rational> v(n + 1);
        v[n] = c;
        return Poly(std::move(v), std::move(basis));
    }

    const std::vector<Rational>& coeffs() const noexcept { return coeffs_; }
    const Basis& basis() const noexcept { return basis_; }
    bool is_monomial_basis() const { return std::holds_alternative<MonomialBasis>(basis_); }

    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    bool is_zero() const { return coeffs_.empty(); }

    Rational coeff(std::size_t n) const { return n < coeffs_.size() ? coeffs_[n] : Rational(0); }

    Poly& operator+=(const Poly& o) {
        require_same_basis(o, "add");
        if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size());
        for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
        trim();
        return *this;
    }
    Poly& operator-=(const Poly& o) {
        require_same_basis(o, "subtract");
        if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size());
        for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
        trim();
        return *this;
    }
    Poly& operator*=(const Rational& c) {
        if (c.is_zero()) {
            coeffs_.clear();
            return *this;
        }
        for (auto& a : coeffs_) a *= c;
        return *this;
    }

    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator-(Poly a) { return a *= Rational(-1); }
    friend Poly operator*(Poly a, const Rational& c) { return a *= c; }
    friend Poly operator*(const Rational& c, Poly a) { return a *= c; }

    /// Product in the monomial basis. Falling-basis products are not supported.
    friend Poly operator*(const Poly& a, const Poly& b) {
        a.require_same_basis(b, "multiply");
        if (!a.is_monomial_basis())
            throw unsupported_operation("multiply is defined for the monomial basis only");
        if (a.is_zero() || b.is_zero()) return Poly();
        std::vector<Rational> r(a.coeffs_.size() + b.coeffs_.size() - 1);
        for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
            for (std::size_t j = 0; j < b.coeffs_.size(); ++j) r[i + j] += a.coeffs_[i] * b.coeffs_[j];
        return Poly(std::move(r));
    }

    friend bool operator==(const Poly& a, const Poly& b) {
        return a.basis_ == b.basis_ && a.coeffs_ == b.coeffs_;
    }

    /// Drops every coefficient above degree d.
    Poly truncated(std::size_t d) const {
        if (coeffs_.size() <= d + 1) return *this;
        return Poly(std::vector<Rational>(coeffs_.begin(), coeffs_.begin() + static_cast<std::ptrdiff_t>(d + 1)), basis_);
    }

private:
    void trim() {
        while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
    }
    void require_same_basis(const Poly& o, const char* what) const {
        if (!(basis_ == o.basis_))
            throw basis_mismatch(std::string(what) + ": " + basis_name(basis_) + " vs " + basis_name(o.basis_));
    }

    std::vector<Rational> coeffs_;
    Basis basis_ = MonomialBasis{};
};

namespace detail {
inline void require_monomial(const Poly& p, const char* what) {
    if (!p.is_monomial_basis())
        throw unsupported_operation(std::string(what) + " requires the monomial basis, got " + basis_name(p.basis()));
}
} // namespace detail

inline Poly scale(const Poly& p, const Rational& c) { return p * c; }

/// p(x) -> p(x + h), by binomial expansion.
inline Poly shift(const Poly& p, const Rational& h) {
    detail::require_monomial(p, "shift");
    if (p.is_zero() || h.is_zero()) return p;
    const std::size_t n = p.coeffs().size();
    std::vector<Rational> hp(n);
    hp[0] = 1;
    for (std::size_t i = 1; i < n; ++i) hp[i] = hp[i - 1] * h;
    std::vector<Rational> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        if (p.coeffs()[k].is_zero()) continue;
        BigInt binom = 1;
        // (x+h)^k = sum_j C(k,j) h^(k-j) x^j
        for (std::size_t j = 0; j <= k; ++j) {
            mpz_bin_uiui(binom.get_mpz_t(), k, j);
            out[j] += p.coeffs()[k] * Rational(binom) * hp[k - j];
        }
    }
    return Poly(std::move(out));
}

/// p(x) -> p(q x).
inline Poly qscale(const Poly& p, const Rational& q) {
    detail::require_monomial(p, "qscale");
    std::vector<Rational> out(p.coeffs());
    Rational qn(1);
    for (auto& c : out) {
        c *= qn;
        qn *= q;
    }
    return Poly(std::move(out));
}

/// Classical derivative d/dx in the monomial basis.
inline Poly derivative(const Poly& p) {
    detail::require_monomial(p, "derivative");
    if (p.coeffs().size() <= 1) return Poly();
    std::vector<Rational> out(p.coeffs().size() - 1);
    for (std::size_t n = 1; n < p.coeffs().size(); ++n)
        out[n - 1] = p.coeffs()[n] * Rational(static_cast<unsigned long>(n));
    return Poly(std::move(out));
}

/// Multiplication by x. No truncation is applied.
inline Poly times_x(const Poly& p) {
    detail::require_monomial(p, "times_x");
    if (p.is_zero()) return p;
    std::vector<Rational> out(p.coeffs().size() + 1);
    for (std::size_t n = 0; n < p.coeffs().size(); ++n) out[n + 1] = p.coeffs()[n];
    return Poly(std::move(out));
}

/// Monomial expansion: x_delta^(n) = sum_k s(n,k) delta^(n-k) x^k.
inline Poly to_monomial(const Poly& p) {
    if (p.is_monomial_basis()) return p;
    const Rational& delta = std::get<FallingBasis>(p.basis()).delta;
    const std::size_t n = p.coeffs().size();
    std::vector<Rational> dp(n);
    if (n) dp[0] = 1;
    for (std::size_t i = 1; i < n; ++i) dp[i] = dp[i - 1] * delta;
    std::vector<Rational> out(n);
    for (std::size_t m = 0; m < n; ++m) {
        if (p.coeffs()[m].is_zero()) continue;
        for (std::size_t k = 0; k <= m; ++k) {
            BigInt s = stirling_first(m, k);
            if (s == 0) continue;
            out[k] += p.coeffs()[m] * Rational(s) * dp[m - k];
        }
    }
    return Poly(std::move(out));
}

/// Falling-factorial expansion: x^n = sum_k S(n,k) delta^(n-k) x_delta^(k).
inline Poly to_falling(const Poly& p, const Rational& delta) {
    if (!p.is_monomial_basis()) {
        if (std::get<FallingBasis>(p.basis()).delta == delta) return p;
        return to_falling(to_monomial(p), delta);
    }
    const std::size_t n = p.coeffs().size();
    std::vector<Rational> dp(n);
    if (n) dp[0] = 1;
    for (std::size_t i = 1; i < n; ++i) dp[i] = dp[i - 1] * delta;
    std::vector<Rational> out(n);
    for (std::size_t m = 0; m < n; ++m) {
        if (p.coeffs()[m].is_zero()) continue;
        for (std::size_t k = 0; k <= m; ++k) {
            BigInt s = stirling_second(m, k);
            if (s == 0) continue;
            out[k] += p.coeffs()[m] * Rational(s) * dp[m - k];
        }
    }
    return Poly(std::move(out), FallingBasis{delta});
}

/// Exact evaluation. Monomial basis via Horner, falling basis via its product form.
inline Rational eval(const Poly& p, const Rational& x0) {
    Rational acc(0);
    if (p.is_monomial_basis()) {
        for (auto it = p.coeffs().rbegin(); it != p.coeffs().rend(); ++it) acc = acc * x0 + *it;
        return acc;
    }
    const Rational& delta = std::get<FallingBasis>(p.basis()).delta;
    Rational element(1);
    for (std::size_t n = 0; n < p.coeffs().size(); ++n) {
        acc += p.coeffs()[n] * element;
        element *= x0 - Rational(static_cast<unsigned long>(n)) * delta;
    }
    return acc;
}

} // namespace ccr
