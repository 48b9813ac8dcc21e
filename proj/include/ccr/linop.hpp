#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "ccr/errors.hpp"
#include "ccr/poly.hpp"

namespace ccr {

/**
 * Finite realization of a linear operator on the truncated space of degree <= D.
 *
 * column(n) is the image of x^n, or nullopt when computing it would have
 * overflowed the truncation. An operator restricted to a safe window has fewer
 * columns than D + 1; images are still allowed up to degree D.
 */
class LinOp {
public:
    LinOp() = default;
    LinOp(std::size_t degree, std::vector<std::optional<Poly>> columns)
        : degree_(degree), columns_(std::move(columns)) {}

    static LinOp identity(std::size_t degree) {
        std::vector<std::optional<Poly>> cols;
        for (std::size_t n = 0; n <= degree; ++n) cols.emplace_back(Poly::monomial(n));
        return LinOp(degree, std::move(cols));
    }

    static LinOp diagonal(std::size_t degree, const std::vector<Rational>& entries) {
        std::vector<std::optional<Poly>> cols;
        for (std::size_t n = 0; n <= degree; ++n) cols.emplace_back(Poly::monomial(n, entries.at(n)));
        return LinOp(degree, std::move(cols));
    }

    std::size_t degree() const noexcept { return degree_; }
    std::size_t size() const noexcept { return columns_.size(); }
    const std::vector<std::optional<Poly>>& columns() const noexcept { return columns_; }
    const std::optional<Poly>& column(std::size_t n) const { return columns_.at(n); }

    /// Number of leading columns computed without overflow.
    std::size_t window() const {
        std::size_t w = 0;
        while (w < columns_.size() && columns_[w]) ++w;
        return w;
    }

    LinOp restricted(std::size_t ncols) const {
        ncols = std::min(ncols, columns_.size());
        return LinOp(degree_, std::vector<std::optional<Poly>>(columns_.begin(),
                                                             columns_.begin() + static_cast<std::ptrdiff_t>(ncols)));
    }

    /// Coefficient of x^row in the image of x^col.
    Rational entry(std::size_t row, std::size_t col) const {
        const auto& c = columns_.at(col);
        if (!c) throw overflow_error("entry of an overflowed column " + std::to_string(col));
        return c->coeff(row);
    }

    /// Smallest and largest (deg image - n) over nonzero defined columns; {0,0} if none.
    std::pair<int, int> band() const {
        bool any = false;
        int lo = 0, hi = 0;
        for (std::size_t n = 0; n < columns_.size(); ++n) {
            const auto& c = columns_[n];
            if (!c || c->is_zero()) continue;
            int low_deg = 0;
            while (c->coeffs()[static_cast<std::size_t>(low_deg)].is_zero()) ++low_deg;
            int s_lo = low_deg - static_cast<int>(n);
            int s_hi = c->degree() - static_cast<int>(n);
            if (!any) {
                lo = s_lo;
                hi = s_hi;
                any = true;
            } else {
                lo = std::min(lo, s_lo);
                hi = std::max(hi, s_hi);
            }
        }
        return {lo, hi};
    }

    /// Every defined image of x^n has degree <= n.
    bool is_degree_non_increasing() const {
        for (std::size_t n = 0; n < columns_.size(); ++n)
            if (columns_[n] && columns_[n]->degree() > static_cast<int>(n)) return false;
        return true;
    }

    std::vector<Rational> diagonal_entries() const {
        std::vector<Rational> d;
        for (std::size_t n = 0; n < columns_.size(); ++n) d.push_back(entry(n, n));
        return d;
    }

    /// Image of p by linearity; nullopt if p touches an undefined column.
    std::optional<Poly> apply(const Poly& p) const {
        Poly out;
        for (std::size_t n = 0; n < p.coeffs().size(); ++n) {
            if (p.coeffs()[n].is_zero()) continue;
            if (n >= columns_.size() || !columns_[n]) return std::nullopt;
            out += *columns_[n] * p.coeffs()[n];
        }
        return out;
    }

    /// (*this) o other: apply other first.
    LinOp compose(const LinOp& other) const {
        std::vector<std::optional<Poly>> cols;
        for (const auto& c : other.columns_) cols.push_back(c ? apply(*c) : std::nullopt);
        return LinOp(std::max(degree_, other.degree_), std::move(cols));
    }

    /// Column-wise linear combination; a column is undefined if either input is.
    friend LinOp operator-(const LinOp& a, const LinOp& b) { return combine(a, b, Rational(-1)); }
    friend LinOp operator+(const LinOp& a, const LinOp& b) { return combine(a, b, Rational(1)); }

    /// All columns defined and equal.
    friend bool operator==(const LinOp& a, const LinOp& b) {
        return a.columns_.size() == b.columns_.size() && a.columns_ == b.columns_;
    }

    /// Defined columns 0..window-1 agree with the identity and window > 0.
    bool is_identity_on_window() const {
        std::size_t w = window();
        if (w == 0) return false;
        for (std::size_t n = 0; n < w; ++n)
            if (!(*columns_[n] == Poly::monomial(n))) return false;
        return true;
    }

private:
    static LinOp combine(const LinOp& a, const LinOp& b, const Rational& sb) {
        std::size_t n = std::min(a.columns_.size(), b.columns_.size());
        std::vector<std::optional<Poly>> cols;
        for (std::size_t i = 0; i < n; ++i) {
            if (a.columns_[i] && b.columns_[i])
                cols.emplace_back(*a.columns_[i] + *b.columns_[i] * sb);
            else
                cols.emplace_back(std::nullopt);
        }
        return LinOp(std::max(a.degree_, b.degree_), std::move(cols));
    }

    std::size_t degree_ = 0;
    std::vector<std::optional<Poly>> columns_;
};

} // namespace ccr
