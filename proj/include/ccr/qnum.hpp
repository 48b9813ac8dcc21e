#pragma once

#include <cstddef>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "ccr/errors.hpp"
#include "ccr/rational.hpp"

namespace ccr {

/**
 * Deformation parameter q together with memoized q-combinatorics up to a
 * fixed index.
 *
 *   {n}     = (1 - q^n) / (1 - q)        q-number
 *   [[n]]   = n / {n},  [[0]] = 1         double bracket
 *   {n}!, [[n]]!                          their factorials
 *   u(n)    = {n}! / n!                   Gamma_q(n+1) / Gamma(n+1)
 *
 * Construction rejects q = 1 and any q with {n} = 0 for some 1 <= n <= max_index
 * (for rational q that only happens at q = -1). Values of q outside (-1, 1) are
 * accepted; warning() reports them. All tables are filled in the constructor, so
 * a QContext is immutable and safe to share between threads.
 */
class QContext {
public:
    QContext(Rational q, std::size_t max_index) : q_(std::move(q)), max_index_(max_index) {
        if (q_.is_one()) throw domain_error("q = 1 is the undeformed limit and is not a valid deformation parameter");
        qnum_.reserve(max_index_ + 1);
        dbr_.reserve(max_index_ + 1);
        qfact_.reserve(max_index_ + 1);
        dbrfact_.reserve(max_index_ + 1);
        ratio_.reserve(max_index_ + 1);

        // {n+1} = 1 + q {n}
        qnum_.emplace_back(0);
        for (std::size_t n = 1; n <= max_index_; ++n) {
            qnum_.push_back(Rational(1) + q_ * qnum_.back());
            if (qnum_.back().is_zero())
                throw domain_error("q = " + q_.to_string() + " gives {" + std::to_string(n) +
                                   "} = 0");
        }
        dbr_.emplace_back(1);
        qfact_.emplace_back(1);
        dbrfact_.emplace_back(1);
        ratio_.emplace_back(1);
        for (std::size_t n = 1; n <= max_index_; ++n) {
            dbr_.push_back(Rational(static_cast<unsigned long>(n)) / qnum_[n]);
            qfact_.push_back(qfact_.back() * qnum_[n]);
            dbrfact_.push_back(dbrfact_.back() * dbr_[n]);
            ratio_.push_back(ratio_.back() * qnum_[n] / Rational(static_cast<unsigned long>(n)));
        }
    }

    static std::shared_ptr<const QContext> make(const Rational& q, std::size_t max_index = 64) {
        return std::make_shared<const QContext>(q, max_index);
    }

    const Rational& q() const noexcept { return q_; }
    std::size_t max_index() const noexcept { return max_index_; }

    /// True for -1 < q < 1, where {n} never vanishes and q-series behave.
    bool in_standard_range() const { return Rational(-1) < q_ && q_ < Rational(1); }

    std::optional<std::string> warning() const {
        if (in_standard_range()) return std::nullopt;
        return "q = " + q_.to_string() + " lies outside (-1, 1); identities are still exact";
    }

    const Rational& qnumber(std::size_t n) const { return qnum_.at(check(n)); }
    const Rational& dbracket(std::size_t n) const { return dbr_.at(check(n)); }
    const Rational& qfactorial(std::size_t n) const { return qfact_.at(check(n)); }
    const Rational& dbracket_factorial(std::size_t n) const { return dbrfact_.at(check(n)); }
    const Rational& gamma_ratio(std::size_t n) const { return ratio_.at(check(n)); }

    /// {m} for an arbitrary integer m (negative m needs q != 0). Not limited by max_index.
    Rational qnumber_at(long m) const {
        if (m >= 0 && static_cast<std::size_t>(m) <= max_index_) return qnum_[static_cast<std::size_t>(m)];
        return (Rational(1) - pow(q_, m)) / (Rational(1) - q_);
    }

    /// [[m]] for an arbitrary integer m; [[0]] = 1.
    Rational dbracket_at(long m) const {
        if (m >= 0 && static_cast<std::size_t>(m) <= max_index_) return dbr_[static_cast<std::size_t>(m)];
        Rational qn = qnumber_at(m);
        if (qn.is_zero()) throw singular_operator("[[" + std::to_string(m) + "]] is undefined: {m} = 0");
        return Rational(m) / qn;
    }

private:
    std::size_t check(std::size_t n) const {
        if (n > max_index_)
            throw domain_error("index " + std::to_string(n) + " exceeds the context's max index " +
                               std::to_string(max_index_));
        return n;
    }

    Rational q_;
    std::size_t max_index_;
    std::vector<Rational> qnum_, dbr_, qfact_, dbrfact_, ratio_;
};

namespace detail {

/// Triangle of Stirling numbers grown on demand. Rows are never modified once written.
class StirlingTable {
public:
    explicit StirlingTable(bool first_kind) : first_kind_(first_kind) { rows_.push_back({BigInt(1)}); }

    BigInt at(std::size_t n, std::size_t k) {
        std::lock_guard lock(mu_);
        while (rows_.size() <= n) {
            const auto& prev = rows_.back();
            std::size_t m = rows_.size() - 1;  // prev is row m
            std::vector<BigInt> row(m + 2, BigInt(0));
            for (std::size_t j = 1; j <= m + 1; ++j) {
                BigInt left = prev[j - 1];
                BigInt same = j <= m ? prev[j] : BigInt(0);
                // s(m+1,j) = s(m,j-1) - m s(m,j);  S(m+1,j) = S(m,j-1) + j S(m,j)
                row[j] = first_kind_ ? BigInt(left - BigInt(static_cast<unsigned long>(m)) * same)
                                     : BigInt(left + BigInt(static_cast<unsigned long>(j)) * same);
            }
            rows_.push_back(std::move(row));
        }
        return rows_[n][k];
    }

private:
    bool first_kind_;
    std::mutex mu_;
    std::vector<std::vector<BigInt>> rows_;
};

inline StirlingTable& stirling_table(bool first_kind) {
    static StirlingTable first(true), second(false);
    return first_kind ? first : second;
}

} // namespace detail

/// Signed Stirling numbers of the first kind: x(x-1)...(x-n+1) = sum_k s(n,k) x^k.
inline BigInt stirling_first(std::size_t n, std::size_t k) {
    if (k > n) throw domain_error("stirling_first: k = " + std::to_string(k) + " > n = " + std::to_string(n));
    return detail::stirling_table(true).at(n, k);
}

/// Stirling numbers of the second kind: x^n = sum_k S(n,k) x(x-1)...(x-k+1).
inline BigInt stirling_second(std::size_t n, std::size_t k) {
    if (k > n) throw domain_error("stirling_second: k = " + std::to_string(k) + " > n = " + std::to_string(n));
    return detail::stirling_table(false).at(n, k);
}

} // namespace ccr
