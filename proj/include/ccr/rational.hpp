#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>

#include "ccr/errors.hpp"

namespace ccr {

using BigInt = mpz_class;

/**
 * Exact rational number backed by GMP.
 *
 * Always held in lowest terms with a positive denominator. Division by zero
 * raises ccr::domain_error instead of aborting inside GMP.
 */
class Rational {
public:
    Rational() = default;
    Rational(int v) : v_(v) {}
    Rational(long v) : v_(v) {}
    Rational(unsigned long v) : v_(v) {}
    Rational(long long v) : v_(static_cast<long>(v)) {}
    Rational(unsigned long long v) : v_(static_cast<unsigned long>(v)) {}
    Rational(const BigInt& v) : v_(v) {}

    Rational(const BigInt& num, const BigInt& den) {
        if (den == 0) throw domain_error("rational with zero denominator");
        v_ = mpq_class(num, den);
        v_.canonicalize();
    }

    /// Parses "p/q", "p", with an optional leading sign. Whitespace is not accepted.
    static Rational parse(std::string_view text) {
        auto bad = [&] { return domain_error("malformed rational '" + std::string(text) + "'"); };
        if (text.empty()) throw bad();
        auto is_int = [](std::string_view s, bool allow_sign) {
            std::size_t i = 0;
            if (allow_sign && !s.empty() && (s[0] == '-' || s[0] == '+')) ++i;
            if (i == s.size()) return false;
            for (; i < s.size(); ++i)
                if (s[i] < '0' || s[i] > '9') return false;
            return true;
        };
        auto slash = text.find('/');
        std::string_view num = text.substr(0, slash);
        std::string_view den = slash == std::string_view::npos ? std::string_view{"1"}
                                                               : text.substr(slash + 1);
        if (!is_int(num, true) || !is_int(den, false)) throw bad();
        std::string n(num);
        if (n[0] == '+') n.erase(0, 1);
        BigInt nn(n, 10), dd(std::string(den), 10);
        if (dd == 0) throw domain_error("rational with zero denominator '" + std::string(text) + "'");
        return Rational(nn, dd);
    }

    BigInt numerator() const { return v_.get_num(); }
    BigInt denominator() const { return v_.get_den(); }
    const mpq_class& raw() const noexcept { return v_; }

    bool is_zero() const { return sgn(v_) == 0; }
    bool is_one() const { return v_ == 1; }
    bool is_integer() const { return v_.get_den() == 1; }
    int sign() const { return sgn(v_); }

    /// Integer value; throws if not an integer or out of range.
    long to_long() const {
        if (!is_integer() || !v_.get_num().fits_slong_p())
            throw domain_error("rational " + to_string() + " is not a machine integer");
        return v_.get_num().get_si();
    }

    /// "p/q", or "p" when the denominator is 1. Sign is carried by the numerator.
    std::string to_string() const {
        if (is_integer()) return v_.get_num().get_str();
        return v_.get_num().get_str() + "/" + v_.get_den().get_str();
    }

    double to_double() const { return v_.get_d(); }

    Rational operator-() const {
        Rational r;
        r.v_ = -v_;
        return r;
    }
    Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
    Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
    Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
    Rational& operator/=(const Rational& o) {
        if (o.is_zero()) throw domain_error("division by zero");
        v_ /= o.v_;
        return *this;
    }

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

    friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        int c = cmp(a.v_, b.v_);
        return c < 0 ? std::strong_ordering::less
                     : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) {
        return os << r.to_string();
    }

private:
    mpq_class v_;
};

inline Rational abs(const Rational& r) { return r.sign() < 0 ? -r : r; }

/// Exact integer power; negative exponents invert (zero base then throws).
inline Rational pow(const Rational& base, long e) {
    if (e < 0) {
        if (base.is_zero()) throw domain_error("zero raised to a negative power");
        return Rational(1) / pow(base, -e);
    }
    BigInt n, d;
    mpz_pow_ui(n.get_mpz_t(), base.numerator().get_mpz_t(), static_cast<unsigned long>(e));
    mpz_pow_ui(d.get_mpz_t(), base.denominator().get_mpz_t(), static_cast<unsigned long>(e));
    return Rational(n, d);
}

inline Rational factorial(std::size_t n) {
    BigInt f;
    mpz_fac_ui(f.get_mpz_t(), n);
    return Rational(f);
}

} // namespace ccr
