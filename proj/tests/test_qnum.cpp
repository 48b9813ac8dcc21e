#include <catch_amalgamated.hpp>

#include <thread>
#include <vector>

#include "ccr/qnum.hpp"

using namespace ccr;

namespace {

// {n} as the finite sum 1 + q + ... + q^(n-1).
Rational qsum(const Rational& q, std::size_t n) {
    Rational s(0), term(1);
    for (std::size_t i = 0; i < n; ++i) {
        s += term;
        term *= q;
    }
    return s;
}

// Coefficients of x(x-1)...(x-n+1) by repeated multiplication.
std::vector<BigInt> falling_product(std::size_t n) {
    std::vector<BigInt> c{1};
    for (std::size_t j = 0; j < n; ++j) {
        std::vector<BigInt> next(c.size() + 1, 0);
        for (std::size_t i = 0; i < c.size(); ++i) {
            next[i + 1] += c[i];
            next[i] -= c[i] * static_cast<long>(j);
        }
        c = next;
    }
    return c;
}

} // namespace

TEST_CASE("rational parsing and printing") {
    CHECK(Rational::parse("3/6") == Rational(1, 2));
    CHECK(Rational::parse("-4") == Rational(-4));
    CHECK(Rational::parse("+7/3").to_string() == "7/3");
    CHECK(Rational(6, -4).to_string() == "-3/2");
    CHECK(Rational(5).to_string() == "5");
    for (const char* bad : {"", "1/", "/2", "1/0", "a", "1.5", "1/-2", "--1", "1 /2"})
        CHECK_THROWS_AS(Rational::parse(bad), domain_error);
}

TEST_CASE("rational arithmetic is exact") {
    Rational a(1, 3), b(1, 6);
    CHECK(a + b == Rational(1, 2));
    CHECK(a - b == b);
    CHECK(a * b == Rational(1, 18));
    CHECK(a / b == Rational(2));
    CHECK_THROWS_AS(a / Rational(0), domain_error);
    CHECK(pow(Rational(-2, 3), 3) == Rational(-8, 27));
    CHECK(pow(Rational(2, 3), -2) == Rational(9, 4));
    CHECK_THROWS_AS(pow(Rational(0), -1), domain_error);
    CHECK(factorial(20) == Rational(BigInt("2432902008176640000")));
    CHECK(Rational(-1, 2) < Rational(1, 3));
    // Large values stay exact.
    Rational big = pow(Rational(3, 7), 200);
    CHECK(big * pow(Rational(7, 3), 200) == Rational(1));
}

TEST_CASE("q-numbers") {
    auto ctx = QContext::make(Rational(1, 2));
    CHECK(ctx->qnumber(3) == Rational(7, 4));
    CHECK(ctx->qnumber(0) == Rational(0));
    CHECK(ctx->qnumber(1) == Rational(1));
    CHECK(ctx->dbracket(2) == Rational(4, 3));
    CHECK(ctx->dbracket(0) == Rational(1));
    CHECK(ctx->dbracket(1) == Rational(1));
    CHECK(ctx->qfactorial(0) == Rational(1));
    CHECK(ctx->dbracket_factorial(0) == Rational(1));
    CHECK(ctx->qfactorial(3) == Rational(1) * Rational(3, 2) * Rational(7, 4));
    CHECK(ctx->gamma_ratio(0) == Rational(1));
    CHECK(ctx->gamma_ratio(1) == Rational(1));
    CHECK(ctx->gamma_ratio(2) == Rational(3, 4));
    CHECK_THROWS_AS(ctx->qnumber(65), domain_error);
}

TEST_CASE("q-numbers agree with the finite geometric sum") {
    for (const char* qs : {"1/2", "-1/2", "1/3", "9/10", "0", "3", "-5/2"}) {
        Rational q = Rational::parse(qs);
        QContext ctx(q, 40);
        for (std::size_t n = 0; n <= 40; ++n) {
            CHECK(ctx.qnumber(n) == qsum(q, n));
            CHECK(ctx.qnumber_at(static_cast<long>(n)) == qsum(q, n));
            if (n > 0) CHECK(ctx.dbracket(n) * ctx.qnumber(n) == Rational(static_cast<unsigned long>(n)));
            if (n > 0) CHECK(ctx.qfactorial(n) == ctx.qfactorial(n - 1) * ctx.qnumber(n));
            if (n > 0) CHECK(ctx.dbracket_factorial(n) * ctx.qfactorial(n) == factorial(n));
            CHECK(ctx.gamma_ratio(n) * factorial(n) == ctx.qfactorial(n));
        }
        // Beyond the table the closed form is used.
        CHECK(ctx.qnumber_at(50) == qsum(q, 50));
    }
}

TEST_CASE("q-numbers at negative integers") {
    QContext ctx(Rational(1, 2), 8);
    // {-1} = (1 - q^-1)/(1 - q) = -1/q.
    CHECK(ctx.qnumber_at(-1) == Rational(-2));
    CHECK(ctx.dbracket_at(-1) == Rational(1, 2));
}

TEST_CASE("context validation") {
    CHECK_THROWS_AS(QContext(Rational(1), 10), domain_error);
    // {2} = 1 + q vanishes at q = -1.
    CHECK_THROWS_AS(QContext(Rational(-1), 10), domain_error);
    QContext zero(Rational(0), 10);
    for (std::size_t n = 1; n <= 10; ++n) CHECK(zero.qnumber(n) == Rational(1));
    CHECK_FALSE(QContext(Rational(1, 2), 4).warning().has_value());
    CHECK(QContext(Rational(2), 4).warning().has_value());
    CHECK(QContext(Rational(-3, 2), 4).warning().has_value());
}

TEST_CASE("q-numbers are strictly increasing for 0 < q < 1") {
    for (const char* qs : {"1/2", "1/3", "9/10", "99/100"}) {
        QContext ctx(Rational::parse(qs), 60);
        for (std::size_t n = 1; n <= 60; ++n) CHECK(ctx.qnumber(n - 1) < ctx.qnumber(n));
    }
}

TEST_CASE("Stirling numbers of the first kind") {
    CHECK(stirling_first(3, 1) == 2);
    CHECK(stirling_first(3, 2) == -3);
    CHECK(stirling_first(4, 2) == 11);
    CHECK(stirling_first(0, 0) == 1);
    CHECK(stirling_first(5, 0) == 0);
    CHECK_THROWS_AS(stirling_first(2, 3), domain_error);
    for (std::size_t n = 0; n <= 25; ++n) {
        auto c = falling_product(n);
        for (std::size_t k = 0; k <= n; ++k) CHECK(stirling_first(n, k) == c[k]);
    }
}

TEST_CASE("Stirling numbers of the second kind invert the first") {
    CHECK(stirling_second(4, 2) == 7);
    CHECK_THROWS_AS(stirling_second(1, 2), domain_error);
    for (std::size_t n = 0; n <= 20; ++n)
        for (std::size_t m = 0; m <= n; ++m) {
            BigInt acc = 0;
            for (std::size_t k = m; k <= n; ++k) acc += stirling_second(n, k) * stirling_first(k, m);
            CHECK(acc == (n == m ? 1 : 0));
        }
}

TEST_CASE("Stirling table is consistent under concurrent growth") {
    std::vector<std::thread> pool;
    std::vector<BigInt> got(8);
    for (std::size_t i = 0; i < got.size(); ++i)
        pool.emplace_back([&, i] { got[i] = stirling_first(60 + i, 30) + stirling_second(60 + i, 30); });
    for (auto& t : pool) t.join();
    for (std::size_t i = 0; i < got.size(); ++i) CHECK(got[i] == stirling_first(60 + i, 30) + stirling_second(60 + i, 30));
}
