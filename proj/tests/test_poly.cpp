#include <catch_amalgamated.hpp>

#include "ccr/poly.hpp"
#include "ccr/verify.hpp"

using namespace ccr;

namespace {

// Brute-force x(x-d)...(x-(n-1)d) in monomials.
Poly falling_oracle(std::size_t n, const Rational& d) {
    Poly p = Poly::constant(Rational(1));
    for (std::size_t j = 0; j < n; ++j) p = p * Poly({-d * Rational(static_cast<unsigned long>(j)), Rational(1)});
    return p;
}

} // namespace

TEST_CASE("construction trims and degree") {
    Poly p({Rational(1), Rational(0), Rational(0)});
    CHECK(p.degree() == 0);
    CHECK(Poly().degree() == -1);
    CHECK(Poly().is_zero());
    CHECK(Poly({Rational(0), Rational(0)}).is_zero());
    CHECK(Poly::monomial(3, Rational(2)).coeff(3) == Rational(2));
    CHECK(Poly::monomial(3).coeff(7) == Rational(0));
}

TEST_CASE("arithmetic") {
    Poly a({Rational(1), Rational(1)});   // 1 + x
    Poly b({Rational(-1), Rational(1)});  // x - 1
    CHECK(a * b == Poly({Rational(-1), Rational(0), Rational(1)}));
    CHECK(a + b == Poly({Rational(0), Rational(2)}));
    CHECK(a - a == Poly());
    CHECK(-a == a * Rational(-1));
    CHECK(a.truncated(0) == Poly::constant(Rational(1)));
}

TEST_CASE("mixing bases is rejected") {
    Poly m({Rational(1), Rational(1)});
    Poly f({Rational(1), Rational(1)}, FallingBasis{Rational(1)});
    CHECK_THROWS_AS(m + f, basis_mismatch);
    CHECK_THROWS_AS(f * f, unsupported_operation);
    Poly g({Rational(1)}, FallingBasis{Rational(1, 2)});
    CHECK_THROWS_AS(f + g, basis_mismatch);
    CHECK_THROWS_AS(derivative(f), unsupported_operation);
}

TEST_CASE("calculus helpers") {
    Poly p({Rational(1), Rational(2), Rational(3)});  // 1 + 2x + 3x^2
    CHECK(derivative(p) == Poly({Rational(2), Rational(6)}));
    CHECK(times_x(p) == Poly({Rational(0), Rational(1), Rational(2), Rational(3)}));
    // p(x + 1) = 6 + 8x + 3x^2
    CHECK(shift(p, Rational(1)) == Poly({Rational(6), Rational(8), Rational(3)}));
    CHECK(qscale(p, Rational(1, 2)) == Poly({Rational(1), Rational(1), Rational(3, 4)}));
    CHECK(eval(p, Rational(2)) == Rational(17));
}

TEST_CASE("falling basis converts through Stirling numbers") {
    for (const char* ds : {"1", "1/2", "-3", "2/7"}) {
        Rational d = Rational::parse(ds);
        for (std::size_t n = 0; n <= 14; ++n) {
            Poly single = Poly::monomial(n, Rational(1), FallingBasis{d});
            CHECK(to_monomial(single) == falling_oracle(n, d));
            CHECK(to_falling(falling_oracle(n, d), d) == single);
        }
    }
}

TEST_CASE("basis round trip and evaluation agree") {
    verify::RandomPolys gen(7);
    for (int i = 0; i < 40; ++i) {
        Poly p = gen.poly_upto(12);
        Rational d = gen.rational();
        if (d.is_zero()) d = Rational(1, 3);
        Poly f = to_falling(p, d);
        CHECK(to_monomial(f) == p);
        Rational x0 = gen.rational();
        CHECK(eval(f, x0) == eval(p, x0));
        // Shifting a falling factorial by d: D_d x^(n) = n x^(n-1).
        Poly diff = (shift(p, d) - p) * (Rational(1) / d);
        std::vector<Rational> lowered;
        for (std::size_t n = 1; n < f.coeffs().size(); ++n)
            lowered.push_back(f.coeffs()[n] * Rational(static_cast<unsigned long>(n)));
        CHECK(to_monomial(Poly(lowered, FallingBasis{d})) == diff);
    }
}

TEST_CASE("monomial basis is the default for conversions") {
    Poly p({Rational(3)});
    CHECK(to_monomial(p) == p);
    CHECK(basis_name(p.basis()) == "monomial");
}
