#include <catch_amalgamated.hpp>

#include <thread>

#include "ccr/maps.hpp"
#include "ccr/verify.hpp"

using namespace ccr;

namespace {

const std::vector<std::string> kQs{"1/2", "-1/2", "1/3", "9/10"};
const std::vector<std::string> kDeltas{"1", "1/2"};

Poly falling(std::size_t n, const Rational& d) { return to_monomial(Poly::monomial(n, Rational(1), FallingBasis{d})); }

} // namespace

TEST_CASE("generator images") {
    auto ctx = QContext::make(Rational(1, 2));
    Truncation t{8};
    DeformMap mq = make_phi_q(ctx);
    CHECK(apply(mq.image_a(), Poly::monomial(3), t) == Poly::monomial(2, Rational(7, 4)));
    CHECK(mq.name() == "phi_q(1/2)");

    DeformMap md = make_phi_delta(Rational(1));
    CHECK(apply(md.image_b(), Poly::constant(Rational(1)), t) == Poly::monomial(1));
    CHECK(apply(md.image_b(), Poly::monomial(1), t) == Poly({Rational(0), Rational(-1), Rational(1)}));
    CHECK(md.frame() != nullptr);

    DeformMap id = make_identity();
    CHECK(realize(id.image_a(), t) == realize(op::d(), t));
    CHECK(realize(id.image_b(), t) == realize(op::x(), t));
    CHECK(make_map(MapKind::PhiDelta, MapParams{nullptr, Rational(1, 2)}).kind() == MapKind::PhiDelta);
}

TEST_CASE("map parameters are validated") {
    CHECK_THROWS_AS(make_phi_delta(Rational(0)), domain_error);
    CHECK_THROWS_AS(make_phi_q(nullptr), domain_error);
    CHECK_THROWS_AS(make_map(MapKind::PhiDelta, MapParams{}), domain_error);
    auto ctx = QContext::make(Rational(1, 2));
    // phi'_q only satisfies the q-relation, so it cannot be substituted into.
    CHECK_THROWS_AS(compose(make_phi_q_prime(ctx), make_phi_q(ctx)), unsupported_operation);
    CHECK_THROWS_AS(make_phi_q_prime(ctx)(op::x()), unsupported_operation);
}

TEST_CASE("construction checks catch a broken map") {
    // x -> 2x does not preserve the relation.
    auto core = detail::make_core(MapKind::PhiF, "broken", op::d(), op::scaled(Rational(2), op::x()));
    CHECK_THROWS_AS(detail::check_relations(DeformMap(core, nullptr), 6), invariant_violation);
    // d -> d + 1 preserves it but does not annihilate constants.
    auto core2 = detail::make_core(MapKind::PhiF, "shifted", op::d() + op::identity(), op::x());
    CHECK_THROWS_AS(detail::check_relations(DeformMap(core2, nullptr), 6), invariant_violation);
}

TEST_CASE("composition with the identity") {
    auto ctx = QContext::make(Rational(1, 3));
    DeformMap mq = make_phi_q(ctx);
    Truncation t{10};
    for (const DeformMap& c : {compose(make_identity(), mq), compose(mq, make_identity())}) {
        CHECK(realize(c.image_a(), t) == realize(mq.image_a(), t));
        CHECK(realize(c.image_b(), t) == realize(mq.image_b(), t));
    }
}

TEST_CASE("compositions preserve the relation on the grid") {
    Truncation t{20};
    for (const auto& qs : kQs)
        for (const auto& ds : kDeltas) {
            auto ctx = QContext::make(Rational::parse(qs));
            DeformMap mq = make_phi_q(ctx), md = make_phi_delta(Rational::parse(ds));
            for (const DeformMap& c : {compose(mq, md), compose(md, mq)}) {
                CHECK(commutator(c.image_a(), c.image_b(), t).is_identity_on_window());
                CHECK(apply(c.image_a(), Poly::constant(Rational(1)), t).is_zero());
            }
        }
}

TEST_CASE("adapted bases") {
    Truncation t{12};
    for (const auto& qs : kQs) {
        auto ctx = QContext::make(Rational::parse(qs));
        DeformMap mq = make_phi_q(ctx);
        for (std::size_t n = 0; n <= 12; ++n) CHECK(adapted_basis(mq, n, t) == Poly::monomial(n, ctx->dbracket_factorial(n)));
        for (const auto& ds : kDeltas) {
            Rational d = Rational::parse(ds);
            DeformMap md = make_phi_delta(d);
            DeformMap dq = compose(md, mq);
            for (std::size_t n = 0; n <= 12; ++n) {
                CHECK(adapted_basis(md, n, t) == falling(n, d));
                CHECK(adapted_basis(dq, n, t) == falling(n, d) * ctx->dbracket_factorial(n));
            }
        }
    }
    CHECK_THROWS_AS(adapted_basis(make_identity(), 5, Truncation{4}), overflow_error);
}

TEST_CASE("worked second basis elements of the two compositions") {
    for (const auto& qs : kQs)
        for (const auto& ds : kDeltas) {
            auto ctx = QContext::make(Rational::parse(qs));
            Rational q = ctx->q(), d = Rational::parse(ds);
            DeformMap mq = make_phi_q(ctx), md = make_phi_delta(d);
            Rational c = Rational(2) / (Rational(1) + q);
            Truncation t{6};
            CHECK(adapted_basis(compose(mq, md), 2, t) == Poly({Rational(0), -d, c}));
            CHECK(adapted_basis(compose(md, mq), 2, t) == Poly({Rational(0), -c * d, c}));
        }
    auto ctx = QContext::make(Rational(1, 2));
    DeformMap mq = make_phi_q(ctx), md = make_phi_delta(Rational(1));
    CHECK_FALSE(adapted_basis(compose(mq, md), 2, Truncation{4}) == adapted_basis(compose(md, mq), 2, Truncation{4}));
}

TEST_CASE("induced map of a composition") {
    Truncation t{10};
    auto ctx = QContext::make(Rational(1, 3));
    DeformMap mq = make_phi_q(ctx), md = make_phi_delta(Rational(1, 2));
    for (const auto& [outer, inner] : {std::pair{mq, md}, std::pair{md, mq}}) {
        DeformMap c = compose(outer, inner);
        for (std::size_t n = 0; n <= 8; ++n)
            CHECK(adapted_basis(c, n, t) == b_projection(adapted_basis(inner, n, t), outer, t).value);
    }
}

TEST_CASE("adapted basis ladder laws") {
    auto ctx = QContext::make(Rational(-1, 2));
    DeformMap mq = make_phi_q(ctx), md = make_phi_delta(Rational(1, 2));
    for (const DeformMap& m : {mq, md, compose(mq, md), compose(md, mq), make_phi_q_prime(ctx)}) {
        AdaptedBasis b(m, Truncation{10});
        CHECK(b.size() == 11);
        CHECK(b.raising_law_holds());
        CHECK(b.lowering_law_holds());
    }
    // The q-relation map lowers with {n}.
    CHECK(lowering_factor(make_phi_q_prime(ctx), 3) == ctx->qnumber(3));
}

TEST_CASE("frames convert coordinates exactly") {
    auto ctx = QContext::make(Rational(1, 2));
    DeformMap c = compose(make_phi_delta(Rational(1)), make_phi_q(ctx));
    REQUIRE(c.frame() != nullptr);
    verify::RandomPolys gen(3);
    for (int i = 0; i < 20; ++i) {
        Poly p = gen.poly_upto(10);
        CHECK(c.frame()->from_coords(c.frame()->to_coords(p)) == p);
    }
}

TEST_CASE("adapted frames give the same answers across threads") {
    auto ctx = QContext::make(Rational(1, 3));
    DeformMap c = compose(make_phi_q(ctx), make_phi_delta(Rational(1)));
    Poly p = verify::RandomPolys(5).poly(14);
    std::vector<std::vector<Rational>> out(6);
    std::vector<std::thread> pool;
    for (std::size_t i = 0; i < out.size(); ++i) pool.emplace_back([&, i] { out[i] = c.frame()->to_coords(p); });
    for (auto& th : pool) th.join();
    for (const auto& o : out) CHECK(o == out.front());
}

TEST_CASE("b-projection") {
    Truncation t{10};
    auto ctx = QContext::make(Rational(1, 2));
    DeformMap mq = make_phi_q(ctx), md = make_phi_delta(Rational(1));
    // x projects to x for every map here.
    for (const DeformMap& m : {mq, md, compose(mq, md), compose(md, mq)})
        CHECK(b_projection(Poly::monomial(1), m, t).value == Poly::monomial(1));

    // exp(lambda x) under phi_q is e_q(lambda x) = sum (lambda x)^n / {n}!.
    for (const char* ls : {"1", "2", "-1/2"}) {
        Rational l = Rational::parse(ls);
        Series s = b_projection(exp_series(l, t), mq, t);
        CHECK(s.truncation.degree == 10);
        for (std::size_t n = 0; n <= 10; ++n) CHECK(s.value.coeff(n) == pow(l, static_cast<long>(n)) / ctx->qfactorial(n));
    }
    // exp(x) under phi_delta is sum x_delta^(n) / n!.
    Poly ed = b_projection(exp_series(Rational(1), t), md, t).value;
    std::vector<Rational> c;
    for (std::size_t n = 0; n <= 10; ++n) c.push_back(Rational(1) / factorial(n));
    CHECK(ed == to_monomial(Poly(c, FallingBasis{Rational(1)})));

    // Linearity.
    verify::RandomPolys gen(9);
    for (int i = 0; i < 10; ++i) {
        Poly f = gen.poly_upto(10), g = gen.poly_upto(10);
        Rational a = gen.rational();
        DeformMap m = compose(md, mq);
        CHECK(b_projection(f * a + g, m, t).value == b_projection(f, m, t).value * a + b_projection(g, m, t).value);
    }
    CHECK_THROWS_AS(b_projection(Poly::monomial(11), mq, t), overflow_error);
}

TEST_CASE("e_q is an eigenfunction of the Jackson derivative") {
    Truncation t{24};
    for (const auto& qs : kQs) {
        auto ctx = QContext::make(Rational::parse(qs));
        for (const char* ls : {"1", "2", "-1/2"}) {
            Rational l = Rational::parse(ls);
            Poly eq = b_projection(exp_series(l, t), make_phi_q(ctx), t).value;
            CHECK(apply(make_phi_q(ctx).image_a(), eq, t) == (eq * l).truncated(23));
        }
    }
}

TEST_CASE("eigenfunction law for the f(B) family") {
    // f(k) = k + 1: a = f(B)^-1 d has eigenfunction sum f(n)!/n! x^n.
    auto f = [](std::size_t k) { return Rational(static_cast<unsigned long>(k + 1)); };
    DeformMap m = make_phi_f("k+1", f);
    Truncation t{14};
    std::vector<Rational> c{Rational(1)};
    for (std::size_t n = 1; n <= t.degree; ++n) c.push_back(c.back() * f(n) / Rational(static_cast<unsigned long>(n)));
    Poly series(c);
    CHECK(apply(m.image_a(), series, t) == series.truncated(t.degree - 1));
    CHECK(commutator(m.image_a(), m.image_b(), t).is_identity_on_window());
}

TEST_CASE("intertwining on random polynomials") {
    Truncation t{12};
    verify::RandomPolys gen(21);
    auto ctx = QContext::make(Rational(1, 2));
    DeformMap mq = make_phi_q(ctx), md = make_phi_delta(Rational(1, 2));
    std::vector<DeformMap> maps{mq, md, compose(mq, md), compose(md, mq)};
    for (const auto& m : maps)
        for (const auto& [name, g] : verify::intertwine_words())
            for (int i = 0; i < 10; ++i) CHECK(intertwine_check(g, gen.poly_upto(10), m, t));
    // G = identity is trivially intertwined.
    CHECK(intertwine_check(op::identity(), gen.poly(5), md, t));
    // d applied to x^n under phi_q: both sides n [[n-1]]! x^(n-1).
    for (std::size_t n = 1; n <= 8; ++n)
        CHECK(apply(mq(op::d()), b_projection(Poly::monomial(n), mq, t).value, t) ==
              Poly::monomial(n - 1, Rational(static_cast<unsigned long>(n)) * ctx->dbracket_factorial(n - 1)));
}
