#include <catch_amalgamated.hpp>

#include "ccr/verify.hpp"

using namespace ccr;

TEST_CASE("every suite passes on the parameter grid") {
    for (const char* qs : {"1/2", "-1/2", "1/3", "9/10"})
        for (const char* ds : {"1", "1/2"}) {
            verify::SuiteParams p;
            p.q = QContext::make(Rational::parse(qs));
            p.delta = Rational::parse(ds);
            p.truncation = Truncation{10};
            p.samples = 5;
            for (const auto& name : verify::suite_names()) {
                verify::Report r = (*verify::find_suite(name))(p);
                INFO(name << " q=" << qs << " delta=" << ds);
                CHECK(r.passed());
                for (const auto& c : r.checks) CHECK(c.window > 0);
            }
        }
}

TEST_CASE("suites validate their parameters") {
    verify::SuiteParams none;
    CHECK_THROWS_AS(verify::ccr_suite(none), domain_error);
    CHECK_THROWS_AS(verify::qccr_suite(none), domain_error);
    verify::SuiteParams qonly;
    qonly.q = QContext::make(Rational(1, 2));
    CHECK_THROWS_AS(verify::composition_suite(qonly), domain_error);
    CHECK_THROWS_AS(verify::qcc_delta_suite(qonly), domain_error);
    CHECK(verify::ccr_suite(qonly).passed());
    verify::SuiteParams donly;
    donly.delta = Rational(1, 2);
    CHECK(verify::intertwine_suite(donly).passed());
    CHECK_FALSE(verify::find_suite("nope").has_value());
}

TEST_CASE("the literal Mq B = 1 reading fails, the q-number reading holds") {
    auto ctx = QContext::make(Rational(1, 2));
    Truncation t{6};
    CHECK_FALSE(realize(ops::quantum_average(ctx) * ops::degree_B(), t).is_identity_on_window());
    OpExpr qn_b = op::diag(ops::qnumber_of(ctx, "B", ops::degree_B_fn().fn));
    CHECK(realize(ops::quantum_average(ctx) * qn_b, t).is_identity_on_window());
}

TEST_CASE("random polynomials are reproducible") {
    verify::RandomPolys a(5), b(5);
    for (int i = 0; i < 10; ++i) CHECK(a.poly_upto(8) == b.poly_upto(8));
    verify::RandomPolys c(6);
    CHECK(c.poly(6).degree() == 6);
}
