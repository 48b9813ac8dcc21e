// Acceptance criteria, one line per criterion. Exit status is the number of failures.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "ccr/ccr.hpp"
#include "dsl_support.hpp"

using namespace ccr;

namespace {

const std::vector<Rational> kQs{Rational(1, 2), Rational(-1, 2), Rational(1, 3), Rational(9, 10)};
const std::vector<Rational> kDeltas{Rational(1), Rational(1, 2)};

// Collects failures for one criterion; the first few are reported.
struct Tally {
    std::size_t checks = 0;
    std::vector<std::string> failures;

    void expect(bool ok, const std::string& what) {
        ++checks;
        if (!ok) failures.push_back(what);
    }
    void expect(const verify::Report& r) {
        for (const auto& c : r.checks) expect(c.passed, r.suite + ": " + c.name + (c.detail.empty() ? "" : " (" + c.detail + ")"));
    }
};

std::string qd(const Rational& q, const Rational& d) { return "q=" + q.to_string() + " delta=" + d.to_string(); }

bool full_identity(const LinOp& l, std::size_t window) { return l.window() >= window && l.is_identity_on_window(); }

void ccr_preservation(Tally& t) {
    Truncation tr{32};
    for (const auto& q : kQs) {
        auto ctx = QContext::make(q);
        t.expect(full_identity(commutator(ops::jackson_derivative(ctx), ops::jackson_conjugate(ctx), tr), 32),
                 "[Dq, xq] at q=" + q.to_string());
        for (const auto& d : kDeltas) {
            DeformMap mq = make_phi_q(ctx, MapOptions{0}), md = make_phi_delta(d, MapOptions{0});
            for (const auto& m : {compose(mq, md, MapOptions{0}), compose(md, mq, MapOptions{0})})
                t.expect(full_identity(commutator(m.image_a(), m.image_b(), tr), 32), m.name() + " " + qd(q, d));
        }
    }
    for (const auto& d : kDeltas)
        t.expect(full_identity(commutator(ops::delta_derivative(d), ops::delta_conjugate(d), tr), 32),
                 "[Ddelta, xdelta] at delta=" + d.to_string());
}

void q_ccr(Tally& t) {
    Truncation tr{32};
    for (const auto& q : kQs) {
        auto ctx = QContext::make(q);
        t.expect(full_identity(q_commutator(ops::jackson_derivative(ctx), op::x(), q, tr), 32), "Dq x - q x Dq at q=" + q.to_string());
    }
}

void invariance_of_A(Tally& t) {
    Truncation tr{32};
    std::vector<Rational> diag;
    for (std::size_t n = 0; n <= 32; ++n) diag.push_back(Rational(static_cast<unsigned long>(n)));
    LinOp want = LinOp::diagonal(32, diag);
    for (const auto& q : kQs) {
        auto ctx = QContext::make(q);
        LinOp got = realize(ops::jackson_conjugate(ctx) * ops::jackson_derivative(ctx), tr);
        t.expect(got.window() == 33 && got == want, "xq Dq at q=" + q.to_string());
    }
}

void jackson_calculus(Tally& t) {
    Truncation tr{32};
    for (const auto& q : kQs) {
        auto ctx = QContext::make(q);
        OpExpr dq = ops::jackson_derivative(ctx), S = ops::jackson_integral(ctx), Mq = ops::quantum_average(ctx);
        t.expect(full_identity(realize(dq * S, tr), 32), "Dq S at q=" + q.to_string());
        std::vector<Rational> ones(33, Rational(1));
        ones[0] = 0;
        LinOp sd = realize(S * dq, tr);
        t.expect(sd.window() == 33 && sd == LinOp::diagonal(32, ones), "S Dq at q=" + q.to_string());
        // Mq = (1/x) S acts as {B}^-1, so Mq {B} is the identity.
        OpExpr qn_b = op::diag(ops::qnumber_of(ctx, "B", ops::degree_B_fn().fn));
        t.expect(full_identity(realize(Mq * qn_b, tr), 33), "Mq {B} at q=" + q.to_string());
    }
}

void rolle(Tally& t) {
    for (const auto& q : kQs) {
        verify::SuiteParams p{QContext::make(q), std::nullopt, Truncation{13}};
        p.samples = 100;
        p.seed = 5;
        t.expect(verify::rolle_suite(p));
    }
}

void adapted_bases(Tally& t) {
    Truncation tr{12};
    for (const auto& q : kQs) {
        auto ctx = QContext::make(q);
        DeformMap mq = make_phi_q(ctx, MapOptions{0});
        for (std::size_t n = 0; n <= 12; ++n)
            t.expect(adapted_basis(mq, n, tr) == Poly::monomial(n, ctx->dbracket_factorial(n)), "|n>_q n=" + std::to_string(n));
        for (const auto& d : kDeltas) {
            DeformMap md = make_phi_delta(d, MapOptions{0});
            DeformMap qdm = compose(mq, md, MapOptions{0}), dqm = compose(md, mq, MapOptions{0});
            Poly prod({Rational(1)});
            for (std::size_t n = 0; n <= 12; ++n) {
                if (n > 0) prod = prod * Poly({-d * Rational(static_cast<unsigned long>(n - 1)), Rational(1)});
                t.expect(adapted_basis(md, n, tr) == prod, "|n>_delta n=" + std::to_string(n));
                t.expect(adapted_basis(dqm, n, tr) == prod * ctx->dbracket_factorial(n), "|n>_dq n=" + std::to_string(n));
            }
            Rational c = Rational(2) / (Rational(1) + q);
            t.expect(adapted_basis(qdm, 2, tr) == Poly({Rational(0), -d, c}), "|2>_qd " + qd(q, d));
            t.expect(adapted_basis(dqm, 2, tr) == Poly({Rational(0), -d, Rational(1)}) * c, "|2>_dq " + qd(q, d));
        }
    }
}

void intertwining(Tally& t) {
    for (const auto& q : kQs) {
        for (const auto& d : kDeltas) {
            verify::SuiteParams p{QContext::make(q), d, Truncation{12}};
            p.samples = 50;
            p.seed = 7;
            t.expect(verify::intertwine_suite(p));
        }
    }
}

void q_exponential(Tally& t) {
    Truncation tr{24};
    for (const auto& q : kQs) {
        auto ctx = QContext::make(q);
        for (const auto& l : {Rational(1), Rational(2), Rational(-1, 2)}) {
            std::vector<Rational> c;
            for (std::size_t n = 0; n <= 24; ++n) c.push_back(pow(l, static_cast<long>(n)) / ctx->qfactorial(n));
            Poly eq(c);
            t.expect(b_projection(exp_series(l, tr), make_phi_q(ctx), tr).value == eq, "e_q as projection of exp");
            Poly lhs = apply(ops::jackson_derivative(ctx), eq, tr);
            t.expect(lhs.truncated(23) == (eq * l).truncated(23), "Dq e_q = lambda e_q, q=" + q.to_string() + " lambda=" + l.to_string());
        }
    }
}

void similarity(Tally& t) {
    for (const auto& q : kQs) t.expect(verify::similarity_suite(verify::SuiteParams{QContext::make(q), std::nullopt, Truncation{24}}));
}

void qcc(Tally& t) {
    for (const auto& q : kQs)
        for (const auto& d : kDeltas) t.expect(verify::qcc_delta_suite(verify::SuiteParams{QContext::make(q), d, Truncation{12}}));
}

void hahn_suite(Tally& t) {
    using namespace hahn;
    const std::vector<HahnParams> params{{Rational(0), Rational(0), Rational(5)},
                                         {Rational(1, 2), Rational(1, 3), Rational(7)},
                                         {Rational(1), Rational(2), Rational(10)}};
    const std::size_t kmax = 12;
    Truncation tr{20};
    std::vector<std::shared_ptr<const QContext>> qs;
    for (const auto& q : kQs) qs.push_back(QContext::make(q));
    verify::RandomPolys gen(11);
    for (const auto& p : params) {
        const std::string ps = p.to_string();
        // (a) the stencil and the abstract word act identically.
        OpExpr three = build(Variant::ThreePoint, p), abstract = build(Variant::Abstract, p);
        for (int i = 0; i < 25; ++i) {
            Poly f = gen.poly_upto(18);
            t.expect(apply(three, f, Truncation{22}) == apply(abstract, f, Truncation{22}), "(a) ThreePoint = Abstract " + ps);
        }
        // (b), (c) diagonals against the closed-form spectra.
        for (const auto& v : {Variant::Continuous, Variant::QDeformed, Variant::QSpectrum}) {
            for (const auto& ctx : qs) {
                if (!needs_q(v) && ctx != qs.front()) continue;
                LinOp l = realize_variant(v, p, ctx, tr);
                t.expect(l.window() == 21 && l.is_degree_non_increasing(), std::string("triangular ") + variant_name(v));
                for (std::size_t k = 0; k <= kmax; ++k) {
                    Rational want = v == Variant::QSpectrum
                                        ? p.c1 / p.delta * ctx->qnumber(k) * ((k ? ctx->qnumber(k - 1) : Rational(0)) + Rational(1)) +
                                              p.c3() * ctx->qnumber(k)
                                        : p.c1 / p.delta * Rational(static_cast<unsigned long>(k * k)) +
                                              p.c3() * Rational(static_cast<unsigned long>(k));
                    t.expect(l.entry(k, k) == want, std::string(v == Variant::QSpectrum ? "(c) " : "(b) ") + variant_name(v) +
                                                         " k=" + std::to_string(k) + " " + ps);
                }
            }
        }
        // (d) zero residuals, (e) the q-deformed eigenpolynomials from the continuous coefficients.
        auto cont = eigenpolynomials(Variant::Continuous, p, nullptr, kmax, tr);
        for (const auto& v : {Variant::ThreePoint, Variant::Abstract, Variant::Continuous})
            for (const auto& e : eigenpolynomials(v, p, nullptr, kmax, tr))
                t.expect(e.residual.is_zero(), std::string("(d) ") + variant_name(v) + " k=" + std::to_string(e.k) + " " + ps);
        for (const auto& ctx : qs) {
            for (const auto& v : {Variant::QDeformed, Variant::QSpectrum})
                for (const auto& e : eigenpolynomials(v, p, ctx, kmax, tr))
                    t.expect(e.residual.is_zero(), std::string("(d) ") + variant_name(v) + " k=" + std::to_string(e.k) + " " + ps);
            auto qdef = eigenpolynomials(Variant::QDeformed, p, ctx, kmax, tr);
            for (std::size_t k = 0; k <= kmax; ++k) {
                std::vector<Rational> c;
                for (std::size_t i = 0; i <= k; ++i) c.push_back(cont[k].monomial.coeff(i) * ctx->dbracket_factorial(i));
                t.expect(qdef[k].monomial == Poly(c), "(e) k=" + std::to_string(k) + " " + ps);
            }
        }
    }
}

void parser(Tally& t) {
    auto r = testing::round_trip(2024, 100);
    t.expect(r.total == 100 && r.stable == r.total, "print/parse/print is stable");
    t.expect(r.same == r.compared && r.compared > 0, "round-tripped expressions act identically");

    dsl::Params p = testing::dsl_params();
    auto R = [&](const std::string& s) { return realize(dsl::parse_operator(s, p), Truncation{24}); };
    t.expect(R("Dq*x - 1/2*x*Dq").is_identity_on_window(), "Dq*x - 1/2*x*Dq = 1");
    t.expect(R("inv(qb(B))*d") == R("Dq"), "inv(qb(B))*d = Dq");
    t.expect(R("x*d") == R("A"), "x*d = A");

    for (const auto& s : testing::fuzz_corpus(99)) {
        try {
            auto res = dsl::parse(s, p);
            if (auto e = std::get_if<OpExpr>(&res)) (void)dsl::print(*e);
            t.expect(true, "");
        } catch (const parse_error&) {
            t.expect(true, "");
        } catch (const std::exception& e) {
            t.expect(false, std::string("fuzz input raised ") + e.what());
        }
    }
}

struct Criterion {
    const char* title;
    std::function<void(Tally&)> run;
};

} // namespace

int main() {
    const std::vector<Criterion> criteria{
        {"CCR preservation (D=32)", ccr_preservation},
        {"q-CCR Dq x - q x Dq = 1 (D=32)", q_ccr},
        {"invariance of A: xq Dq = diag(0..D)", invariance_of_A},
        {"Jackson calculus: Dq S = 1, S Dq = 1 - P0, Mq {B} = 1 (D=32)", jackson_calculus},
        {"quantum Rolle identity, 100 polynomials per q", rolle},
        {"adapted bases n <= 12 and worked |2> values", adapted_bases},
        {"intertwining, 50 polynomials, 4 words, 4 maps", intertwining},
        {"e_q eigenfunction of Dq (D=24)", q_exponential},
        {"similarity transform (D=24)", similarity},
        {"quantum canonical conjugate (D=12)", qcc},
        {"Hahn suite (a)-(e), kmax=12, D=20", hahn_suite},
        {"parser round trip, identities, fuzz corpus", parser},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Tally t;
        auto start = std::chrono::steady_clock::now();
        std::string error;
        try {
            criteria[i].run(t);
        } catch (const std::exception& e) {
            error = e.what();
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        bool ok = error.empty() && t.failures.empty() && t.checks > 0;
        if (!ok) ++failed;
        char timing[32];
        std::snprintf(timing, sizeof timing, "%.2fs", secs);
        std::cout << (ok ? "[PASS] " : "[FAIL] ") << (i + 1) << ". " << criteria[i].title << " (" << t.checks << " checks, "
                  << timing << ")\n";
        if (!error.empty()) std::cout << "       exception: " << error << '\n';
        for (std::size_t k = 0; k < t.failures.size() && k < 5; ++k) std::cout << "       " << t.failures[k] << '\n';
    }
    std::cout << (failed ? std::to_string(failed) + " criteria failed\n" : "all criteria passed\n");
    return failed;
}
