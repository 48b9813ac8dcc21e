#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "ccr/calculus.hpp"
#include "ccr/maps.hpp"
#include "ccr/opcore.hpp"
#include "ccr/operators.hpp"

// Named identity suites over the library, shared by the command line tool and the tests.

namespace ccr::verify {

struct CheckResult {
    std::string name;
    bool passed = false;
    /// Degrees 0..window-1 were compared.
    std::size_t window = 0;
    std::string detail;
};

struct Report {
    std::string suite;
    std::vector<CheckResult> checks;
    bool passed() const {
        for (const auto& c : checks)
            if (!c.passed) return false;
        return !checks.empty();
    }
};

struct SuiteParams {
    std::shared_ptr<const QContext> q;
    std::optional<Rational> delta;
    Truncation truncation{16};
    std::uint64_t seed = 20240601;
    std::size_t samples = 20;
};

/// Deterministic random rationals and polynomials (mt19937_64 output is fixed by the standard).
class RandomPolys {
public:
    explicit RandomPolys(std::uint64_t seed) : rng_(seed) {}

    Rational rational(long max_num = 9, unsigned long max_den = 5) {
        long num = static_cast<long>(rng_() % static_cast<std::uint64_t>(2 * max_num + 1)) - max_num;
        unsigned long den = 1 + static_cast<unsigned long>(rng_() % max_den);
        return Rational(BigInt(num), BigInt(den));
    }

    /// Random polynomial of degree exactly `degree` (nonzero leading coefficient).
    Poly poly(std::size_t degree) {
        std::vector<Rational> c(degree + 1);
        for (auto& x : c) x = rational();
        while (c.back().is_zero()) c.back() = rational();
        return Poly(std::move(c));
    }

    /// Random polynomial of degree uniform in [0, max_degree].
    Poly poly_upto(std::size_t max_degree) { return poly(static_cast<std::size_t>(rng_() % (max_degree + 1))); }

    std::uint64_t next() { return rng_(); }

private:
    std::mt19937_64 rng_;
};

namespace detail {

inline CheckResult identity_check(const std::string& name, const LinOp& l) {
    CheckResult r{name, l.is_identity_on_window() && l.window() > 0, l.window(), ""};
    if (!r.passed) r.detail = l.window() == 0 ? "empty window" : "differs from identity";
    return r;
}

inline CheckResult equal_check(const std::string& name, const LinOp& a, const LinOp& b) {
    std::size_t w = std::min(a.window(), b.window());
    CheckResult r{name, w > 0 && a.restricted(w) == b.restricted(w), w, ""};
    if (!r.passed) r.detail = "realizations differ";
    return r;
}

inline CheckResult poly_check(const std::string& name, const Poly& got, const Poly& want, std::size_t window) {
    CheckResult r{name, got == want, window, ""};
    if (!r.passed) r.detail = "mismatch";
    return r;
}

inline void require_q(const SuiteParams& p, const std::string& suite) {
    if (!p.q) throw domain_error("suite " + suite + " requires --q");
}
inline void require_delta(const SuiteParams& p, const std::string& suite) {
    if (!p.delta) throw domain_error("suite " + suite + " requires --delta");
}

inline std::string label(const std::string& base, const SuiteParams& p) {
    std::string s = base + " [";
    bool first = true;
    if (p.q) {
        s += "q=" + p.q->q().to_string();
        first = false;
    }
    if (p.delta) s += std::string(first ? "" : " ") + "delta=" + p.delta->to_string();
    return s + "]";
}

} // namespace detail

/// Commutator [image_a, image_b] = 1 for phi_q, phi_delta and both compositions (whichever parameters are set).
inline Report ccr_suite(const SuiteParams& p) {
    if (!p.q && !p.delta) throw domain_error("suite ccr requires --q or --delta");
    Report r{"ccr", {}};
    Truncation t = p.truncation;
    r.checks.push_back(detail::identity_check("[d, x] = 1", commutator(op::d(), op::x(), t)));
    std::vector<DeformMap> maps;
    if (p.q) {
        maps.push_back(make_phi_q(p.q, MapOptions{0}));
        r.checks.push_back(detail::identity_check(detail::label("[Dq, xq] = 1", p),
                                                  commutator(ops::jackson_derivative(p.q), ops::jackson_conjugate(p.q), t)));
    }
    if (p.delta) {
        maps.push_back(make_phi_delta(*p.delta, MapOptions{0}));
        r.checks.push_back(detail::identity_check(detail::label("[Ddelta, xdelta] = 1", p),
                                                  commutator(ops::delta_derivative(*p.delta), ops::delta_conjugate(*p.delta), t)));
    }
    if (p.q && p.delta) {
        maps.push_back(compose(maps[0], maps[1], MapOptions{0}));
        maps.push_back(compose(maps[1], maps[0], MapOptions{0}));
    }
    for (const auto& m : maps)
        r.checks.push_back(detail::identity_check("[a, b] = 1 under " + m.name(), commutator(m.image_a(), m.image_b(), t)));
    return r;
}

/// The q-relation, invariance of A and the Jackson integral/averaging identities.
inline Report qccr_suite(const SuiteParams& p) {
    detail::require_q(p, "qccr");
    Report r{"qccr", {}};
    Truncation t = p.truncation;
    const auto& ctx = p.q;
    const Rational& q = ctx->q();
    OpExpr dq = ops::jackson_derivative(ctx), xq = ops::jackson_conjugate(ctx);
    OpExpr S = ops::jackson_integral(ctx), Mq = ops::quantum_average(ctx);
    r.checks.push_back(detail::identity_check(detail::label("Dq x - q x Dq = 1", p), q_commutator(dq, op::x(), q, t)));
    r.checks.push_back(detail::equal_check(detail::label("xq Dq = A", p), realize(xq * dq, t), realize(ops::degree_A(), t)));
    r.checks.push_back(detail::identity_check(detail::label("Dq S = 1", p), realize(dq * S, t)));

    // S Dq = 1 - P0, where P0 projects onto constants.
    LinOp sd = realize(S * dq, t);
    std::vector<Rational> ones(t.degree + 1, Rational(1));
    ones[0] = 0;
    r.checks.push_back(detail::equal_check(detail::label("S Dq = 1 - P0", p), sd, LinOp::diagonal(t.degree, ones)));
    // (1/x) {A}^-1 x = {B}^-1, so Mq inverts the q-number of B.
    OpExpr qn_b = op::diag(ops::qnumber_of(ctx, "B", ops::degree_B_fn().fn));
    r.checks.push_back(detail::identity_check(detail::label("Mq qn(B) = 1", p), realize(Mq * qn_b, t)));
    return r;
}

/// x_q f = x(<f>_q + <x f'>_q) on random polynomials.
inline Report rolle_suite(const SuiteParams& p) {
    detail::require_q(p, "rolle");
    Report r{"rolle", {}};
    if (p.truncation.degree == 0) throw domain_error("rolle needs degree >= 1");
    RandomPolys gen(p.seed);
    std::size_t maxdeg = std::min<std::size_t>(12, p.truncation.degree - 1);
    std::size_t ok = 0;
    for (std::size_t i = 0; i < p.samples; ++i)
        if (rolle_check(gen.poly_upto(maxdeg), p.q, p.truncation)) ++ok;
    CheckResult c{detail::label("xq f = x(<f>_q + <x f'>_q)", p), ok == p.samples, p.truncation.degree + 1,
                  std::to_string(ok) + "/" + std::to_string(p.samples) + " polynomials of degree <= " + std::to_string(maxdeg)};
    r.checks.push_back(std::move(c));
    return r;
}

inline std::vector<std::pair<std::string, OpExpr>> intertwine_words() {
    return {{"d", op::d()}, {"x", op::x()}, {"x*d", op::x() * op::d()}, {"d^2", op::power(op::d(), 2)}};
}

/// G_alpha f^ = (G f)^ for G in {d, x, x*d, d^2} and every available map.
inline Report intertwine_suite(const SuiteParams& p) {
    if (!p.q && !p.delta) throw domain_error("suite intertwine requires --q or --delta");
    if (p.truncation.degree < 2) throw domain_error("intertwine needs degree >= 2");
    Report r{"intertwine", {}};
    std::vector<DeformMap> maps;
    if (p.q) maps.push_back(make_phi_q(p.q, MapOptions{0}));
    if (p.delta) maps.push_back(make_phi_delta(*p.delta, MapOptions{0}));
    if (p.q && p.delta) {
        maps.push_back(compose(maps[0], maps[1], MapOptions{0}));
        maps.push_back(compose(maps[1], maps[0], MapOptions{0}));
    }
    RandomPolys gen(p.seed);
    std::vector<Poly> fs;
    for (std::size_t i = 0; i < p.samples; ++i) fs.push_back(gen.poly_upto(p.truncation.degree - 1));
    for (const auto& m : maps) {
        for (const auto& [gname, g] : intertwine_words()) {
            std::size_t ok = 0;
            for (const auto& f : fs)
                if (intertwine_check(g, f, m, p.truncation)) ++ok;
            r.checks.push_back({gname + " under " + m.name(), ok == fs.size(), p.truncation.degree + 1,
                                std::to_string(ok) + "/" + std::to_string(fs.size())});
        }
    }
    return r;
}

/// U^-1 d U = Dq and U^-1 x U = xq, plus the shifted-spectrum form U(A)^-1 U(A-1) x = [[A]] x.
inline Report similarity_suite(const SuiteParams& p) {
    detail::require_q(p, "similarity");
    Report r{"similarity", {}};
    Truncation t = p.truncation;
    const auto& ctx = p.q;
    DiagNode u = ops::similarity_fn(ctx);
    OpExpr U = op::diag(u), Ui = op::inv(u);
    r.checks.push_back(detail::equal_check(detail::label("U^-1 d U = Dq", p), realize(Ui * op::d() * U, t),
                                           realize(ops::jackson_derivative(ctx), t)));
    r.checks.push_back(detail::equal_check(detail::label("U^-1 x U = xq", p), realize(Ui * op::x() * U, t),
                                           realize(ops::jackson_conjugate(ctx), t)));
    DiagNode u_shift = op::diag_fn("U(A-1)", [ctx](std::size_t n) { return n == 0 ? Rational(1) : ctx->gamma_ratio(n - 1); });
    DiagNode qb_a = op::diag_fn("qb(A)", [ctx](std::size_t n) { return ctx->dbracket(n); });
    r.checks.push_back(detail::equal_check(detail::label("U(A)^-1 U(A-1) x = qb(A) x", p),
                                           realize(Ui * op::diag(u_shift) * op::x(), t), realize(op::diag(qb_a) * op::x(), t)));
    return r;
}

/// a_delta Y - q Y a_delta = 1 with Y = phi_delta(x [[B]]^-1).
inline Report qcc_delta_suite(const SuiteParams& p) {
    detail::require_q(p, "qcc-delta");
    detail::require_delta(p, "qcc-delta");
    Report r{"qcc-delta", {}};
    DeformMap m = qcc_delta_map(p.q, *p.delta, MapOptions{0});
    r.checks.push_back(detail::identity_check(detail::label("a_delta Y - q Y a_delta = 1", p),
                                              q_commutator(m.image_a(), m.image_b(), p.q->q(), p.truncation)));
    return r;
}

/// Worked adapted-basis values of both compositions, functoriality and non-commutativity.
inline Report composition_suite(const SuiteParams& p) {
    detail::require_q(p, "composition");
    detail::require_delta(p, "composition");
    Report r{"composition", {}};
    const auto& ctx = p.q;
    const Rational& q = ctx->q();
    const Rational& delta = *p.delta;
    Truncation t = p.truncation;
    if (t.degree < 2) throw domain_error("composition needs degree >= 2");
    DeformMap mq = make_phi_q(ctx, MapOptions{0}), md = make_phi_delta(delta, MapOptions{0});
    DeformMap qd = compose(mq, md, MapOptions{0}), dq = compose(md, mq, MapOptions{0});

    Rational two_over = Rational(2) / (Rational(1) + q);
    r.checks.push_back(detail::poly_check("|2>_qd = 2/(1+q) x^2 - delta x", adapted_basis(qd, 2, t),
                                          Poly({Rational(0), -delta, two_over}), 3));
    r.checks.push_back(detail::poly_check("|2>_dq = 2/(1+q) x(x - delta)", adapted_basis(dq, 2, t),
                                          Poly({Rational(0), -two_over * delta, two_over}), 3));
    r.checks.push_back({"|2>_qd != |2>_dq", !(adapted_basis(qd, 2, t) == adapted_basis(dq, 2, t)), 3, ""});

    std::size_t nmax = std::min<std::size_t>(12, t.degree);
    bool ok = true;
    for (std::size_t n = 0; n <= nmax && ok; ++n) {
        Poly falling = to_monomial(Poly::monomial(n, ctx->dbracket_factorial(n), FallingBasis{delta}));
        ok = adapted_basis(dq, n, t) == falling;
    }
    r.checks.push_back({"|n>_dq = qb(n)! x_delta^(n)", ok, nmax + 1, ""});

    // Induced map of a composition: |n>_{outer o inner} is the outer projection of |n>_inner.
    std::size_t fmax = std::min<std::size_t>(8, t.degree);
    for (const auto* c : {&qd, &dq}) {
        bool same = true;
        for (std::size_t n = 0; n <= fmax && same; ++n)
            same = adapted_basis(*c, n, t) == b_projection(adapted_basis(*c->inner(), n, t), *c->outer(), t).value;
        r.checks.push_back({"functoriality of " + c->name(), same, fmax + 1, ""});
    }
    for (const auto* m : {&qd, &dq})
        r.checks.push_back(detail::identity_check("[a, b] = 1 under " + m->name(), commutator(m->image_a(), m->image_b(), t)));
    return r;
}

inline const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{"ccr", "qccr", "rolle", "intertwine", "similarity", "qcc-delta", "composition"};
    return names;
}

inline std::optional<std::function<Report(const SuiteParams&)>> find_suite(const std::string& name) {
    if (name == "ccr") return ccr_suite;
    if (name == "qccr") return qccr_suite;
    if (name == "rolle") return rolle_suite;
    if (name == "intertwine") return intertwine_suite;
    if (name == "similarity") return similarity_suite;
    if (name == "qcc-delta") return qcc_delta_suite;
    if (name == "composition") return composition_suite;
    return std::nullopt;
}

} // namespace ccr::verify
