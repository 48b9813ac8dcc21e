#pragma once

#include <memory>
#include <sstream>
#include <string>

#include <json.hpp>

#include "ccr/hahn.hpp"
#include "ccr/linop.hpp"
#include "ccr/maps.hpp"
#include "ccr/poly.hpp"
#include "ccr/verify.hpp"

// JSON and CSV encodings. Rationals are always strings "p/q" so nothing is lost.

namespace ccr::io {

using json = nlohmann::ordered_json;

inline json to_json(const Rational& r) { return r.to_string(); }

inline Rational rational_from_json(const json& j) {
    if (j.is_string()) return Rational::parse(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.get<long long>());
    throw domain_error("expected a rational as \"p/q\" or an integer");
}

inline json to_json(const Basis& b) {
    if (std::holds_alternative<MonomialBasis>(b)) return "monomial";
    return json{{"falling", {{"delta", to_json(std::get<FallingBasis>(b).delta)}}}};
}

inline Basis basis_from_json(const json& j) {
    if (j.is_string() && j.get<std::string>() == "monomial") return MonomialBasis{};
    if (j.is_object() && j.contains("falling")) return FallingBasis{rational_from_json(j.at("falling").at("delta"))};
    throw domain_error("unknown basis encoding");
}

inline json to_json(const Poly& p) {
    json c = json::array();
    for (const auto& x : p.coeffs()) c.push_back(to_json(x));
    return json{{"basis", to_json(p.basis())}, {"coeffs", c}};
}

inline Poly poly_from_json(const json& j) {
    std::vector<Rational> c;
    for (const auto& x : j.at("coeffs")) c.push_back(rational_from_json(x));
    return Poly(std::move(c), j.contains("basis") ? basis_from_json(j.at("basis")) : Basis{MonomialBasis{}});
}

inline json to_json(const LinOp& l) {
    json cols = json::array();
    for (const auto& c : l.columns()) cols.push_back(c ? to_json(*c) : json(nullptr));
    auto [lo, hi] = l.band();
    return json{{"D", l.degree()}, {"columns", cols}, {"band", {lo, hi}}};
}

inline LinOp linop_from_json(const json& j) {
    std::vector<std::optional<Poly>> cols;
    for (const auto& c : j.at("columns")) {
        if (c.is_null())
            cols.emplace_back();
        else
            cols.emplace_back(poly_from_json(c));
    }
    return LinOp(j.at("D").get<std::size_t>(), std::move(cols));
}

inline json to_json(const DeformMap& m) {
    switch (m.kind()) {
    case MapKind::Identity: return json{{"map", "identity"}};
    case MapKind::PhiQ: return json{{"map", "phi_q"}, {"q", to_json(m.qcontext()->q())}};
    case MapKind::PhiQPrime: return json{{"map", "phi_q_prime"}, {"q", to_json(m.qcontext()->q())}};
    case MapKind::PhiDelta: return json{{"map", "phi_delta"}, {"delta", to_json(*m.delta())}};
    case MapKind::Compose: return json{{"map", "compose"}, {"outer", to_json(*m.outer())}, {"inner", to_json(*m.inner())}};
    case MapKind::PhiF: throw unsupported_operation("maps of the f(B) family carry a function and do not serialize");
    }
    throw domain_error("unknown map kind");
}

inline DeformMap map_from_json(const json& j, MapOptions opts = {}) {
    const std::string kind = j.at("map").get<std::string>();
    if (kind == "identity") return make_identity();
    if (kind == "phi_q") return make_phi_q(QContext::make(rational_from_json(j.at("q"))), opts);
    if (kind == "phi_q_prime") return make_phi_q_prime(QContext::make(rational_from_json(j.at("q"))), opts);
    if (kind == "phi_delta") return make_phi_delta(rational_from_json(j.at("delta")), opts);
    if (kind == "compose") return compose(map_from_json(j.at("outer"), opts), map_from_json(j.at("inner"), opts), opts);
    throw domain_error("unknown map '" + kind + "'");
}

inline json to_json(const hahn::HahnParams& p) {
    return json{{"alpha", to_json(p.alpha)}, {"beta", to_json(p.beta)}, {"N", to_json(p.N)},
                {"delta", to_json(p.delta)}, {"c1", to_json(p.c1)}, {"c2", to_json(p.c2())},
                {"c3", to_json(p.c3())}, {"c4", to_json(p.c4())}};
}

inline json coeff_array(const std::vector<Rational>& c) {
    json a = json::array();
    for (const auto& x : c) a.push_back(to_json(x));
    return a;
}

/// Eigenpolynomial table: one row per k with the coefficients in every basis that applies.
inline json hahn_table_json(hahn::Variant v, const hahn::HahnParams& p, const std::shared_ptr<const QContext>& ctx,
                            const std::vector<hahn::Eigenpolynomial>& rows) {
    json out{{"variant", hahn::variant_name(v)}, {"params", to_json(p)}};
    if (ctx) out["q"] = to_json(ctx->q());
    json arr = json::array();
    for (const auto& e : rows) {
        json row{{"k", e.k}, {"eigenvalue", to_json(e.eigenvalue)}, {"gamma", coeff_array(e.gamma)}};
        if (!e.natural.is_monomial_basis()) row["falling"] = coeff_array(e.natural.coeffs());
        row["monomial"] = coeff_array(e.monomial.coeffs());
        row["residual"] = e.residual.is_zero() ? "0" : "nonzero";
        arr.push_back(std::move(row));
    }
    out["rows"] = std::move(arr);
    return out;
}

inline std::string csv_join(const std::vector<Rational>& c) {
    std::string s;
    for (std::size_t i = 0; i < c.size(); ++i) s += (i ? " " : "") + c[i].to_string();
    return s;
}

/// CSV with header; coefficient lists are space-separated, lowest degree first.
inline std::string hahn_table_csv(hahn::Variant v, const hahn::HahnParams& p, const std::shared_ptr<const QContext>& ctx,
                                  const std::vector<hahn::Eigenpolynomial>& rows) {
    std::ostringstream os;
    os << "variant,alpha,beta,N,delta,c1,q,k,eigenvalue,gamma,falling,monomial,residual\n";
    for (const auto& e : rows) {
        os << hahn::variant_name(v) << ',' << p.alpha << ',' << p.beta << ',' << p.N << ',' << p.delta << ',' << p.c1 << ','
           << (ctx ? ctx->q().to_string() : "") << ',' << e.k << ',' << e.eigenvalue << ',' << csv_join(e.gamma) << ','
           << (e.natural.is_monomial_basis() ? "" : csv_join(e.natural.coeffs())) << ',' << csv_join(e.monomial.coeffs())
           << ',' << (e.residual.is_zero() ? "0" : "nonzero") << '\n';
    }
    return os.str();
}

inline json to_json(const verify::Report& r) {
    json checks = json::array();
    for (const auto& c : r.checks) {
        json j{{"name", c.name}, {"passed", c.passed}, {"window", c.window}};
        if (!c.detail.empty()) j["detail"] = c.detail;
        checks.push_back(std::move(j));
    }
    return json{{"suite", r.suite}, {"passed", r.passed()}, {"checks", checks}};
}

} // namespace ccr::io
