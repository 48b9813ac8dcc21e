// ccrq: command line front end for the ccr library.

#include <algorithm>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ccr/ccr.hpp"

namespace {

using namespace ccr;

enum class Format { Text, Json, Csv };

constexpr int kExitUsage = 2;
constexpr int kExitMath = 3;

struct Globals {
    std::string q;
    std::string delta;
    std::size_t degree = 16;
    std::string format = "text";
    bool truncate = false;
};

struct Context {
    std::shared_ptr<const QContext> q;
    std::optional<Rational> delta;
    Truncation t;
    Format format = Format::Text;
    ApplyOptions apply_opts;

    dsl::Params dsl_params() const {
        dsl::Params p;
        if (q) p.q = q->q();
        p.delta = delta;
        p.max_index = std::max<std::size_t>(64, t.degree + 4);
        return p;
    }
    const std::shared_ptr<const QContext>& need_q(const std::string& what) const {
        if (!q) throw domain_error(what + " requires --q");
        return q;
    }
    const Rational& need_delta(const std::string& what) const {
        if (!delta) throw domain_error(what + " requires --delta");
        return *delta;
    }
};

Context resolve(const Globals& g) {
    Context c;
    c.t = Truncation{g.degree};
    if (!g.q.empty()) {
        c.q = QContext::make(Rational::parse(g.q), std::max<std::size_t>(64, g.degree + 4));
        if (auto w = c.q->warning()) std::cerr << "warning: " << *w << '\n';
    }
    if (!g.delta.empty()) c.delta = Rational::parse(g.delta);
    c.format = g.format == "json" ? Format::Json : g.format == "csv" ? Format::Csv : Format::Text;
    c.apply_opts.allow_truncation = g.truncate;
    return c;
}

Poly read_poly(const std::string& text, const Context& c) {
    std::string s = text;
    auto first = s.find_first_not_of(" \t");
    if (first == std::string::npos || s.compare(first, 5, "poly(") != 0) s = "poly(" + s + ")";
    return dsl::parse_poly(s, c.dsl_params());
}

void emit_poly(const Poly& p, const Context& c) {
    switch (c.format) {
    case Format::Text: std::cout << dsl::print(p) << '\n'; break;
    case Format::Json: {
        auto j = io::to_json(p);
        j["text"] = dsl::print(p);
        std::cout << j.dump(2) << '\n';
        break;
    }
    case Format::Csv:
        std::cout << "degree,coefficient\n";
        for (std::size_t n = 0; n < p.coeffs().size(); ++n) std::cout << n << ',' << p.coeffs()[n] << '\n';
        break;
    }
}

std::string monomial_text(std::size_t n) { return n == 0 ? "1" : n == 1 ? "x" : "x^" + std::to_string(n); }

int cmd_apply(const Context& c, const std::string& expr, const std::string& poly) {
    OpExpr e = dsl::parse_operator(expr, c.dsl_params());
    Poly p = read_poly(poly, c);
    emit_poly(apply(e, p, c.t, c.apply_opts), c);
    return 0;
}

int cmd_realize(const Context& c, const std::string& expr) {
    LinOp l = realize(dsl::parse_operator(expr, c.dsl_params()), c.t, c.apply_opts);
    switch (c.format) {
    case Format::Text:
        for (std::size_t n = 0; n < l.size(); ++n)
            std::cout << monomial_text(n) << " -> " << (l.column(n) ? dsl::print(*l.column(n)) : "overflow") << '\n';
        std::cout << "window: degree <= " << static_cast<long>(l.window()) - 1 << '\n';
        break;
    case Format::Json: std::cout << io::to_json(l).dump(2) << '\n'; break;
    case Format::Csv:
        std::cout << "column,row,value\n";
        for (std::size_t n = 0; n < l.size(); ++n) {
            if (!l.column(n)) {
                std::cout << n << ",,overflow\n";
                continue;
            }
            const auto& col = *l.column(n);
            for (std::size_t r = 0; r < col.coeffs().size(); ++r)
                if (!col.coeffs()[r].is_zero()) std::cout << n << ',' << r << ',' << col.coeffs()[r] << '\n';
        }
        break;
    }
    return 0;
}

int cmd_verify(const Context& c, const std::string& suite, std::size_t samples, std::uint64_t seed) {
    auto fn = verify::find_suite(suite);
    if (!fn) {
        std::string names;
        for (const auto& n : verify::suite_names()) names += (names.empty() ? "" : ", ") + n;
        std::cerr << "error: unknown suite '" << suite << "' (known: " << names << ")\n";
        return kExitUsage;
    }
    verify::SuiteParams p;
    p.q = c.q;
    p.delta = c.delta;
    p.truncation = c.t;
    p.samples = samples;
    p.seed = seed;
    verify::Report r = (*fn)(p);
    switch (c.format) {
    case Format::Text:
        for (const auto& ch : r.checks) {
            std::cout << (ch.passed ? "PASS " : "FAIL ") << ch.name << " (degree <= " << static_cast<long>(ch.window) - 1 << ")";
            if (!ch.detail.empty()) std::cout << " " << ch.detail;
            std::cout << '\n';
        }
        std::cout << r.suite << ": " << (r.passed() ? "all passed" : "FAILED") << '\n';
        break;
    case Format::Json: std::cout << io::to_json(r).dump(2) << '\n'; break;
    case Format::Csv:
        std::cout << "suite,check,passed,window,detail\n";
        for (const auto& ch : r.checks)
            std::cout << r.suite << ",\"" << ch.name << "\"," << (ch.passed ? "true" : "false") << ',' << ch.window << ','
                      << ch.detail << '\n';
        break;
    }
    return r.passed() ? 0 : kExitMath;
}

DeformMap named_map(const std::string& name, const Context& c) {
    auto dot = name.find('.');
    if (dot != std::string::npos)
        return compose(named_map(name.substr(0, dot), c), named_map(name.substr(dot + 1), c));
    if (name == "identity") return make_identity();
    if (name == "phi_q") return make_phi_q(c.need_q(name));
    if (name == "phi_q_prime") return make_phi_q_prime(c.need_q(name));
    if (name == "phi_delta") return make_phi_delta(c.need_delta(name));
    throw domain_error("unknown map '" + name + "' (known: identity, phi_q, phi_delta, phi_q_prime; compose with '.')");
}

void emit_poly_list(const std::vector<std::pair<std::string, Poly>>& rows, const std::string& key, const Context& c,
                    const io::json& header) {
    switch (c.format) {
    case Format::Text:
        for (const auto& [label, p] : rows) std::cout << label << " = " << dsl::print(p) << '\n';
        break;
    case Format::Json: {
        io::json j = header;
        io::json arr = io::json::array();
        for (const auto& [label, p] : rows) {
            io::json e = io::to_json(p);
            e["label"] = label;
            e["text"] = dsl::print(p);
            arr.push_back(std::move(e));
        }
        j[key] = std::move(arr);
        std::cout << j.dump(2) << '\n';
        break;
    }
    case Format::Csv:
        std::cout << "label,coeffs\n";
        for (const auto& [label, p] : rows) std::cout << label << ',' << io::csv_join(p.coeffs()) << '\n';
        break;
    }
}

int cmd_basis(const Context& c, const std::string& map_name, std::size_t n) {
    DeformMap m = named_map(map_name, c);
    if (n > c.t.degree) throw domain_error("--n exceeds --degree");
    std::vector<std::pair<std::string, Poly>> rows;
    for (std::size_t k = 0; k <= n; ++k) rows.emplace_back("|" + std::to_string(k) + ">", adapted_basis(m, k, c.t));
    emit_poly_list(rows, "basis", c, io::json{{"map", io::to_json(m)}, {"name", m.name()}});
    return 0;
}

int cmd_project(const Context& c, const std::string& map_name, const std::string& poly, const std::string& exp_lambda) {
    DeformMap m = named_map(map_name, c);
    Poly f;
    std::string label;
    if (!exp_lambda.empty()) {
        if (!poly.empty()) throw domain_error("give either a polynomial or --exp, not both");
        f = exp_series(Rational::parse(exp_lambda), c.t);
        label = "exp(" + exp_lambda + "*x) to degree " + std::to_string(c.t.degree);
    } else {
        if (poly.empty()) throw domain_error("project needs a polynomial or --exp");
        f = read_poly(poly, c);
        label = dsl::print(f);
    }
    Series s = b_projection(f, m, c.t);
    emit_poly_list({{"projection of " + label, s.value}}, "projection", c,
                   io::json{{"map", io::to_json(m)}, {"name", m.name()}, {"truncation", s.truncation.degree}});
    return 0;
}

struct HahnArgs {
    std::string variant = "continuous";
    std::string alpha = "0", beta = "0", N = "5", delta = "1", c1 = "-1";
    std::size_t kmax = 6;
};

hahn::HahnParams hahn_params(const HahnArgs& a) {
    hahn::HahnParams p;
    p.alpha = Rational::parse(a.alpha);
    p.beta = Rational::parse(a.beta);
    p.N = Rational::parse(a.N);
    p.delta = Rational::parse(a.delta);
    p.c1 = Rational::parse(a.c1);
    return p;
}

hahn::Variant hahn_variant(const HahnArgs& a, const Context& c) {
    auto v = hahn::parse_variant(a.variant);
    if (!v) throw domain_error("unknown variant '" + a.variant + "' (three-point, abstract, continuous, q-deformed, q-spectrum)");
    if (hahn::needs_q(*v)) c.need_q(a.variant);
    return *v;
}

int cmd_hahn(const Context& c, const HahnArgs& a) {
    hahn::Variant v = hahn_variant(a, c);
    hahn::HahnParams p = hahn_params(a);
    auto ctx = hahn::needs_q(v) ? c.q : nullptr;
    auto rows = hahn::eigenpolynomials(v, p, ctx, a.kmax, Truncation{std::max(c.t.degree, a.kmax)});
    bool clean = std::all_of(rows.begin(), rows.end(), [](const auto& e) { return e.residual.is_zero(); });
    switch (c.format) {
    case Format::Text:
        std::cout << "# " << hahn::variant_name(v) << ' ' << p.to_string();
        if (ctx) std::cout << " q=" << ctx->q();
        std::cout << '\n';
        for (const auto& e : rows) {
            std::cout << "k=" << e.k << " lambda=" << e.eigenvalue << " residual=" << (e.residual.is_zero() ? "0" : "nonzero")
                      << "\n  h = " << dsl::print(e.monomial) << '\n';
            if (!e.natural.is_monomial_basis()) std::cout << "  h = " << dsl::print(e.natural) << '\n';
        }
        break;
    case Format::Json: std::cout << io::hahn_table_json(v, p, ctx, rows).dump(2) << '\n'; break;
    case Format::Csv: std::cout << io::hahn_table_csv(v, p, ctx, rows); break;
    }
    return clean ? 0 : kExitMath;
}

int cmd_spectrum(const Context& c, const HahnArgs& a) {
    hahn::Variant v = hahn_variant(a, c);
    hahn::HahnParams p = hahn_params(a);
    auto ctx = hahn::needs_q(v) ? c.q : nullptr;
    Truncation t{std::max(c.t.degree, a.kmax)};
    LinOp l = hahn::realize_variant(v, p, ctx, t);
    bool ok = true;
    std::vector<std::pair<Rational, Rational>> rows;
    for (std::size_t k = 0; k <= a.kmax; ++k) {
        Rational closed = hahn::spectrum(v, p, ctx, k);
        Rational diag = l.column(k) ? l.entry(k, k) : Rational(0);
        ok = ok && l.column(k) && closed == diag;
        rows.emplace_back(closed, diag);
    }
    ok = ok && l.is_degree_non_increasing();
    switch (c.format) {
    case Format::Text:
        std::cout << "# " << hahn::variant_name(v) << ' ' << p.to_string();
        if (ctx) std::cout << " q=" << ctx->q();
        std::cout << '\n';
        for (std::size_t k = 0; k < rows.size(); ++k)
            std::cout << "k=" << k << " closed=" << rows[k].first << " diagonal=" << rows[k].second
                      << (rows[k].first == rows[k].second ? "" : "  MISMATCH") << '\n';
        std::cout << (ok ? "triangular, diagonal matches" : "FAILED") << '\n';
        break;
    case Format::Json: {
        io::json arr = io::json::array();
        for (std::size_t k = 0; k < rows.size(); ++k)
            arr.push_back({{"k", k}, {"closed", io::to_json(rows[k].first)}, {"diagonal", io::to_json(rows[k].second)}});
        io::json j{{"variant", hahn::variant_name(v)}, {"params", io::to_json(p)}, {"rows", arr}, {"passed", ok}};
        if (ctx) j["q"] = io::to_json(ctx->q());
        std::cout << j.dump(2) << '\n';
        break;
    }
    case Format::Csv:
        std::cout << "k,closed,diagonal\n";
        for (std::size_t k = 0; k < rows.size(); ++k) std::cout << k << ',' << rows[k].first << ',' << rows[k].second << '\n';
        break;
    }
    return ok ? 0 : kExitMath;
}

void add_hahn_options(CLI::App* sub, HahnArgs& a) {
    sub->add_option("variant", a.variant, "three-point | abstract | continuous | q-deformed | q-spectrum")->capture_default_str();
    sub->add_option("--alpha", a.alpha, "alpha")->capture_default_str();
    sub->add_option("--beta", a.beta, "beta")->capture_default_str();
    sub->add_option("--N", a.N, "N")->capture_default_str();
    sub->add_option("--hahn-delta", a.delta, "lattice step of the operator")->capture_default_str();
    sub->add_option("--c1", a.c1, "leading coefficient c1")->capture_default_str();
    sub->add_option("--kmax", a.kmax, "largest eigenpolynomial degree")->capture_default_str();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"ccrq: exact q- and delta-deformed operator calculus on polynomials"};
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    app.add_option("--q", g.q, "deformation parameter q as p/q");
    app.add_option("--delta", g.delta, "lattice step delta as p/q");
    app.add_option("--degree,-D", g.degree, "truncation degree D")->capture_default_str();
    app.add_option("--format", g.format, "output format")
        ->check(CLI::IsMember({"text", "json", "csv"}))
        ->capture_default_str();
    app.add_flag("--truncate", g.truncate, "drop terms above degree D instead of failing");

    std::string expr, poly, suite, map_name, exp_lambda;
    std::size_t n = 4, samples = 20;
    std::uint64_t seed = 20240601;
    HahnArgs ha;

    auto* s_apply = app.add_subcommand("apply", "apply an operator expression to a polynomial");
    s_apply->add_option("expr", expr, "operator expression")->required();
    s_apply->add_option("poly", poly, "polynomial, e.g. poly(x^3) or x^3")->required();

    auto* s_realize = app.add_subcommand("realize", "matrix of an operator on degrees <= D");
    s_realize->add_option("expr", expr, "operator expression")->required();

    auto* s_verify = app.add_subcommand("verify", "run an identity suite");
    s_verify->add_option("suite", suite, "ccr | qccr | rolle | intertwine | similarity | qcc-delta | composition")->required();
    s_verify->add_option("--samples", samples, "random polynomials per check")->capture_default_str();
    s_verify->add_option("--seed", seed, "random seed")->capture_default_str();

    auto* s_basis = app.add_subcommand("basis", "adapted basis |0>..|n> of a map");
    s_basis->add_option("map", map_name, "identity | phi_q | phi_delta | phi_q_prime | outer.inner")->required();
    s_basis->add_option("--n", n, "last element")->capture_default_str();

    auto* s_project = app.add_subcommand("project", "projection f(b)|0> of a polynomial or exponential onto a map's basis");
    s_project->add_option("map", map_name, "map name")->required();
    s_project->add_option("poly", poly, "polynomial");
    s_project->add_option("--exp", exp_lambda, "project exp(lambda x) truncated at D");

    auto* s_hahn = app.add_subcommand("hahn", "eigenpolynomial table of a Hahn operator");
    add_hahn_options(s_hahn, ha);
    auto* s_spec = app.add_subcommand("spectrum", "diagonal of a realized Hahn operator against its closed form");
    add_hahn_options(s_spec, ha);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : kExitUsage;
    }

    try {
        Context c = resolve(g);
        if (s_apply->parsed()) return cmd_apply(c, expr, poly);
        if (s_realize->parsed()) return cmd_realize(c, expr);
        if (s_verify->parsed()) return cmd_verify(c, suite, samples, seed);
        if (s_basis->parsed()) return cmd_basis(c, map_name, n);
        if (s_project->parsed()) return cmd_project(c, map_name, poly, exp_lambda);
        if (s_hahn->parsed()) return cmd_hahn(c, ha);
        if (s_spec->parsed()) return cmd_spectrum(c, ha);
    } catch (const parse_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const domain_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const unsupported_operation& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const degeneracy_error& e) {
        std::cerr << "error: " << e.what() << " (indices " << e.first() << ", " << e.second() << ")\n";
        return kExitMath;
    } catch (const ccr::error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitMath;
    }
    return kExitUsage;
}
