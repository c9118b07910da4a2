#pragma once

/**
 * @file json_io.hpp
 * @brief JSON encodings for elements, spaces, cochains and unit cocycles.
 *
 * Residues are decimal strings so that values up to p^N survive readers
 * limited to doubles.  Sections are lists of [exponent-vector, residue, prec].
 */

#include <string>

#include <json.hpp>

#include "rigidchern/chern_first.hpp"

namespace rigidchern {

using json = nlohmann::json;

inline json to_json(const PAdicElem& x) { return {{"residue", std::to_string(x.residue())}, {"prec", x.prec()}}; }

inline u64 parse_u64(const json& j) {
    if (j.is_number_unsigned()) return j.get<u64>();
    if (j.is_number_integer()) {
        auto v = j.get<i64>();
        if (v < 0) throw InvalidArgument("negative residue");
        return static_cast<u64>(v);
    }
    if (!j.is_string()) throw InvalidArgument("residue must be a decimal string");
    const auto s = j.get<std::string>();
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) throw InvalidArgument("malformed residue '" + s + "'");
    return std::stoull(s);
}

inline PAdicElem padic_from_json(const PAdicContext& ctx, const json& j) {
    int k = j.at("prec").get<int>();
    if (k < 0 || k > ctx.N) throw InvalidArgument("precision outside [0, N]");
    u64 r = parse_u64(j.at("residue"));
    if (r >= ctx.modulus(k)) throw InvalidArgument("residue exceeds p^prec");
    return PAdicElem(ctx.p, r, k);
}

/// Signed class value as ["<symmetric lift>", prec].
inline json signed_value(const PAdicElem& x) { return json::array({std::to_string(x.signed_lift()), x.prec()}); }

inline json to_json(const SpaceDescriptor& d) {
    if (d.kind == SpaceKind::ProjectiveSpace) return {{"kind", "Pn"}, {"n", d.n}};
    return {{"kind", "ProjBundle"}, {"base_n", d.n}, {"twists", d.twists}};
}

inline SpaceDescriptor space_from_json(const json& j, const PAdicContext& ctx) {
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "Pn") return SpaceDescriptor::projective(j.at("n").get<int>(), ctx);
    if (kind == "ProjBundle") return SpaceDescriptor::bundle(j.at("base_n").get<int>(), j.at("twists").get<std::vector<int>>(), ctx);
    throw InvalidArgument("unknown space kind '" + kind + "'");
}

inline json exponent_json(const Exponent& e, int nvars) {
    json a = json::array();
    for (int i = 0; i < nvars; ++i) a.push_back(e[i]);
    return a;
}

inline Exponent exponent_from_json(const json& j, int nvars) {
    if (!j.is_array() || static_cast<int>(j.size()) != nvars) throw InvalidArgument("exponent vector of the wrong length");
    Exponent e;
    for (int i = 0; i < nvars; ++i) e[i] = j[static_cast<std::size_t>(i)].get<int>();
    return e;
}

inline json to_json(const LaurentSection& s) {
    json out = json::array();
    for (const auto& t : s.terms()) out.push_back(json::array({exponent_json(t.exp, s.nvars()), std::to_string(t.coeff), s.prec()}));
    return out;
}

/// Sections carry one precision; the minimum over the listed terms is used
/// (`prec` when the list is empty).
inline LaurentSection section_from_json(const ChartedSpace& X, int chart, const json& j, int prec) {
    LaurentSection s(chart, X.dim(), X.p(), prec);
    for (const auto& t : j) {
        if (!t.is_array() || t.size() != 3) throw InvalidArgument("section term must be [exponent, residue, prec]");
        PAdicElem c = padic_from_json(X.ctx(), {{"residue", t[1]}, {"prec", t[2]}});
        s += LaurentSection::monomial(chart, X.dim(), exponent_from_json(t[0], X.dim()), c);
    }
    return s;
}

inline json to_json(const DiffForm& w) {
    json comps = json::array();
    for (const auto& [J, f] : w.components()) comps.push_back({{"J", J}, {"coeff", to_json(f)}});
    return {{"chart", w.chart()}, {"degree", w.degree()}, {"prec", w.prec()}, {"components", comps}};
}

inline json to_json(const ChartedSpace& X, const TotalCochain& z) {
    json comps = json::array();
    for (const auto& [p, c] : z.components()) {
        json values = json::array();
        for (std::size_t i = 0; i < c.values.size(); ++i) {
            if (c.values[i].is_zero()) continue;
            values.push_back({{"simplex", X.simplices(p)[i]}, {"form", to_json(c.values[i])}});
        }
        comps.push_back({{"p", p}, {"q", c.form_degree}, {"values", values}});
    }
    return {{"space", to_json(X.descriptor())}, {"degree", z.degree()}, {"prec", z.prec()}, {"components", comps}};
}

inline TotalCochain cochain_from_json(const ChartedSpace& X, const json& j) {
    const int k = j.at("prec").get<int>();
    TotalCochain z(j.at("degree").get<int>(), X.p(), k);
    for (const auto& comp : j.at("components")) {
        const int p = comp.at("p").get<int>();
        z.component(X, p);
        for (const auto& v : comp.at("values")) {
            Simplex S = v.at("simplex").get<Simplex>();
            if (!std::is_sorted(S.begin(), S.end()) || static_cast<int>(S.size()) != p + 1) throw InvalidArgument("simplex must be sorted with p+1 charts");
            const json& f = v.at("form");
            if (f.at("chart").get<int>() != S[0]) throw InvalidArgument("form must live on the simplex's first chart");
            const int fk = f.at("prec").get<int>();
            DiffForm w(S[0], X.dim(), z.degree() - p, X.p(), fk);
            for (const auto& c : f.at("components")) w.add(c.at("J").get<unsigned>(), section_from_json(X, S[0], c.at("coeff"), fk));
            z.set_form(X, p, S, w);
        }
    }
    return z;
}

inline json to_json(const ChartedSpace& X, const LiftedUnitCocycle& U) {
    json edges = json::array();
    const auto& S1 = X.simplices(1);
    for (std::size_t e = 0; e < S1.size(); ++e) {
        const UnitSection& u = U.edges()[e];
        edges.push_back({{"edge", S1[e]},
                         {"chart", u.chart},
                         {"monomial", exponent_json(u.monomial, X.dim())},
                         {"scalar", to_json(u.scalar)},
                         {"one_unit", to_json(u.one_unit)}});
    }
    return {{"space", to_json(X.descriptor())}, {"edges", edges}};
}

inline LiftedUnitCocycle cocycle_from_json(const ChartedSpace& X, const json& j) {
    const auto& S1 = X.simplices(1);
    std::vector<UnitSection> edges(S1.size());
    std::vector<bool> seen(S1.size(), false);
    for (const auto& e : j.at("edges")) {
        Simplex S = e.at("edge").get<Simplex>();
        if (S.size() != 2 || S[0] >= S[1] || S[1] >= X.num_charts()) throw InvalidArgument("edge must be [i, j] with i < j");
        const std::size_t idx = static_cast<std::size_t>(X.simplex_index(S));
        const int chart = e.at("chart").get<int>();
        if (chart != S[0]) throw InvalidArgument("edge lift must live on chart i");
        UnitSection u;
        u.chart = chart;
        u.monomial = exponent_from_json(e.at("monomial"), X.dim());
        u.scalar = padic_from_json(X.ctx(), e.at("scalar"));
        const json& poly = e.at("one_unit");
        int k = X.N();
        for (const auto& t : poly) k = std::min(k, t.at(2).get<int>());
        u.one_unit = section_from_json(X, chart, poly, k);
        edges[idx] = u;
        seen[idx] = true;
    }
    for (bool s : seen)
        if (!s) throw InvalidArgument("every edge needs a lift");
    return LiftedUnitCocycle(X, std::move(edges));
}

} // namespace rigidchern
