#pragma once

/**
 * @file random.hpp
 * @brief Seeded generators for lift perturbations, gauges and cochains.
 */

#include <random>

#include "rigidchern/chern_first.hpp"

namespace rigidchern {

using Rng = std::mt19937_64;

struct PerturbOptions {
    int degree = 3;       // bound on sum |exponent| of each term
    int terms = 2;        // monomials per random polynomial
    u64 coeff_bound = 0;  // coefficients drawn below this; 0 means p^2
};

namespace detail {

inline i64 uniform(Rng& rng, i64 lo, i64 hi) { return std::uniform_int_distribution<i64>(lo, hi)(rng); }

/// Exponent regular on U_S in chart c coordinates (negatives only where inverted).
inline Exponent random_regular_exponent(const ChartedSpace& X, int c, const Simplex& S, int degree, Rng& rng) {
    const unsigned inv = X.inverted_mask(S);
    const Chart& ch = X.chart(c);
    Exponent a;
    int budget = degree;
    std::vector<int> order(ch.coords.size());
    for (std::size_t k = 0; k < order.size(); ++k) order[k] = static_cast<int>(k);
    std::shuffle(order.begin(), order.end(), rng);
    for (int k : order) {
        bool inverted = inv >> ch.coords[static_cast<std::size_t>(k)] & 1u;
        int e = static_cast<int>(uniform(rng, inverted ? -budget : 0, budget));
        a[k] = e;
        budget -= std::abs(e);
    }
    return a;
}

} // namespace detail

/// g with terms regular on U_S, coefficients below the bound.
inline LaurentSection random_regular_poly(const ChartedSpace& X, int c, const Simplex& S, Rng& rng, const PerturbOptions& opt, int prec = -1) {
    const int k = prec < 0 ? X.N() : prec;
    const u64 bound = opt.coeff_bound ? opt.coeff_bound : X.p() * X.p();
    LaurentSection g(c, X.dim(), X.p(), k);
    for (int t = 0; t < opt.terms; ++t) {
        Exponent a = detail::random_regular_exponent(X, c, S, opt.degree, rng);
        u64 coef = static_cast<u64>(detail::uniform(rng, 0, static_cast<i64>(bound) - 1));
        g += LaurentSection::monomial(c, X.dim(), a, PAdicElem(X.p(), coef % detail::ipow(X.p(), k), k));
    }
    return g;
}

/// 1 + p·g with g random and regular on U_S.
inline LaurentSection random_one_unit(const ChartedSpace& X, int c, const Simplex& S, Rng& rng, const PerturbOptions& opt, int prec = -1) {
    const int k = prec < 0 ? X.N() : prec;
    LaurentSection one = LaurentSection::constant(c, X.dim(), PAdicElem(X.p(), 1, k));
    return one + random_regular_poly(X, c, S, rng, opt, k).scaled(static_cast<i64>(X.p()));
}

/// Multiplies every edge lift by an independent random 1-unit.
inline LiftedUnitCocycle perturb_lifts(const ChartedSpace& X, const LiftedUnitCocycle& U, Rng& rng, const PerturbOptions& opt = {}) {
    std::vector<UnitSection> edges;
    const auto& S1 = X.simplices(1);
    for (std::size_t e = 0; e < S1.size(); ++e) {
        UnitSection u = U.edges()[e];
        u.one_unit = u.one_unit * random_one_unit(X, S1[e][0], S1[e], rng, opt, u.prec());
        edges.push_back(u);
    }
    return LiftedUnitCocycle(X, std::move(edges));
}

/// Per-edge 1-unit corrections 1 + p·r_ij, for use with apply_gauge.
inline std::vector<LaurentSection> random_corrections(const ChartedSpace& X, Rng& rng, const PerturbOptions& opt = {}) {
    std::vector<LaurentSection> out;
    for (const auto& S : X.simplices(1)) out.push_back(random_one_unit(X, S[0], S, rng, opt));
    return out;
}

/// θ_i = (random p-adic unit) · (1 + p·g_i), g_i regular on U_i.
inline GaugeCochain random_gauge(const ChartedSpace& X, Rng& rng, const PerturbOptions& opt = {}) {
    GaugeCochain g;
    const u64 m = detail::ipow(X.p(), X.N());
    for (int c = 0; c < X.num_charts(); ++c) {
        UnitSection t = UnitSection::one(X, c);
        u64 s = 0;
        while (s % X.p() == 0) s = static_cast<u64>(detail::uniform(rng, 1, static_cast<i64>(m - 1)));
        t.scalar = PAdicElem(X.p(), s, X.N());
        t.one_unit = random_one_unit(X, c, {c}, rng, opt);
        g.theta.push_back(t);
    }
    return g;
}

/// Random total cochain of the given degree with every term regular.
inline TotalCochain random_cochain(const ChartedSpace& X, int degree, Rng& rng, const PerturbOptions& opt = {}) {
    TotalCochain z(degree, X.p(), X.N());
    const u64 m = detail::ipow(X.p(), X.N());
    for (int p = std::max(0, degree - X.dim()); p <= std::min(degree, X.max_cech_degree()); ++p) {
        const int q = degree - p;
        for (const auto& S : X.simplices(p)) {
            DiffForm w(S[0], X.dim(), q, X.p(), X.N());
            for (unsigned J = 0; J < (1u << X.dim()); ++J) {
                if (popcount(J) != q) continue;
                for (int t = 0; t < opt.terms; ++t) {
                    Exponent a = detail::random_regular_exponent(X, S[0], S, opt.degree, rng);
                    if (!X.regular_term(S[0], S, a, J)) continue;
                    u64 c = static_cast<u64>(detail::uniform(rng, 0, static_cast<i64>(m - 1)));
                    w.add(J, LaurentSection::monomial(S[0], X.dim(), a, PAdicElem(X.p(), c, X.N())));
                }
            }
            if (!w.is_zero()) z.set_form(X, p, S, w);
        }
    }
    return z;
}

/// Δw for a random regular w of degree - 1.
inline TotalCochain random_coboundary(const ChartedSpace& X, int degree, Rng& rng, const PerturbOptions& opt = {}) {
    return total_diff(X, random_cochain(X, degree - 1, rng, opt));
}

} // namespace rigidchern
