#pragma once

/**
 * @file proj_bundle.hpp
 * @brief Projective bundles of split bundles and higher Chern classes.
 *
 * On P(E) with E = O(a_1) + ... + O(a_r) over P^n, cohomology is free over
 * the base on 1, ξ, ..., ξ^{r-1} with ξ the class of the tautological
 * quotient.  Writing ξ^r in that basis,
 *
 *     ξ^r = sum_i (-1)^{i+1} c_i(E) h^i ξ^{r-i},
 *
 * reads off the Chern classes as multiples of h^i.
 */

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "rigidchern/chern_first.hpp"

namespace rigidchern {

/// Tautological cocycle on P(E): frames y_j x_i^{a_j} on chart (i, j).
inline LiftedUnitCocycle tautological_cocycle(const ChartedSpace& X, int prec = -1) {
    if (!X.is_bundle()) throw UnsupportedSpace("tautological bundle needs a projective bundle");
    const int n = X.base_dim();
    return monomial_cocycle(
        X,
        [&](int c) {
            const Chart& ch = X.chart(c);
            CoxVector v{};
            v[static_cast<std::size_t>(n + 1 + ch.fiber)] = 1;
            v[static_cast<std::size_t>(ch.base)] = X.twists()[static_cast<std::size_t>(ch.fiber)];
            return v;
        },
        prec);
}

inline TotalCochain xi_cocycle(const ChartedSpace& X) { return c1_cocycle(X, tautological_cocycle(X)); }

using BasisIndex = std::pair<int, int>;  // (a, b) for h^a ∪ ξ^b

/// The classes h^a ∪ ξ^b of total degree 2k with a <= n and b <= r - 1.
inline std::vector<BasisIndex> bundle_basis_indices(const ChartedSpace& X, int k) {
    std::vector<BasisIndex> out;
    for (int b = 0; b < X.rank(); ++b) {
        int a = k - b;
        if (a >= 0 && a <= X.base_dim()) out.emplace_back(a, b);
    }
    return out;
}

inline TotalCochain bundle_basis_cochain(const ChartedSpace& X, const TotalCochain& h, const TotalCochain& xi, BasisIndex ab) {
    return cup(X, cup_power(X, h, ab.first), cup_power(X, xi, ab.second));
}

/// Coefficients of z on {h^a ∪ ξ^b}; z must be closed of even degree.
inline std::map<BasisIndex, PAdicElem> decompose(const ChartedSpace& X, const TotalCochain& z) {
    if (!X.is_bundle()) throw UnsupportedSpace("decompose needs a projective bundle");
    if (z.degree() % 2 != 0) throw InvalidArgument("odd-degree cochains carry no basis classes");
    const auto idx = bundle_basis_indices(X, z.degree() / 2);
    const TotalCochain h = hyperplane_cocycle(X), xi = xi_cocycle(X);
    std::vector<TotalCochain> basis;
    for (auto ab : idx) basis.push_back(bundle_basis_cochain(X, h, xi, ab));
    std::map<BasisIndex, PAdicElem> out;
    if (idx.empty()) {
        if (!solve_coboundary(X, z)) throw NotInSpan("cochain is not exact in a degree without basis classes");
        return out;
    }
    auto lambda = coefficients_modulo_exact(X, z, basis);
    for (std::size_t t = 0; t < idx.size(); ++t) out.emplace(idx[t], lambda[t]);
    return out;
}

struct ChernVector {
    std::string base;
    std::vector<int> twists;
    std::vector<PAdicElem> c;  // c_0 .. c_r as coefficients on h^i

    int precision() const {
        int k = 1 << 30;
        for (const auto& x : c) k = std::min(k, x.prec());
        return k;
    }
};

inline std::string base_name(int n) { return "P" + std::to_string(n); }

/// Chern classes of O(a_1) + ... + O(a_r) over P^n.  Rank 1 goes through
/// the first Chern class on P^n itself.
inline ChernVector chern_classes(int base_n, const std::vector<int>& twists, const PAdicContext& ctx, int window = ChartedSpace::kDefaultWindow) {
    ChernVector out{base_name(base_n), twists, {}};
    const int r = static_cast<int>(twists.size());
    if (r == 1) {
        ChartedSpace B(SpaceDescriptor::projective(base_n, ctx), window);
        PAdicElem c1 = c1_class(B, line_bundle(B, twists[0]));
        out.c = {PAdicElem::from_int(ctx, 1, c1.prec()), c1};
        return out;
    }
    if (r == 3 && base_n != 1) throw UnsupportedSpace("rank 3 is supported over P^1 only");
    ChartedSpace X(SpaceDescriptor::bundle(base_n, twists, ctx), window);
    const TotalCochain xi = xi_cocycle(X);
    auto lambda = decompose(X, cup_power(X, xi, r));
    out.c.push_back(PAdicElem::from_int(ctx, 1, ctx.N));
    for (int i = 1; i <= r; ++i) {
        auto it = lambda.find({i, r - i});
        if (it == lambda.end()) {
            // above the base dimension: h^i = 0
            out.c.push_back(PAdicElem::from_int(ctx, 0, ctx.N));
            continue;
        }
        out.c.push_back(i % 2 ? it->second : -it->second);
    }
    return out;
}

struct WhitneyReport {
    ChernVector sum;
    ChernVector first;
    ChernVector second;
    std::vector<PAdicElem> product;  // c(E') c(E'') truncated at the base dimension
    bool pass = false;
};

/// c(E' + E'') against c(E') c(E'') for split E', E''.
inline WhitneyReport whitney_check(int base_n, const std::vector<int>& t1, const std::vector<int>& t2, const PAdicContext& ctx,
                                   int window = ChartedSpace::kDefaultWindow) {
    std::vector<int> all = t1;
    all.insert(all.end(), t2.begin(), t2.end());
    WhitneyReport rep{chern_classes(base_n, all, ctx, window), chern_classes(base_n, t1, ctx, window), chern_classes(base_n, t2, ctx, window), {}, true};
    const std::size_t len = rep.sum.c.size();
    for (std::size_t i = 0; i < len; ++i) {
        PAdicElem acc = PAdicElem::from_int(ctx, 0, ctx.N);
        if (static_cast<int>(i) <= base_n)
            for (std::size_t j = 0; j <= i; ++j)
                if (j < rep.first.c.size() && i - j < rep.second.c.size()) acc = acc + rep.first.c[j] * rep.second.c[i - j];
        rep.product.push_back(acc);
        rep.pass = rep.pass && rep.sum.c[i].equals(acc);
    }
    return rep;
}

/// Ranks of P(E) predicted from the base: sum over i < r of base ranks shifted by 2i.
inline std::vector<int> predicted_bundle_ranks(const std::vector<int>& base_ranks, int r) {
    const int top = static_cast<int>(base_ranks.size()) - 1 + 2 * (r - 1);
    std::vector<int> out(static_cast<std::size_t>(top + 1), 0);
    for (int i = 0; i < r; ++i)
        for (std::size_t d = 0; d < base_ranks.size(); ++d) out[d + 2 * static_cast<std::size_t>(i)] += base_ranks[d];
    return out;
}

inline std::vector<int> projective_space_ranks(int n) {
    std::vector<int> out(static_cast<std::size_t>(2 * n + 1), 0);
    for (int i = 0; i <= n; ++i) out[2 * static_cast<std::size_t>(i)] = 1;
    return out;
}

struct RankReport {
    RankTable at_window;
    RankTable at_window_plus2;
    std::vector<int> predicted;
    bool stable = false;
    bool matches_prediction = false;
    bool matches_rational = false;
};

/// Ranks at windows D and D + 2 with the prediction for the space.  Throws
/// WindowTooSmall when the two windows disagree.
inline RankReport rank_report(const ChartedSpace& X, int window) {
    RankReport rep{cohomology_ranks(X, window), cohomology_ranks(X, window + 2), {}, false, false, false};
    rep.stable = rep.at_window.free_ranks == rep.at_window_plus2.free_ranks;
    if (!rep.stable) throw WindowTooSmall("ranks change between windows " + std::to_string(window) + " and " + std::to_string(window + 2));
    rep.predicted = X.is_bundle() ? predicted_bundle_ranks(projective_space_ranks(X.base_dim()), X.rank()) : projective_space_ranks(X.dim());
    rep.matches_prediction = rep.at_window.free_ranks == rep.predicted;
    rep.matches_rational = rep.at_window.free_ranks == rep.at_window.rational_ranks;
    return rep;
}

} // namespace rigidchern
