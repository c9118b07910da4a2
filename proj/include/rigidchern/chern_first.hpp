#pragma once

/**
 * @file chern_first.hpp
 * @brief First Chern class of a line bundle as a Čech–de Rham cocycle.
 *
 * A line bundle is given by transition units u_ij = s_j / s_i on the chart
 * overlaps, each lifted to a unit of the chart ring with p-adic
 * coefficients.  Lifts need only satisfy the cocycle condition mod p; the
 * defect on triangles is a 1-unit and its logarithm fills the C^2(O)
 * component:
 *
 *     c1(u) = ( 0,  dlog u_ij,  -log(u_ij u_ik^{-1} u_jk) ).
 */

#include <functional>
#include <vector>

#include "rigidchern/cech.hpp"

namespace rigidchern {

/// Lifted transition units, one per edge i < j, each on chart i.  The lift
/// for (j, i) is never stored; it is the inverse of the (i, j) lift.
class LiftedUnitCocycle {
public:
    LiftedUnitCocycle() = default;

    /// Validates regularity on every overlap and the cocycle condition mod p.
    LiftedUnitCocycle(const ChartedSpace& X, std::vector<UnitSection> edges) : edges_(std::move(edges)) {
        const auto& S1 = X.simplices(1);
        if (edges_.size() != S1.size()) throw InvalidArgument("one lift per edge expected");
        for (std::size_t e = 0; e < S1.size(); ++e) {
            const UnitSection& u = edges_[e];
            const Simplex& S = S1[e];
            if (u.chart != S[0]) throw InvalidArgument("edge lift must live on the edge's first chart");
            u.validate();
            unsigned inv = X.inverted_mask(S);
            const Chart& ch = X.chart(S[0]);
            for (std::size_t k = 0; k < ch.coords.size(); ++k)
                if (u.monomial[static_cast<int>(k)] != 0 && !(inv >> ch.coords[k] & 1u))
                    throw NotAUnit("monomial factor is not invertible on the overlap");
            for (const auto& t : u.one_unit.terms())
                if (!X.regular_term(S[0], S, t.exp, 0)) throw NotAUnit("1-unit factor is not regular on the overlap");
        }
        for (const auto& T : X.simplices(2)) triple_defect(X, T);
    }

    const std::vector<UnitSection>& edges() const { return edges_; }
    const UnitSection& lift(const ChartedSpace& X, int i, int j) const { return edges_.at(static_cast<std::size_t>(X.simplex_index({i, j}))); }
    int prec() const {
        int k = 1 << 30;
        for (const auto& u : edges_) k = std::min(k, u.prec());
        return k;
    }

    /// u_ij u_ik^{-1} u_jk on chart i, as a 1-unit section.  Throws
    /// ValuationError when the lifts fail the cocycle condition mod p.
    LaurentSection triple_defect(const ChartedSpace& X, const Simplex& T) const {
        const int i = T[0], j = T[1], k = T[2];
        UnitSection t = lift(X, i, j) * lift(X, i, k).inverse() * lift(X, j, k).transitioned(X, i);
        if (!t.monomial.is_zero()) throw ValuationError("triangle defect has a monomial factor");
        LaurentSection s = t.one_unit.scaled(t.scalar);
        if (!s.is_one_unit()) throw ValuationError("triangle defect is not a 1-unit");
        return s;
    }

private:
    std::vector<UnitSection> edges_;
};

/// Cocycle u_ij = s_j / s_i from monomial frames given by Cox exponent vectors.
inline LiftedUnitCocycle monomial_cocycle(const ChartedSpace& X, const std::function<CoxVector(int)>& frame, int prec = -1) {
    std::vector<UnitSection> edges;
    for (const auto& S : X.simplices(1)) {
        CoxVector a = frame(S[0]), b = frame(S[1]), diff{};
        for (std::size_t k = 0; k < diff.size(); ++k) diff[k] = b[k] - a[k];
        if (!X.is_character(diff)) throw InvalidArgument("frames of different degree");
        edges.push_back(UnitSection::monomial_unit(X, S[0], X.from_cox(S[0], diff), prec));
    }
    return LiftedUnitCocycle(X, std::move(edges));
}

/// O(d) on P^n, frames x_i^d; on a projective bundle the pullback of O(d)
/// from the base.
inline LiftedUnitCocycle line_bundle(const ChartedSpace& X, int d, int prec = -1) {
    return monomial_cocycle(
        X,
        [&](int c) {
            CoxVector v{};
            v[static_cast<std::size_t>(X.chart(c).base)] = d;
            return v;
        },
        prec);
}

inline LiftedUnitCocycle trivial_cocycle(const ChartedSpace& X, int prec = -1) { return line_bundle(X, 0, prec); }

inline LiftedUnitCocycle product(const ChartedSpace& X, const LiftedUnitCocycle& U, const LiftedUnitCocycle& V) {
    std::vector<UnitSection> edges;
    for (std::size_t e = 0; e < U.edges().size(); ++e) edges.push_back(U.edges()[e] * V.edges().at(e));
    return LiftedUnitCocycle(X, std::move(edges));
}

/// Edgewise e-th power of the lifts.
inline LiftedUnitCocycle power(const ChartedSpace& X, const LiftedUnitCocycle& U, u64 e) {
    std::vector<UnitSection> edges;
    for (const auto& u : U.edges()) edges.push_back(u.pow(X.ctx(), e));
    return LiftedUnitCocycle(X, std::move(edges));
}

inline TotalCochain c1_cocycle(const ChartedSpace& X, const LiftedUnitCocycle& U) {
    TotalCochain z(2, X.p(), std::min(X.N(), U.prec()));
    const auto& S1 = X.simplices(1);
    for (std::size_t e = 0; e < S1.size(); ++e) {
        DiffForm w = dlog(X, U.edges()[e]);
        if (!w.is_zero()) z.set_form(X, 1, S1[e], w);
    }
    if (X.max_cech_degree() >= 2)
        for (const auto& T : X.simplices(2)) {
            LaurentSection lg = U.triple_defect(X, T).log_one_unit();
            if (!lg.is_zero()) z.set_form(X, 2, T, DiffForm::function(-lg));
        }
    return z;
}

/// Gauge change θ_i on U_i: a constant unit times a 1-unit regular on U_i.
struct GaugeCochain {
    std::vector<UnitSection> theta;  // one per chart

    static GaugeCochain identity(const ChartedSpace& X, int prec = -1) {
        GaugeCochain g;
        for (int c = 0; c < X.num_charts(); ++c) g.theta.push_back(UnitSection::one(X, c, prec));
        return g;
    }
};

/// u'_ij = u_ij θ_j / θ_i, optionally times per-edge 1-unit corrections.
inline LiftedUnitCocycle apply_gauge(const ChartedSpace& X, const LiftedUnitCocycle& U, const GaugeCochain& g,
                                     const std::vector<LaurentSection>& corrections = {}) {
    std::vector<UnitSection> edges;
    const auto& S1 = X.simplices(1);
    for (std::size_t e = 0; e < S1.size(); ++e) {
        const int i = S1[e][0], j = S1[e][1];
        UnitSection u = U.edges()[e] * g.theta.at(static_cast<std::size_t>(j)).transitioned(X, i) * g.theta.at(static_cast<std::size_t>(i)).inverse();
        if (!corrections.empty()) {
            const LaurentSection& r = corrections.at(e);
            if (!r.is_zero()) u.one_unit = u.one_unit * r;
        }
        edges.push_back(u);
    }
    return LiftedUnitCocycle(X, std::move(edges));
}

/// ζ with c1(U') - c1(U) = Δζ when U' reduces mod p to U·δθ:
/// ζ_i = dlog θ_i and ζ_ij = -log(1 + α_ij), 1 + α_ij = θ_i u'_ij / (θ_j u_ij).
inline TotalCochain zeta_witness(const ChartedSpace& X, const LiftedUnitCocycle& U, const GaugeCochain& g, const LiftedUnitCocycle& U2) {
    int k = std::min({X.N(), U.prec(), U2.prec()});
    for (const auto& t : g.theta) k = std::min(k, t.prec());
    TotalCochain zeta(1, X.p(), k);
    for (const auto& S : X.simplices(0)) {
        DiffForm w = dlog(X, g.theta.at(static_cast<std::size_t>(S[0])));
        if (!w.is_zero()) zeta.set_form(X, 0, S, w);
    }
    const auto& S1 = X.simplices(1);
    for (std::size_t e = 0; e < S1.size(); ++e) {
        const int i = S1[e][0], j = S1[e][1];
        UnitSection a = g.theta.at(static_cast<std::size_t>(i)) * U2.edges()[e] *
                        (g.theta.at(static_cast<std::size_t>(j)).transitioned(X, i) * U.edges()[e]).inverse();
        if (!a.monomial.is_zero()) throw GaugeMismatch("gauge relation fails on the monomial part");
        LaurentSection s = a.one_unit.scaled(a.scalar);
        if (!s.is_one_unit()) throw GaugeMismatch("U' does not reduce to U·δθ mod p");
        LaurentSection lg = s.log_one_unit();
        if (!lg.is_zero()) zeta.set_form(X, 1, S1[e], DiffForm::function(-lg));
    }
    return zeta;
}

/// Hyperplane class h = c1(O(1)) (pulled back from the base on a bundle).
inline TotalCochain hyperplane_cocycle(const ChartedSpace& X) { return c1_cocycle(X, line_bundle(X, 1)); }

/// k-fold left-nested cup power; z^0 is the unit cochain.
inline TotalCochain cup_power(const ChartedSpace& X, const TotalCochain& z, int k) {
    TotalCochain out = unit_cochain(X, z.prec());
    for (int i = 0; i < k; ++i) out = cup(X, out, z);
    return out;
}

inline TotalCochain hyperplane_power(const ChartedSpace& X, int k) { return cup_power(X, hyperplane_cocycle(X), k); }

/// Coefficient of the class of z on h^k (deg z = 2k) on P^n.
inline PAdicElem class_coeff(const ChartedSpace& X, const TotalCochain& z) {
    if (X.is_bundle()) throw UnsupportedSpace("use the projective-bundle decomposition on bundles");
    if (z.degree() % 2 != 0 || z.degree() / 2 > X.dim()) throw InvalidArgument("degree carries no h-power class");
    return coefficients_modulo_exact(X, z, {hyperplane_power(X, z.degree() / 2)}).at(0);
}

inline PAdicElem c1_class(const ChartedSpace& X, const LiftedUnitCocycle& U) { return class_coeff(X, c1_cocycle(X, U)); }

struct FrobeniusReport {
    PAdicElem class_u;
    PAdicElem class_up;
    bool pass = false;
    int precision = 0;
};

/// class(u^p) against p·class(u).
inline FrobeniusReport frobenius_check(const ChartedSpace& X, const LiftedUnitCocycle& U) {
    FrobeniusReport r;
    r.class_u = c1_class(X, U);
    r.class_up = c1_class(X, power(X, U, X.p()));
    PAdicElem expect = r.class_u * PAdicElem::from_int(X.ctx(), static_cast<i64>(X.p()), r.class_u.prec());
    r.pass = r.class_up.equals(expect);
    r.precision = std::min(r.class_up.prec(), expect.prec());
    return r;
}

} // namespace rigidchern
