#pragma once

/**
 * @file mpd.hpp
 * @brief Level-m divided powers in the principal-ideal model.
 *
 * For k = p^m q + r with 0 <= r < p^m, the level-m divided power satisfies
 * x^k = q! x^{{k}_m}.  A symbol x^{{k}_m} is never expanded; at a generator
 * of valuation v it is assigned the valuation k v - v_p(q!).
 *
 * ψ_m(1 + x) = log((1 + x)^{p^m}) lands in p^{m+1} Z_p, so dividing by p^m
 * is exact and costs m digits of precision.
 */

#include <string>
#include <vector>

#include "rigidchern/chern_first.hpp"

namespace rigidchern {

inline constexpr int kMaxLevel = 6;

struct MpdContext {
    PAdicContext ctx;
    int m = 0;
    int v = 1;  // valuation of the principal generator

    void validate() const {
        ctx.validate();
        if (m < 0 || m > kMaxLevel) throw InvalidArgument("level m must lie in [0, " + std::to_string(kMaxLevel) + "]");
        if (v < 1) throw InvalidArgument("generator valuation must be >= 1");
    }
    u64 pm() const { return detail::ipow(ctx.p, m); }
};

/// c · x^{{k}_m}
struct MpdTerm {
    PAdicElem coeff;
    u64 k = 0;
    int m = 0;
};

struct MpdReduction {
    u64 q = 0;
    u64 r = 0;
    PAdicElem q_factorial;  // q! at precision N
    u64 factorial_valuation = 0;
};

/// Unit part of n! modulo p^k (all factors of p removed).
inline u64 factorial_unit_part(u64 p, u64 n, int k) {
    const u64 mk = detail::ipow(p, k);
    u64 acc = 1 % mk;
    for (u64 i = 2; i <= n; ++i) {
        u64 t = i;
        while (t % p == 0) t /= p;
        acc = detail::mulmod(acc, t % mk, mk);
    }
    return acc;
}

inline MpdReduction mpd_reduce(const MpdContext& mc, u64 k) {
    mc.validate();
    const u64 pm = mc.pm();
    MpdReduction out;
    out.q = k / pm;
    out.r = k % pm;
    out.factorial_valuation = vp_factorial(mc.ctx.p, out.q);
    const int N = mc.ctx.N;
    if (out.factorial_valuation >= static_cast<u64>(N)) {
        out.q_factorial = PAdicElem(mc.ctx.p, 0, N);
    } else {
        u64 unit = factorial_unit_part(mc.ctx.p, out.q, N);
        u64 res = detail::mulmod(unit, detail::ipow(mc.ctx.p, static_cast<int>(out.factorial_valuation)), mc.ctx.modulus(N));
        out.q_factorial = PAdicElem(mc.ctx.p, res, N);
    }
    return out;
}

/// Valuation assigned to x^{{k}_m} at a generator of valuation v.
inline i64 assigned_valuation(const MpdContext& mc, u64 k) {
    return static_cast<i64>(k) * mc.v - static_cast<i64>(vp_factorial(mc.ctx.p, k / mc.pm()));
}

/// Value of x^{{k}_m} at x = p^v: p^{k v - v_p(q!)} times the inverse unit part of q!.
inline PAdicElem mpd_value(const MpdContext& mc, u64 k) {
    const int N = mc.ctx.N;
    i64 val = assigned_valuation(mc, k);
    if (val >= N) return PAdicElem(mc.ctx.p, 0, N);
    const u64 mN = mc.ctx.modulus(N);
    u64 unit_inv = detail::inv_mod(factorial_unit_part(mc.ctx.p, k / mc.pm(), N), mN);
    return PAdicElem(mc.ctx.p, detail::mulmod(unit_inv, detail::ipow(mc.ctx.p, static_cast<int>(val)), mN), N);
}

/// Evaluates c · x^{{k}_m} at x = p^v.
inline PAdicElem evaluate(const MpdContext& mc, const MpdTerm& t) {
    if (t.m != mc.m) throw InvalidArgument("term level differs from the context level");
    return t.coeff * mpd_value(mc, t.k);
}

/// ψ_m(u) = log(u^{p^m}) for a 1-unit u.
inline PAdicElem psi_m(const MpdContext& mc, const PAdicElem& u) {
    mc.validate();
    if (u.prec() > 0 && (u.residue() % mc.ctx.p) != 1 % mc.ctx.p) throw ValuationError("psi_m needs a 1-unit");
    return log_one_unit(mc.ctx, u.pow(mc.pm()));
}

/// ψ_m on a 1-unit section; the p^m-th power uses the truncated binomial series.
inline LaurentSection psi_m(const MpdContext& mc, const LaurentSection& u) {
    mc.validate();
    return u.binomial_power(mc.ctx, mc.pm()).log_one_unit();
}

/// Level-m cocycle with edge components dlog u_ij and triangle components
/// -(1/p^m) ψ_m(u_ij u_ik^{-1} u_jk).
inline TotalCochain compatible_lift_cocycle(const ChartedSpace& X, const LiftedUnitCocycle& U, int m) {
    MpdContext mc{X.ctx(), m, 1};
    mc.validate();
    const int k = std::min(X.N(), U.prec());
    if (k - m <= 0) throw PrecisionExhausted("level " + std::to_string(m) + " consumes the whole precision budget");
    TotalCochain z(2, X.p(), k - m);
    const auto& S1 = X.simplices(1);
    for (std::size_t e = 0; e < S1.size(); ++e) {
        DiffForm w = dlog(X, U.edges()[e]);
        if (!w.is_zero()) z.set_form(X, 1, S1[e], w.with_prec(k - m));
    }
    if (X.max_cech_degree() >= 2)
        for (const auto& T : X.simplices(2)) {
            LaurentSection psi = psi_m(mc, U.triple_defect(X, T));
            if (psi.is_zero()) continue;
            z.set_form(X, 2, T, DiffForm::function(-psi.divide_by_p_power(m)));
        }
    return z;
}

struct TriangleCheck {
    Simplex triangle;
    int valuation_low = 0;   // valuation of ψ_m on the triangle
    int valuation_high = 0;  // valuation of ψ_{m'}
    bool pass = false;
};

struct RescaleReport {
    int m = 0;
    int m_prime = 0;
    u64 ratio = 1;
    int precision = 0;
    std::vector<TriangleCheck> triangles;
    bool pass = true;
};

/// ψ_{m'}(t) = p^{m'-m} ψ_m(t) on every triangle defect t.
inline RescaleReport level_rescale_check(const ChartedSpace& X, const LiftedUnitCocycle& U, int m, int m_prime) {
    if (!(0 <= m && m < m_prime && m_prime <= kMaxLevel)) throw InvalidArgument("levels must satisfy 0 <= m < m' <= 6");
    MpdContext lo{X.ctx(), m, 1}, hi{X.ctx(), m_prime, 1};
    RescaleReport rep{m, m_prime, detail::ipow(X.p(), m_prime - m), std::min(X.N(), U.prec()), {}, true};
    if (X.max_cech_degree() < 2) return rep;
    for (const auto& T : X.simplices(2)) {
        LaurentSection t = U.triple_defect(X, T);
        LaurentSection a = psi_m(lo, t), b = psi_m(hi, t);
        TriangleCheck c{T, a.valuation(), b.valuation(), b.equals(a.scaled(static_cast<i64>(rep.ratio)))};
        rep.precision = std::min({rep.precision, a.prec(), b.prec()});
        rep.pass = rep.pass && c.pass;
        rep.triangles.push_back(std::move(c));
    }
    return rep;
}

} // namespace rigidchern
