#pragma once

/**
 * @file cech.hpp
 * @brief Čech–de Rham bicomplex of a charted space.
 *
 * A p-cochain of q-forms assigns to every sorted p-simplex S of the nerve a
 * q-form written in the coordinates of chart S[0].  The total differential
 * on C^p(Ω^q) is Δ = δ + (-1)^p d.
 *
 * Both δ and d preserve the torus weight of a monomial (its Cox exponent
 * vector), so the total complex is a direct sum of finite complexes K_w, one
 * per weight.  Coboundary solving and rank computation run weight by weight
 * over Z/p^k with Howell forms.
 */

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <tuple>
#include <vector>

#include "rigidchern/charts.hpp"
#include "rigidchern/errors.hpp"
#include "rigidchern/zpn_linalg.hpp"

namespace rigidchern {

struct Cochain {
    int cech_degree = 0;
    int form_degree = 0;
    std::vector<DiffForm> values;  // aligned with simplices(cech_degree)

    static Cochain zero(const ChartedSpace& X, int p, int q, int prec) {
        Cochain c{p, q, {}};
        for (const auto& S : X.simplices(p)) c.values.emplace_back(S[0], X.dim(), q, X.p(), prec);
        return c;
    }

    DiffForm& at(const ChartedSpace& X, const Simplex& S) { return values.at(static_cast<std::size_t>(X.simplex_index(S))); }
    const DiffForm& at(const ChartedSpace& X, const Simplex& S) const { return values.at(static_cast<std::size_t>(X.simplex_index(S))); }

    bool is_zero() const {
        return std::all_of(values.begin(), values.end(), [](const DiffForm& w) { return w.is_zero(); });
    }
    int prec() const {
        int k = 1 << 30;
        for (const auto& w : values) k = std::min(k, w.prec());
        return k;
    }
};

/// Element of the total complex: components C^p(Ω^q) with p + q = degree.
class TotalCochain {
public:
    TotalCochain() = default;
    TotalCochain(int degree, u64 p, int prec) : degree_(degree), p_(p), prec_(prec) {}

    static TotalCochain zero(const ChartedSpace& X, int degree, int prec = -1) {
        return TotalCochain(degree, X.p(), prec < 0 ? X.N() : prec);
    }

    int degree() const { return degree_; }
    u64 p() const { return p_; }
    /// Precision floor: minimum over the recorded floor and every component.
    int prec() const {
        int k = prec_;
        for (const auto& [p, c] : comps_) k = std::min(k, c.prec());
        return k;
    }
    const std::map<int, Cochain>& components() const { return comps_; }

    bool has(int p) const { return comps_.count(p) > 0; }
    const Cochain* find(int p) const {
        auto it = comps_.find(p);
        return it == comps_.end() ? nullptr : &it->second;
    }
    /// Component in C^p(Ω^{degree-p}), created as zero if absent.
    Cochain& component(const ChartedSpace& X, int p) {
        auto it = comps_.find(p);
        if (it != comps_.end()) return it->second;
        int q = degree_ - p;
        if (p < 0 || q < 0 || q > X.dim() || p > X.max_cech_degree()) throw InvalidArgument("component (p,q) outside the bicomplex");
        return comps_.emplace(p, Cochain::zero(X, p, q, prec_)).first->second;
    }
    void set_form(const ChartedSpace& X, int p, const Simplex& S, const DiffForm& w) {
        if (w.chart() != S[0]) throw InvalidArgument("simplex form must live on the simplex's first chart");
        component(X, p).at(X, S) = w;
    }
    void add_form(const ChartedSpace& X, int p, const Simplex& S, const DiffForm& w) {
        DiffForm& slot = component(X, p).at(X, S);
        slot = slot + w;
    }

    bool is_zero() const {
        return std::all_of(comps_.begin(), comps_.end(), [](const auto& kv) { return kv.second.is_zero(); });
    }

    void lower_prec(int k) {
        prec_ = std::min(prec_, k);
        for (auto& [p, c] : comps_)
            for (auto& w : c.values) w = w.with_prec(prec_);
    }

private:
    int degree_ = 0;
    u64 p_ = 2;
    int prec_ = 0;
    std::map<int, Cochain> comps_;
};

inline TotalCochain combine(const ChartedSpace& X, const TotalCochain& a, const TotalCochain& b, i64 sb) {
    if (a.degree() != b.degree()) throw InvalidArgument("adding cochains of different degree");
    TotalCochain out(a.degree(), X.p(), std::min(a.prec(), b.prec()));
    for (const auto& [p, c] : a.components()) {
        Cochain& o = out.component(X, p);
        for (std::size_t i = 0; i < c.values.size(); ++i) o.values[i] = o.values[i] + c.values[i];
    }
    for (const auto& [p, c] : b.components()) {
        Cochain& o = out.component(X, p);
        for (std::size_t i = 0; i < c.values.size(); ++i) o.values[i] = o.values[i] + c.values[i].scaled(sb);
    }
    out.lower_prec(out.prec());
    return out;
}
inline TotalCochain add(const ChartedSpace& X, const TotalCochain& a, const TotalCochain& b) { return combine(X, a, b, 1); }
inline TotalCochain sub(const ChartedSpace& X, const TotalCochain& a, const TotalCochain& b) { return combine(X, a, b, -1); }

inline TotalCochain scale(const ChartedSpace& X, const TotalCochain& a, const PAdicElem& c) {
    TotalCochain out(a.degree(), X.p(), std::min(a.prec(), c.prec()));
    for (const auto& [p, comp] : a.components()) {
        Cochain& o = out.component(X, p);
        for (std::size_t i = 0; i < comp.values.size(); ++i) o.values[i] = comp.values[i].scaled(c);
    }
    return out;
}
inline TotalCochain scale(const ChartedSpace& X, const TotalCochain& a, i64 c) {
    return scale(X, a, PAdicElem::from_int(X.ctx(), c, a.prec()));
}

/// Equality at the smaller precision floor.
inline bool equals(const ChartedSpace& X, const TotalCochain& a, const TotalCochain& b) {
    if (a.degree() != b.degree()) return false;
    return sub(X, a, b).is_zero();
}

/// The unit 0-cochain: the constant 1 on every chart.
inline TotalCochain unit_cochain(const ChartedSpace& X, int prec = -1) {
    int k = prec < 0 ? X.N() : prec;
    TotalCochain one(0, X.p(), k);
    for (const auto& S : X.simplices(0))
        one.set_form(X, 0, S, DiffForm::function(LaurentSection::constant(S[0], X.dim(), PAdicElem::from_int(X.ctx(), 1, k))));
    return one;
}

/// Čech differential: (δc)_S = sum_l (-1)^l c_{S minus S_l}, restricted to U_S.
inline Cochain delta(const ChartedSpace& X, const Cochain& c) {
    const int p = c.cech_degree;
    Cochain out = Cochain::zero(X, p + 1, c.form_degree, c.prec());
    const auto& targets = X.simplices(p + 1);
    for (std::size_t i = 0; i < targets.size(); ++i) {
        const Simplex& S = targets[i];
        DiffForm acc(S[0], X.dim(), c.form_degree, X.p(), c.prec());
        for (std::size_t l = 0; l < S.size(); ++l) {
            Simplex face = S;
            face.erase(face.begin() + static_cast<std::ptrdiff_t>(l));
            DiffForm w = transition(X, S[0], c.at(X, face));
            acc += (l % 2 == 0) ? w : -w;
        }
        out.values[i] = acc;
    }
    return out;
}

inline Cochain d(const ChartedSpace& X, const Cochain& c) {
    Cochain out = Cochain::zero(X, c.cech_degree, c.form_degree + 1, c.prec());
    for (std::size_t i = 0; i < c.values.size(); ++i) out.values[i] = d(c.values[i]);
    return out;
}

/// Δ = δ + (-1)^p d on the total complex.
inline TotalCochain total_diff(const ChartedSpace& X, const TotalCochain& z) {
    TotalCochain out(z.degree() + 1, X.p(), z.prec());
    for (const auto& [p, c] : z.components()) {
        if (p + 1 <= X.max_cech_degree()) {
            Cochain dc = delta(X, c);
            Cochain& o = out.component(X, p + 1);
            for (std::size_t i = 0; i < dc.values.size(); ++i) o.values[i] += dc.values[i];
        }
        if (c.form_degree + 1 <= X.dim()) {
            Cochain dd = d(X, c);
            Cochain& o = out.component(X, p);
            for (std::size_t i = 0; i < dd.values.size(); ++i) o.values[i] += (p % 2 == 0) ? dd.values[i] : -dd.values[i];
        }
    }
    return out;
}

/// Alexander–Whitney cup product with the sign (-1)^{q_a p_b}.
inline TotalCochain cup(const ChartedSpace& X, const TotalCochain& a, const TotalCochain& b) {
    TotalCochain out(a.degree() + b.degree(), X.p(), std::min(a.prec(), b.prec()));
    for (const auto& [pa, ca] : a.components())
        for (const auto& [pb, cb] : b.components()) {
            const int qa = ca.form_degree, qb = cb.form_degree;
            if (pa + pb > X.max_cech_degree() || qa + qb > X.dim()) continue;
            if (ca.is_zero() || cb.is_zero()) continue;
            const int sign = (qa * pb) % 2 ? -1 : 1;
            for (const auto& S : X.simplices(pa + pb)) {
                Simplex front(S.begin(), S.begin() + pa + 1);
                Simplex back(S.begin() + pa, S.end());
                const DiffForm& fa = ca.at(X, front);
                const DiffForm& fb = cb.at(X, back);
                if (fa.is_zero() || fb.is_zero()) continue;
                DiffForm w = wedge(fa, transition(X, S[0], fb));
                out.add_form(X, pa + pb, S, sign > 0 ? w : -w);
            }
        }
    return out;
}

/// Pullback along the power map [x_0 : ... : x_n] -> [x_0^e : ... : x_n^e]
/// of P^n: exponents scale by e and every dlog by e.
inline TotalCochain pullback_power_map(const ChartedSpace& X, const TotalCochain& z, int e) {
    if (X.is_bundle()) throw UnsupportedSpace("the power map is only provided on P^n");
    TotalCochain out(z.degree(), X.p(), z.prec());
    for (const auto& [p, c] : z.components()) {
        Cochain& o = out.component(X, p);
        i64 factor = 1;
        for (int i = 0; i < c.form_degree; ++i) factor *= e;
        for (std::size_t i = 0; i < c.values.size(); ++i) {
            const DiffForm& w = c.values[i];
            DiffForm r(w.chart(), w.nvars(), w.degree(), w.p(), w.prec());
            for (const auto& [J, f] : w.components())
                r.set(J, f.map_exponents(f.chart(), f.nvars(), [e](const Exponent& a) { return a.scaled(e); }).scaled(factor));
            o.values[i] = r;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Weight decomposition

namespace detail {

struct BasisKey {
    int p;
    int sidx;
    unsigned J;
    friend auto operator<=>(const BasisKey&, const BasisKey&) = default;
};

/// The finite complex K_w of one torus weight.
class WeightComplex {
public:
    WeightComplex(const ChartedSpace& X, const CoxVector& w, int min_degree, int max_degree)
        : X_(X), w_(w), min_(std::max(min_degree, 0)), max_(std::min(max_degree, X.max_cech_degree() + X.dim())) {
        basis_.resize(static_cast<std::size_t>(X.max_cech_degree() + X.dim() + 2));
        index_.resize(basis_.size());
        for (int n = min_; n <= max_; ++n) build_degree(n);
    }

    const std::vector<BasisKey>& basis(int n) const { return basis_.at(static_cast<std::size_t>(n)); }
    int size(int n) const { return (n < min_ || n > max_) ? 0 : static_cast<int>(basis(n).size()); }
    int index(int n, const BasisKey& k) const {
        const auto& m = index_.at(static_cast<std::size_t>(n));
        auto it = m.find(k);
        return it == m.end() ? -1 : it->second;
    }
    const CoxVector& weight() const { return w_; }

    /// Δ applied to basis vector i of degree n, as (index in degree n+1, coefficient).
    std::vector<std::pair<int, i64>> image(int n, int i) const {
        std::map<int, i64> acc;
        if (n + 1 > max_) return {};
        const BasisKey& key = basis(n)[static_cast<std::size_t>(i)];
        const Simplex& Sp = X_.simplices(key.p)[static_cast<std::size_t>(key.sidx)];
        const int q = n - key.p;
        // δ part
        if (key.p + 1 <= X_.max_cech_degree()) {
            for (int c = 0; c < X_.num_charts(); ++c) {
                if (std::find(Sp.begin(), Sp.end(), c) != Sp.end()) continue;
                Simplex S = Sp;
                S.insert(std::upper_bound(S.begin(), S.end(), c), c);
                const int l = static_cast<int>(std::find(S.begin(), S.end(), c) - S.begin());
                const int sign = l % 2 ? -1 : 1;
                const int sidx = X_.simplex_index(S);
                for (unsigned K = 0; K < (1u << X_.dim()); ++K) {
                    if (popcount(K) != q) continue;
                    int coef = X_.basis_change(Sp[0], S[0], key.J, K);
                    if (!coef) continue;
                    accumulate(acc, n + 1, {key.p + 1, sidx, K}, static_cast<i64>(sign) * coef);
                }
            }
        }
        // (-1)^p d part
        if (q + 1 <= X_.dim()) {
            const Exponent a = X_.from_cox(Sp[0], w_);
            for (int k = 0; k < X_.dim(); ++k) {
                if (key.J >> k & 1u || a[k] == 0) continue;
                i64 coef = static_cast<i64>(a[k]) * wedge_sign(1u << k, key.J) * ((key.p % 2) ? -1 : 1);
                accumulate(acc, n + 1, {key.p, key.sidx, key.J | (1u << k)}, coef);
            }
        }
        std::vector<std::pair<int, i64>> out;
        for (auto [r, c] : acc)
            if (c) out.emplace_back(r, c);
        return out;
    }

    /// Integer matrix of Δ: K^n -> K^{n+1}, rows indexed by degree n+1.
    std::vector<std::vector<i64>> matrix(int n) const {
        std::vector<std::vector<i64>> M(static_cast<std::size_t>(size(n + 1)), std::vector<i64>(static_cast<std::size_t>(size(n)), 0));
        for (int i = 0; i < size(n); ++i)
            for (auto [r, c] : image(n, i)) M[static_cast<std::size_t>(r)][static_cast<std::size_t>(i)] = c;
        return M;
    }

private:
    void accumulate(std::map<int, i64>& acc, int n, const BasisKey& k, i64 c) const {
        int r = index(n, k);
        if (r < 0) throw Error("internal: differential left the regular subcomplex");
        acc[r] += c;
    }

    void build_degree(int n) {
        auto& B = basis_[static_cast<std::size_t>(n)];
        auto& I = index_[static_cast<std::size_t>(n)];
        for (int p = 0; p <= std::min(n, X_.max_cech_degree()); ++p) {
            const int q = n - p;
            if (q > X_.dim()) continue;
            const auto& simp = X_.simplices(p);
            for (std::size_t s = 0; s < simp.size(); ++s) {
                const Simplex& S = simp[s];
                const Exponent a = X_.from_cox(S[0], w_);
                for (unsigned J = 0; J < (1u << X_.dim()); ++J) {
                    if (popcount(J) != q) continue;
                    if (!X_.regular_term(S[0], S, a, J)) continue;
                    BasisKey key{p, static_cast<int>(s), J};
                    I[key] = static_cast<int>(B.size());
                    B.push_back(key);
                }
            }
        }
    }

    const ChartedSpace& X_;
    CoxVector w_;
    int min_;
    int max_;
    std::vector<std::vector<BasisKey>> basis_;
    std::vector<std::map<BasisKey, int>> index_;
};

/// Splits a cochain into weight vectors in the K_w coordinates.  Returns
/// false if some term is not regular on its simplex.
inline bool split_by_weight(const ChartedSpace& X, const TotalCochain& z, std::map<CoxVector, std::vector<std::tuple<BasisKey, u64>>>& out) {
    for (const auto& [p, c] : z.components())
        for (std::size_t s = 0; s < c.values.size(); ++s) {
            const DiffForm& w = c.values[s];
            const Simplex& S = X.simplices(p)[s];
            for (const auto& [J, f] : w.components())
                for (const auto& t : f.terms()) {
                    if (!X.regular_term(S[0], S, t.exp, J)) return false;
                    out[X.to_cox(S[0], t.exp)].emplace_back(BasisKey{p, static_cast<int>(s), J}, t.coeff);
                }
        }
    return true;
}

inline std::vector<u64> to_vector(const WeightComplex& K, int n, const std::vector<std::tuple<BasisKey, u64>>& terms, const ZpnRing& R) {
    std::vector<u64> v(static_cast<std::size_t>(K.size(n)), 0);
    for (const auto& [key, c] : terms) {
        int i = K.index(n, key);
        if (i < 0) throw Error("internal: regular term missing from the weight basis");
        v[static_cast<std::size_t>(i)] = R.add(v[static_cast<std::size_t>(i)], c % R.mod);
    }
    return v;
}

/// Adds the weight-w vector v (degree n coordinates) into a total cochain.
inline void add_weight_vector(const ChartedSpace& X, const WeightComplex& K, int n, const std::vector<u64>& v, TotalCochain& out, int prec) {
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v[i]) continue;
        const BasisKey& key = K.basis(n)[i];
        const Simplex& S = X.simplices(key.p)[static_cast<std::size_t>(key.sidx)];
        LaurentSection f = LaurentSection::monomial(S[0], X.dim(), X.from_cox(S[0], K.weight()), PAdicElem(X.p(), v[i], prec));
        out.add_form(X, key.p, S, DiffForm::basis(f, key.J));
    }
}

} // namespace detail

struct CoboundaryWitness {
    TotalCochain w;
    bool certified = false;  // Δw == z verified with the cochain operations
};

/// Finds w with Δw = z, or returns nullopt when z is not a coboundary at its
/// precision floor.  Throws NotClosed if Δz != 0.
inline std::optional<CoboundaryWitness> solve_coboundary(const ChartedSpace& X, const TotalCochain& z) {
    const int n = z.degree();
    const int k = z.prec();
    if (k <= 0) throw PrecisionExhausted("cochain carries no precision");
    if (!total_diff(X, z).is_zero()) throw NotClosed("Δz != 0");
    TotalCochain w(n - 1, X.p(), k);
    if (z.is_zero()) return CoboundaryWitness{w, true};
    if (n == 0) return std::nullopt;
    std::map<CoxVector, std::vector<std::tuple<detail::BasisKey, u64>>> parts;
    if (!detail::split_by_weight(X, z, parts)) return std::nullopt;
    const ZpnRing R(X.p(), k);
    for (const auto& [weight, terms] : parts) {
        detail::WeightComplex K(X, weight, n - 1, n);
        const int rows = K.size(n - 1), cols = K.size(n);
        ZpnMatrix A(rows, cols + rows);
        for (int i = 0; i < rows; ++i) {
            for (auto [r, c] : K.image(n - 1, i)) A.at(i, r) = R.reduce(c);
            A.at(i, cols + i) = 1;
        }
        HowellForm H = howell_form(R, A, cols);
        auto sol = H.reduce(detail::to_vector(K, n, terms, R));
        if (!sol) return std::nullopt;
        detail::add_weight_vector(X, K, n - 1, *sol, w, k);
    }
    bool ok = equals(X, total_diff(X, w), z);
    if (!ok) throw Error("internal: coboundary witness failed verification");
    return CoboundaryWitness{w, ok};
}

/// Coefficients lambda with z - sum lambda_t basis_t exact.  The basis
/// cochains must be closed of the same degree as z.  Throws NotInSpan when
/// no such coefficients exist.
inline std::vector<PAdicElem> coefficients_modulo_exact(const ChartedSpace& X, const TotalCochain& z, const std::vector<TotalCochain>& basis) {
    const int n = z.degree();
    int k = z.prec();
    for (const auto& b : basis) {
        if (b.degree() != n) throw InvalidArgument("basis cochain of the wrong degree");
        k = std::min(k, b.prec());
    }
    if (k <= 0) throw PrecisionExhausted("cochain carries no precision");
    if (!total_diff(X, z).is_zero()) throw NotClosed("Δz != 0");
    const ZpnRing R(X.p(), k);
    const int nb = static_cast<int>(basis.size());

    std::map<CoxVector, std::vector<std::tuple<detail::BasisKey, u64>>> zparts;
    if (!detail::split_by_weight(X, z, zparts)) throw NotInSpan("cochain is not regular");
    std::vector<std::map<CoxVector, std::vector<std::tuple<detail::BasisKey, u64>>>> bparts(basis.size());
    std::set<CoxVector> joint;
    for (int t = 0; t < nb; ++t) {
        if (!detail::split_by_weight(X, basis[static_cast<std::size_t>(t)], bparts[static_cast<std::size_t>(t)])) throw InvalidArgument("basis cochain is not regular");
        for (const auto& [wt, terms] : bparts[static_cast<std::size_t>(t)]) joint.insert(wt);
    }
    // weights untouched by the basis must be exact on their own
    for (const auto& [wt, terms] : zparts) {
        if (joint.count(wt)) continue;
        detail::WeightComplex K(X, wt, n - 1, n);
        const int rows = K.size(n - 1), cols = K.size(n);
        ZpnMatrix A(rows, cols);
        for (int i = 0; i < rows; ++i)
            for (auto [r, c] : K.image(n - 1, i)) A.at(i, r) = R.reduce(c);
        if (!howell_form(R, A, cols).reduce(detail::to_vector(K, n, terms, R)))
            throw NotInSpan("a weight component is not exact");
    }
    // joint system over the basis weights; trailing columns hold the lambdas
    std::vector<detail::WeightComplex> Ks;
    std::vector<int> col_off, row_off;
    int cols = 0, wrows = 0;
    for (const auto& wt : joint) {
        Ks.emplace_back(X, wt, n - 1, n);
        col_off.push_back(cols);
        row_off.push_back(wrows);
        cols += Ks.back().size(n);
        wrows += Ks.back().size(n - 1);
    }
    ZpnMatrix A(wrows + nb, cols + nb);
    for (std::size_t b = 0; b < Ks.size(); ++b)
        for (int i = 0; i < Ks[b].size(n - 1); ++i)
            for (auto [r, c] : Ks[b].image(n - 1, i)) A.at(row_off[b] + i, col_off[b] + r) = R.reduce(c);
    for (int t = 0; t < nb; ++t) {
        std::size_t b = 0;
        for (const auto& wt : joint) {
            auto it = bparts[static_cast<std::size_t>(t)].find(wt);
            if (it != bparts[static_cast<std::size_t>(t)].end()) {
                auto v = detail::to_vector(Ks[b], n, it->second, R);
                for (std::size_t i = 0; i < v.size(); ++i) A.at(wrows + t, col_off[b] + static_cast<int>(i)) = v[i];
            }
            ++b;
        }
        A.at(wrows + t, cols + t) = 1;
    }
    std::vector<u64> target(static_cast<std::size_t>(cols), 0);
    {
        std::size_t b = 0;
        for (const auto& wt : joint) {
            auto it = zparts.find(wt);
            if (it != zparts.end()) {
                auto v = detail::to_vector(Ks[b], n, it->second, R);
                for (std::size_t i = 0; i < v.size(); ++i) target[static_cast<std::size_t>(col_off[b]) + i] = v[i];
            }
            ++b;
        }
    }
    HowellForm H = howell_form(R, A, cols);
    auto sol = H.reduce(target);
    if (!sol) throw NotInSpan("no combination of the basis classes matches the cochain");
    std::vector<PAdicElem> lambda;
    for (int t = 0; t < nb; ++t) lambda.emplace_back(X.p(), (*sol)[static_cast<std::size_t>(t)], k);
    return lambda;
}

struct RankTable {
    int window = 0;
    std::vector<int> free_ranks;      // number of Z/p^N summands per degree
    std::vector<int> rational_ranks;  // ranks over Q of the integral complex
    int weights = 0;                  // weights enumerated
};

/// Cohomology ranks of the total complex over Z/p^N, weights enumerated in
/// the chart-0 coordinate box [-D, D]^dim.
inline RankTable cohomology_ranks(const ChartedSpace& X, int window) {
    const int dim = X.dim();
    const int top = 2 * dim;
    const ZpnRing R(X.p(), X.N());
    RankTable T{window, std::vector<int>(static_cast<std::size_t>(top + 1), 0), std::vector<int>(static_cast<std::size_t>(top + 1), 0), 0};
    Exponent a;
    for (int i = 0; i < dim; ++i) a[i] = -window;
    for (;;) {
        detail::WeightComplex K(X, X.to_cox(0, a), 0, top + 1);
        std::vector<int> u(static_cast<std::size_t>(top + 2), 0), r(static_cast<std::size_t>(top + 2), 0);
        for (int n = 0; n <= top; ++n) {
            if (K.size(n) == 0 || K.size(n + 1) == 0) continue;
            auto M = K.matrix(n);
            ZpnMatrix Z(K.size(n + 1), K.size(n));
            for (int i = 0; i < Z.rows; ++i)
                for (int j = 0; j < Z.cols; ++j) Z.at(i, j) = R.reduce(M[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
            u[static_cast<std::size_t>(n)] = static_cast<int>(smith_valuations(R, Z).size());
            r[static_cast<std::size_t>(n)] = rank_over_large_prime(M);
        }
        for (int n = 0; n <= top; ++n) {
            int prev_u = n > 0 ? u[static_cast<std::size_t>(n - 1)] : 0;
            int prev_r = n > 0 ? r[static_cast<std::size_t>(n - 1)] : 0;
            T.free_ranks[static_cast<std::size_t>(n)] += K.size(n) - u[static_cast<std::size_t>(n)] - prev_u;
            T.rational_ranks[static_cast<std::size_t>(n)] += K.size(n) - r[static_cast<std::size_t>(n)] - prev_r;
        }
        ++T.weights;
        int i = 0;
        while (i < dim && a[i] == window) a[i++] = -window;
        if (i == dim) break;
        ++a[i];
    }
    return T;
}

} // namespace rigidchern
