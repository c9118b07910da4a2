#pragma once

/**
 * @file charts.hpp
 * @brief Standard toric charts of P^n and of P(O(a_1) + ... + O(a_r)) over P^n.
 *
 * Every chart coordinate is a torus character, written as an exponent
 * vector in the Cox coordinates x_0..x_n (base) and y_1..y_r (fiber), with
 * deg x_k = (1, 0) and deg y_l = (-a_l, 1).  Chart (i, j) is {x_i != 0,
 * y_j != 0}; its coordinates are x_k/x_i (k != i) followed by
 * y_l x_i^{a_l - a_j} / y_j (l != j).  A chart exponent vector is the Cox
 * vector with the entries at x_i and y_j dropped.
 *
 * Differential forms are stored in the dlog basis of the chart coordinates:
 * f dlog t_J with J a bitmask.  In this basis d never changes exponents and
 * chart changes act on the basis by integer minors.
 */

#include <algorithm>
#include <array>
#include <bit>
#include <map>
#include <string>
#include <vector>

#include "rigidchern/errors.hpp"
#include "rigidchern/laurent.hpp"
#include "rigidchern/padic.hpp"

namespace rigidchern {

inline constexpr int kMaxCox = 7;
using CoxVector = std::array<int, kMaxCox>;
using Simplex = std::vector<int>;

enum class SpaceKind { ProjectiveSpace, ProjBundle };

struct SpaceDescriptor {
    SpaceKind kind = SpaceKind::ProjectiveSpace;
    int n = 1;                // P^n, or the base P^n of the bundle
    std::vector<int> twists;  // a_1..a_r for ProjBundle
    PAdicContext ctx;

    static SpaceDescriptor projective(int n, PAdicContext ctx) { return {SpaceKind::ProjectiveSpace, n, {}, ctx}; }
    static SpaceDescriptor bundle(int base_n, std::vector<int> twists, PAdicContext ctx) {
        return {SpaceKind::ProjBundle, base_n, std::move(twists), ctx};
    }

    std::string name() const {
        if (kind == SpaceKind::ProjectiveSpace) return "P" + std::to_string(n);
        std::string s = "P(";
        for (std::size_t i = 0; i < twists.size(); ++i) s += (i ? "+O(" : "O(") + std::to_string(twists[i]) + ")";
        return s + ") over P" + std::to_string(n);
    }
};

inline int popcount(unsigned m) { return std::popcount(m); }

/// Sign of dlog t_I ^ dlog t_J against dlog t_{I|J}; 0 if I and J meet.
inline int wedge_sign(unsigned I, unsigned J) {
    if (I & J) return 0;
    int inv = 0;
    for (unsigned j = J; j; j &= j - 1) {
        int b = std::countr_zero(j);
        inv += popcount(I >> (b + 1));
    }
    return inv % 2 ? -1 : 1;
}

struct Chart {
    int base = 0;             // i: x_i inverted
    int fiber = -1;           // j: y_j inverted (bundles only)
    std::vector<int> coords;  // Cox index of each chart coordinate
};

class ChartedSpace {
public:
    static constexpr int kDefaultWindow = 12;
    static constexpr int kDefaultExponentLimit = 4096;

    explicit ChartedSpace(SpaceDescriptor desc, int window = kDefaultWindow, int exponent_limit = kDefaultExponentLimit)
        : desc_(std::move(desc)), window_(window), exponent_limit_(exponent_limit) {
        desc_.ctx.validate();
        if (desc_.n < 1 || desc_.n > 2) throw UnsupportedSpace("base dimension must be 1 or 2");
        if (window_ < 1) throw UnsupportedSpace("window must be >= 1");
        const int n = desc_.n;
        if (desc_.kind == SpaceKind::ProjectiveSpace) {
            if (!desc_.twists.empty()) throw UnsupportedSpace("P^n takes no twists");
            cox_dim_ = n + 1;
            dim_ = n;
            for (int i = 0; i <= n; ++i) {
                Chart c;
                c.base = i;
                for (int k = 0; k <= n; ++k)
                    if (k != i) c.coords.push_back(k);
                charts_.push_back(c);
            }
        } else {
            const int r = static_cast<int>(desc_.twists.size());
            if (r < 2 || r > 3) throw UnsupportedSpace("bundle rank must be 2 or 3");
            for (int a : desc_.twists)
                if (a < -9 || a > 9) throw UnsupportedSpace("twists must lie in [-9, 9]");
            cox_dim_ = n + 1 + r;
            dim_ = n + r - 1;
            if (dim_ > kMaxVars) throw UnsupportedSpace("dimension exceeds the supported maximum");
            for (int i = 0; i <= n; ++i)
                for (int j = 0; j < r; ++j) {
                    Chart c;
                    c.base = i;
                    c.fiber = j;
                    for (int k = 0; k <= n; ++k)
                        if (k != i) c.coords.push_back(k);
                    for (int l = 0; l < r; ++l)
                        if (l != j) c.coords.push_back(n + 1 + l);
                    charts_.push_back(c);
                }
        }
        build_nerve();
        build_basis_changes();
    }

    const SpaceDescriptor& descriptor() const { return desc_; }
    const PAdicContext& ctx() const { return desc_.ctx; }
    u64 p() const { return desc_.ctx.p; }
    int N() const { return desc_.ctx.N; }
    int dim() const { return dim_; }
    int cox_dim() const { return cox_dim_; }
    int base_dim() const { return desc_.n; }
    int rank() const { return desc_.kind == SpaceKind::ProjBundle ? static_cast<int>(desc_.twists.size()) : 1; }
    bool is_bundle() const { return desc_.kind == SpaceKind::ProjBundle; }
    int window() const { return window_; }
    int exponent_limit() const { return exponent_limit_; }
    int num_charts() const { return static_cast<int>(charts_.size()); }
    const Chart& chart(int c) const { return charts_.at(static_cast<std::size_t>(c)); }
    const std::vector<int>& twists() const { return desc_.twists; }

    /// Sorted simplices of the nerve with p+1 vertices.
    const std::vector<Simplex>& simplices(int p) const {
        static const std::vector<Simplex> empty;
        if (p < 0 || p >= static_cast<int>(nerve_.size())) return empty;
        return nerve_[static_cast<std::size_t>(p)];
    }
    int max_cech_degree() const { return static_cast<int>(nerve_.size()) - 1; }

    static unsigned simplex_mask(const Simplex& S) {
        unsigned m = 0;
        for (int c : S) m |= 1u << c;
        return m;
    }
    /// Position of S inside simplices(|S| - 1).
    int simplex_index(const Simplex& S) const { return index_of_mask_.at(simplex_mask(S)); }

    /// Cox exponent vector of a chart monomial.
    CoxVector to_cox(int c, const Exponent& a) const {
        const Chart& ch = chart(c);
        CoxVector v{};
        for (std::size_t k = 0; k < ch.coords.size(); ++k) v[static_cast<std::size_t>(ch.coords[k])] = a[static_cast<int>(k)];
        const int n = desc_.n;
        if (!is_bundle()) {
            int s = 0;
            for (int k = 0; k <= n; ++k)
                if (k != ch.base) s += v[static_cast<std::size_t>(k)];
            v[static_cast<std::size_t>(ch.base)] = -s;
            return v;
        }
        const int r = rank();
        int fsum = 0, twisted = 0;
        for (int l = 0; l < r; ++l)
            if (l != ch.fiber) fsum += v[static_cast<std::size_t>(n + 1 + l)];
        v[static_cast<std::size_t>(n + 1 + ch.fiber)] = -fsum;
        for (int l = 0; l < r; ++l) twisted += desc_.twists[static_cast<std::size_t>(l)] * v[static_cast<std::size_t>(n + 1 + l)];
        int esum = 0;
        for (int k = 0; k <= n; ++k)
            if (k != ch.base) esum += v[static_cast<std::size_t>(k)];
        v[static_cast<std::size_t>(ch.base)] = twisted - esum;
        return v;
    }

    Exponent from_cox(int c, const CoxVector& v) const {
        const Chart& ch = chart(c);
        Exponent a;
        for (std::size_t k = 0; k < ch.coords.size(); ++k) a[static_cast<int>(k)] = v[static_cast<std::size_t>(ch.coords[k])];
        return a;
    }

    /// True when the Cox vector is a torus character (degree zero).
    bool is_character(const CoxVector& v) const {
        const int n = desc_.n;
        int e = 0;
        for (int k = 0; k <= n; ++k) e += v[static_cast<std::size_t>(k)];
        if (!is_bundle()) return e == 0;
        int f = 0, twisted = 0;
        for (int l = 0; l < rank(); ++l) {
            f += v[static_cast<std::size_t>(n + 1 + l)];
            twisted += desc_.twists[static_cast<std::size_t>(l)] * v[static_cast<std::size_t>(n + 1 + l)];
        }
        return f == 0 && e == twisted;
    }

    Exponent transition_exponent(int from, int to, const Exponent& a) const {
        if (from == to) return a;
        Exponent b = from_cox(to, to_cox(from, a));
        if (b.max_abs() > exponent_limit_)
            throw WindowOverflow("exponent " + std::to_string(b.max_abs()) + " exceeds the limit " + std::to_string(exponent_limit_));
        return b;
    }

    /// Exact monomial substitution of a section into another chart's coordinates.
    LaurentSection transition(int from, int to, const LaurentSection& s) const {
        if (s.chart() != from) throw InvalidArgument("section does not live on the source chart");
        if (from == to) return s;
        return s.map_exponents(to, dim_, [&](const Exponent& a) { return transition_exponent(from, to, a); });
    }

    /// Coefficient of dlog t'_K (chart `to`) in dlog t_J (chart `from`).
    int basis_change(int from, int to, unsigned J, unsigned K) const {
        if (popcount(J) != popcount(K)) return 0;
        const auto& T = basis_change_[static_cast<std::size_t>(from * num_charts() + to)];
        // det of T restricted to rows K, columns J
        std::array<int, kMaxVars> rows{}, cols{};
        int q = 0;
        for (int k = 0; k < dim_; ++k)
            if (K >> k & 1u) rows[static_cast<std::size_t>(q++)] = k;
        q = 0;
        for (int k = 0; k < dim_; ++k)
            if (J >> k & 1u) cols[static_cast<std::size_t>(q++)] = k;
        std::array<std::array<i64, kMaxVars>, kMaxVars> m{};
        for (int a = 0; a < q; ++a)
            for (int b = 0; b < q; ++b) m[a][b] = T[rows[a]][cols[b]];
        return static_cast<int>(small_det(m, q));
    }

    /// Cox indices that are inverted on the intersection of the charts in S.
    unsigned inverted_mask(const Simplex& S) const {
        unsigned m = 0;
        for (int c : S) {
            m |= 1u << chart(c).base;
            if (chart(c).fiber >= 0) m |= 1u << (desc_.n + 1 + chart(c).fiber);
        }
        return m;
    }

    /// Whether x^a dlog t_J (chart c coordinates) is regular on U_S, c in S.
    bool regular_term(int c, const Simplex& S, const Exponent& a, unsigned J) const {
        unsigned inv = inverted_mask(S);
        const Chart& ch = chart(c);
        for (std::size_t k = 0; k < ch.coords.size(); ++k) {
            if (inv >> ch.coords[k] & 1u) continue;
            int e = a[static_cast<int>(k)];
            if (e < 0) return false;
            if (e == 0 && (J >> k & 1u)) return false;
        }
        return true;
    }

private:
    static i64 small_det(std::array<std::array<i64, kMaxVars>, kMaxVars> m, int q) {
        if (q == 0) return 1;
        if (q == 1) return m[0][0];
        i64 det = 0;
        for (int col = 0; col < q; ++col) {
            std::array<std::array<i64, kMaxVars>, kMaxVars> sub{};
            for (int r = 1; r < q; ++r) {
                int cc = 0;
                for (int c = 0; c < q; ++c)
                    if (c != col) sub[r - 1][cc++] = m[r][c];
            }
            i64 term = m[0][col] * small_det(sub, q - 1);
            det += (col % 2 ? -term : term);
        }
        return det;
    }

    void build_nerve() {
        const int nc = num_charts();
        nerve_.assign(static_cast<std::size_t>(nc), {});
        for (unsigned mask = 1; mask < (1u << nc); ++mask) {
            Simplex s;
            for (int c = 0; c < nc; ++c)
                if (mask >> c & 1u) s.push_back(c);
            nerve_[s.size() - 1].push_back(s);
        }
        for (auto& level : nerve_) std::sort(level.begin(), level.end());
        index_of_mask_.assign(1u << nc, -1);
        for (const auto& level : nerve_)
            for (std::size_t i = 0; i < level.size(); ++i) index_of_mask_[simplex_mask(level[i])] = static_cast<int>(i);
    }

    void build_basis_changes() {
        const int nc = num_charts();
        basis_change_.assign(static_cast<std::size_t>(nc * nc), {});
        for (int from = 0; from < nc; ++from)
            for (int to = 0; to < nc; ++to) {
                auto& T = basis_change_[static_cast<std::size_t>(from * nc + to)];
                for (int k = 0; k < dim_; ++k) {
                    Exponent img = from_cox(to, to_cox(from, Exponent::unit(k)));
                    for (int kk = 0; kk < dim_; ++kk) T[kk][k] = img[kk];
                }
            }
    }

    SpaceDescriptor desc_;
    int window_;
    int exponent_limit_;
    int cox_dim_ = 0;
    int dim_ = 0;
    std::vector<Chart> charts_;
    std::vector<std::vector<Simplex>> nerve_;
    std::vector<int> index_of_mask_;
    std::vector<std::array<std::array<int, kMaxVars>, kMaxVars>> basis_change_;
};

inline ChartedSpace build_space(const SpaceDescriptor& desc, int window = ChartedSpace::kDefaultWindow) {
    return ChartedSpace(desc, window);
}

/// A q-form on one chart, f_J dlog t_J summed over bitmasks J with |J| = q.
class DiffForm {
public:
    DiffForm() = default;
    DiffForm(int chart, int nvars, int degree, u64 p, int prec) : chart_(chart), nvars_(nvars), degree_(degree), p_(p), prec_(prec) {}

    static DiffForm function(const LaurentSection& f) {
        DiffForm w(f.chart(), f.nvars(), 0, f.p(), f.prec());
        w.set(0u, f);
        return w;
    }
    static DiffForm basis(const LaurentSection& f, unsigned J) {
        DiffForm w(f.chart(), f.nvars(), popcount(J), f.p(), f.prec());
        w.set(J, f);
        return w;
    }

    int chart() const { return chart_; }
    int nvars() const { return nvars_; }
    int degree() const { return degree_; }
    u64 p() const { return p_; }
    int prec() const { return prec_; }
    const std::map<unsigned, LaurentSection>& components() const { return comps_; }
    bool is_zero() const { return comps_.empty(); }

    /// Coefficient of dlog t_J (zero section if absent).
    LaurentSection component(unsigned J) const {
        auto it = comps_.find(J);
        if (it != comps_.end()) return it->second;
        return LaurentSection(chart_, nvars_, p_, prec_);
    }

    void set(unsigned J, const LaurentSection& f) {
        if (popcount(J) != degree_) throw InvalidArgument("basis index does not match the form degree");
        if (f.chart() != chart_) throw InvalidArgument("component on a different chart");
        prec_ = std::min(prec_, f.prec());
        for (auto& [k, g] : comps_) g = g.with_prec(prec_);
        if (f.is_zero())
            comps_.erase(J);
        else
            comps_[J] = f.with_prec(prec_);
    }
    void add(unsigned J, const LaurentSection& f) { set(J, component(J) + f); }

    DiffForm with_prec(int k) const {
        DiffForm w(chart_, nvars_, degree_, p_, std::min(k, prec_));
        for (const auto& [J, f] : comps_) w.set(J, f.with_prec(w.prec_));
        return w;
    }

    /// Coefficient of dt_J, i.e. f_J / t_J.
    LaurentSection dt_component(unsigned J) const {
        Exponent shift;
        for (int k = 0; k < nvars_; ++k)
            if (J >> k & 1u) shift[k] = -1;
        return component(J).times_monomial(shift);
    }
    /// Builds f dt_J.
    static DiffForm from_dt(const LaurentSection& f, unsigned J) {
        Exponent shift;
        for (int k = 0; k < f.nvars(); ++k)
            if (J >> k & 1u) shift[k] = 1;
        return basis(f.times_monomial(shift), J);
    }

    friend DiffForm operator+(const DiffForm& a, const DiffForm& b) {
        check(a, b);
        DiffForm w = a.with_prec(std::min(a.prec_, b.prec_));
        for (const auto& [J, f] : b.comps_) w.add(J, f);
        return w;
    }
    friend DiffForm operator-(const DiffForm& a, const DiffForm& b) { return a + (-b); }
    DiffForm operator-() const {
        DiffForm w(chart_, nvars_, degree_, p_, prec_);
        for (const auto& [J, f] : comps_) w.comps_[J] = -f;
        return w;
    }
    DiffForm& operator+=(const DiffForm& o) { return *this = *this + o; }
    DiffForm& operator-=(const DiffForm& o) { return *this = *this - o; }

    DiffForm scaled(i64 c) const {
        DiffForm w(chart_, nvars_, degree_, p_, prec_);
        for (const auto& [J, f] : comps_) w.set(J, f.scaled(c));
        return w;
    }
    DiffForm scaled(const PAdicElem& c) const {
        DiffForm w(chart_, nvars_, degree_, p_, std::min(prec_, c.prec()));
        for (const auto& [J, f] : comps_) w.set(J, f.scaled(c));
        return w;
    }
    DiffForm times(const LaurentSection& g) const {
        DiffForm w(chart_, nvars_, degree_, p_, std::min(prec_, g.prec()));
        for (const auto& [J, f] : comps_) w.set(J, f * g);
        return w;
    }

    friend DiffForm wedge(const DiffForm& a, const DiffForm& b) {
        check(a, b);
        DiffForm w(a.chart_, a.nvars_, a.degree_ + b.degree_, a.p_, std::min(a.prec_, b.prec_));
        for (const auto& [I, f] : a.comps_)
            for (const auto& [J, g] : b.comps_) {
                int s = wedge_sign(I, J);
                if (s == 0) continue;
                LaurentSection fg = f * g;
                w.add(I | J, s > 0 ? fg : -fg);
            }
        return w;
    }

    bool equals(const DiffForm& o) const {
        if (chart_ != o.chart_ || degree_ != o.degree_) return false;
        int k = std::min(prec_, o.prec_);
        return (with_prec(k) - o.with_prec(k)).is_zero();
    }

    int max_abs_exponent() const {
        int m = 0;
        for (const auto& [J, f] : comps_) m = std::max(m, f.max_abs_exponent());
        return m;
    }

private:
    static void check(const DiffForm& a, const DiffForm& b) {
        if (a.chart_ != b.chart_) throw InvalidArgument("forms on different charts");
        if (a.p_ != b.p_) throw InvalidArgument("forms over different primes");
    }

    int chart_ = 0;
    int nvars_ = 0;
    int degree_ = 0;
    u64 p_ = 2;
    int prec_ = 0;
    std::map<unsigned, LaurentSection> comps_;
};

/// Exterior derivative: d(x^e dlog t_J) = sum_k e_k x^e dlog t_k ^ dlog t_J.
inline DiffForm d(const DiffForm& w) {
    DiffForm out(w.chart(), w.nvars(), w.degree() + 1, w.p(), w.prec());
    if (w.degree() >= w.nvars()) return out;
    for (const auto& [J, f] : w.components()) {
        for (int k = 0; k < w.nvars(); ++k) {
            if (J >> k & 1u) continue;
            int s = wedge_sign(1u << k, J);
            std::vector<LaurentSection::Term> terms;
            for (const auto& t : f.terms()) {
                if (t.exp[k] == 0) continue;
                u64 m = f.modulus();
                u64 c = detail::mulmod(t.coeff, detail::reduce_signed(static_cast<i64>(s) * t.exp[k], m), m);
                terms.push_back({t.exp, c});
            }
            if (!terms.empty()) out.add(J | (1u << k), LaurentSection::from_terms(f.chart(), f.nvars(), f.p(), f.prec(), std::move(terms)));
        }
    }
    return out;
}

/// Rewrites a form in another chart's coordinates and dlog basis.
inline DiffForm transition(const ChartedSpace& X, int to, const DiffForm& w) {
    const int from = w.chart();
    if (from == to) return w;
    DiffForm out(to, X.dim(), w.degree(), w.p(), w.prec());
    const unsigned full = (1u << X.dim()) - 1;
    for (const auto& [J, f] : w.components()) {
        LaurentSection g = X.transition(from, to, f);
        for (unsigned K = 0; K <= full; ++K) {
            if (popcount(K) != w.degree()) continue;
            int c = X.basis_change(from, to, J, K);
            if (c != 0) out.add(K, g.scaled(static_cast<i64>(c)));
        }
    }
    return out;
}

/// Unit of a chart ring given as scalar * x^monomial * (1-unit polynomial).
struct UnitSection {
    int chart = 0;
    Exponent monomial;
    PAdicElem scalar;
    LaurentSection one_unit;

    static UnitSection one(const ChartedSpace& X, int chart, int prec = -1) {
        int k = prec < 0 ? X.N() : prec;
        PAdicElem c = PAdicElem::from_int(X.ctx(), 1, k);
        return {chart, Exponent{}, c, LaurentSection::constant(chart, X.dim(), c)};
    }
    static UnitSection monomial_unit(const ChartedSpace& X, int chart, const Exponent& e, int prec = -1) {
        UnitSection u = one(X, chart, prec);
        u.monomial = e;
        return u;
    }

    int prec() const { return std::min(scalar.prec(), one_unit.prec()); }

    void validate() const {
        if (one_unit.chart() != chart) throw NotAUnit("1-unit factor lives on another chart");
        if (!scalar.is_unit()) throw NotAUnit("scalar factor is not a p-adic unit");
        if (!one_unit.is_one_unit()) throw NotAUnit("polynomial factor is not a 1-unit");
    }

    /// The section scalar * x^monomial * one_unit.
    LaurentSection as_section() const { return one_unit.scaled(scalar).times_monomial(monomial); }

    friend UnitSection operator*(const UnitSection& a, const UnitSection& b) {
        if (a.chart != b.chart) throw InvalidArgument("units on different charts");
        return {a.chart, a.monomial + b.monomial, a.scalar * b.scalar, a.one_unit * b.one_unit};
    }
    UnitSection inverse() const {
        validate();
        return {chart, -monomial, scalar.unit_inverse(), one_unit.inverse_one_unit()};
    }
    UnitSection pow(const PAdicContext& ctx, u64 e) const {
        return {chart, monomial.scaled(static_cast<int>(e)), scalar.pow(e), one_unit.binomial_power(ctx, e)};
    }
    UnitSection with_prec(int k) const { return {chart, monomial, scalar.with_prec(k), one_unit.with_prec(k)}; }

    UnitSection transitioned(const ChartedSpace& X, int to) const {
        return {to, X.transition_exponent(chart, to, monomial), scalar, X.transition(chart, to, one_unit)};
    }
};

/// d(u) u^{-1} for a unit with its factorization witness.
inline DiffForm dlog(const ChartedSpace& X, const UnitSection& u) {
    u.validate();
    const int k = u.prec();
    DiffForm out(u.chart, X.dim(), 1, X.p(), k);
    for (int i = 0; i < X.dim(); ++i)
        if (u.monomial[i] != 0)
            out.add(1u << i, LaurentSection::constant(u.chart, X.dim(), PAdicElem::from_int(X.ctx(), u.monomial[i], k)));
    const LaurentSection& g = u.one_unit;
    bool constant_only = std::all_of(g.terms().begin(), g.terms().end(), [](const auto& t) { return t.exp.is_zero(); });
    if (!constant_only) out += d(DiffForm::function(g)).times(g.inverse_one_unit());
    return out;
}

/// dlog of a plain section; the witness must multiply out to exactly u.
inline DiffForm dlog(const ChartedSpace& X, const LaurentSection& u, const UnitSection& witness) {
    if (!witness.as_section().equals(u)) throw NotAUnit("factorization witness does not reproduce the section");
    return dlog(X, witness);
}

/// Whether every term of w is regular on U_S (w must live on a chart of S).
inline bool is_regular(const ChartedSpace& X, const Simplex& S, const DiffForm& w) {
    for (const auto& [J, f] : w.components())
        for (const auto& t : f.terms())
            if (!X.regular_term(w.chart(), S, t.exp, J)) return false;
    return true;
}

} // namespace rigidchern
