#pragma once

/**
 * @file laurent.hpp
 * @brief Sparse Laurent polynomials over truncated p-adic coefficients.
 *
 * A LaurentSection lives on one chart and uses that chart's affine
 * coordinates.  All coefficients share the section's precision; terms are
 * kept sorted by exponent with zero residues pruned.
 */

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "rigidchern/errors.hpp"
#include "rigidchern/padic.hpp"

namespace rigidchern {

inline constexpr int kMaxVars = 4;

struct Exponent {
    std::array<std::int32_t, kMaxVars> v{};

    std::int32_t& operator[](int i) { return v[static_cast<std::size_t>(i)]; }
    std::int32_t operator[](int i) const { return v[static_cast<std::size_t>(i)]; }

    friend auto operator<=>(const Exponent&, const Exponent&) = default;
    friend Exponent operator+(Exponent a, const Exponent& b) {
        for (int i = 0; i < kMaxVars; ++i) a[i] += b[i];
        return a;
    }
    friend Exponent operator-(Exponent a, const Exponent& b) {
        for (int i = 0; i < kMaxVars; ++i) a[i] -= b[i];
        return a;
    }
    Exponent operator-() const { return Exponent{} - *this; }
    Exponent scaled(int d) const {
        Exponent r = *this;
        for (auto& x : r.v) x *= d;
        return r;
    }
    int max_abs() const {
        int m = 0;
        for (auto x : v) m = std::max(m, std::abs(x));
        return m;
    }
    bool is_zero() const { return *this == Exponent{}; }

    static Exponent unit(int i) {
        Exponent e;
        e[i] = 1;
        return e;
    }
};

struct ExponentHash {
    std::size_t operator()(const Exponent& e) const noexcept {
        std::uint64_t h = 1469598103934665603ull;
        for (auto x : e.v) {
            h ^= static_cast<std::uint32_t>(x);
            h *= 1099511628211ull;
        }
        return static_cast<std::size_t>(h ^ (h >> 29));
    }
};

class LaurentSection {
public:
    struct Term {
        Exponent exp;
        u64 coeff;
        friend bool operator==(const Term&, const Term&) = default;
    };

    LaurentSection() = default;
    LaurentSection(int chart, int nvars, u64 p, int prec) : chart_(chart), nvars_(nvars), p_(p), prec_(prec) {
        if (nvars < 0 || nvars > kMaxVars) throw InvalidArgument("too many variables for a Laurent section");
    }

    static LaurentSection constant(int chart, int nvars, const PAdicElem& c) {
        return monomial(chart, nvars, Exponent{}, c);
    }
    static LaurentSection monomial(int chart, int nvars, const Exponent& e, const PAdicElem& c) {
        LaurentSection s(chart, nvars, c.p(), c.prec());
        if (!c.is_zero()) s.terms_.push_back({e, c.residue()});
        return s;
    }
    /// Builds a section from unsorted terms; duplicates are summed and zeros pruned.
    static LaurentSection from_terms(int chart, int nvars, u64 p, int prec, std::vector<Term> terms) {
        LaurentSection s(chart, nvars, p, prec);
        s.terms_ = std::move(terms);
        s.normalize();
        return s;
    }

    int chart() const { return chart_; }
    int nvars() const { return nvars_; }
    u64 p() const { return p_; }
    int prec() const { return prec_; }
    u64 modulus() const { return detail::ipow(p_, prec_); }
    const std::vector<Term>& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }
    bool is_zero() const { return terms_.empty(); }

    PAdicElem coeff(const Exponent& e) const {
        auto it = std::lower_bound(terms_.begin(), terms_.end(), e, [](const Term& t, const Exponent& x) { return t.exp < x; });
        u64 r = (it != terms_.end() && it->exp == e) ? it->coeff : 0;
        return PAdicElem(p_, r, prec_);
    }

    /// Minimum coefficient valuation (prec for the zero section).
    int valuation() const {
        int v = prec_;
        for (const auto& t : terms_) v = std::min(v, detail::valuation_u64(p_, t.coeff));
        return v;
    }
    int max_abs_exponent() const {
        int m = 0;
        for (const auto& t : terms_) m = std::max(m, t.exp.max_abs());
        return m;
    }

    LaurentSection with_prec(int k) const {
        if (k >= prec_) return *this;
        LaurentSection s(chart_, nvars_, p_, std::max(k, 0));
        s.terms_ = terms_;
        s.normalize();
        return s;
    }
    /// Same terms on another chart label; used after exponent substitution.
    LaurentSection relabeled(int chart, int nvars) const {
        LaurentSection s = *this;
        s.chart_ = chart;
        s.nvars_ = nvars;
        return s;
    }

    /// Applies an exponent substitution (must be injective for sensible results).
    template <typename F>
    LaurentSection map_exponents(int chart, int nvars, F&& f) const {
        std::vector<Term> out;
        out.reserve(terms_.size());
        for (const auto& t : terms_) out.push_back({f(t.exp), t.coeff});
        return from_terms(chart, nvars, p_, prec_, std::move(out));
    }

    friend LaurentSection operator+(const LaurentSection& a, const LaurentSection& b) { return combine(a, b, false); }
    friend LaurentSection operator-(const LaurentSection& a, const LaurentSection& b) { return combine(a, b, true); }
    LaurentSection operator-() const {
        LaurentSection s = *this;
        u64 m = modulus();
        for (auto& t : s.terms_) t.coeff = m - t.coeff;
        return s;
    }
    LaurentSection& operator+=(const LaurentSection& o) { return *this = *this + o; }
    LaurentSection& operator-=(const LaurentSection& o) { return *this = *this - o; }

    friend LaurentSection operator*(const LaurentSection& a, const LaurentSection& b) {
        check_compatible(a, b);
        int k = std::min(a.prec_, b.prec_);
        LaurentSection s(a.chart_, a.nvars_, a.p_, k);
        if (k == 0) return s;
        s.terms_ = multiply_terms(a.terms_, b.terms_, detail::ipow(a.p_, k));
        return s;
    }
    LaurentSection& operator*=(const LaurentSection& o) { return *this = *this * o; }

    LaurentSection scaled(const PAdicElem& c) const {
        int k = std::min(prec_, c.prec());
        LaurentSection s(chart_, nvars_, p_, k);
        if (k == 0) return s;
        u64 m = detail::ipow(p_, k);
        u64 cr = c.residue() % m;
        s.terms_.reserve(terms_.size());
        for (const auto& t : terms_) {
            u64 r = detail::mulmod(t.coeff % m, cr, m);
            if (r) s.terms_.push_back({t.exp, r});
        }
        return s;
    }
    LaurentSection scaled(i64 c) const { return scaled(PAdicElem(p_, detail::reduce_signed(c, modulus()), prec_)); }

    LaurentSection times_monomial(const Exponent& e) const {
        LaurentSection s = *this;
        for (auto& t : s.terms_) t.exp = t.exp + e;
        return s; // translation keeps the order
    }

    /// Exact division of every coefficient by p^v (costs v digits).
    LaurentSection divide_by_p_power(int v) const {
        if (v == 0) return *this;
        if (valuation() < v) throw ValuationError("section is not divisible by p^" + std::to_string(v));
        if (prec_ - v <= 0) throw PrecisionExhausted("division by p^" + std::to_string(v) + " leaves no precision");
        LaurentSection s(chart_, nvars_, p_, prec_ - v);
        u64 d = detail::ipow(p_, v);
        for (const auto& t : terms_) s.terms_.push_back({t.exp, t.coeff / d});
        return s;
    }

    /// Equality at the smaller precision.
    bool equals(const LaurentSection& o) const {
        if (chart_ != o.chart_ || nvars_ != o.nvars_) return false;
        int k = std::min(prec_, o.prec_);
        return (with_prec(k) - o.with_prec(k)).is_zero();
    }

    /// True when constant term is 1 mod p and every other coefficient is 0 mod p.
    bool is_one_unit() const {
        if (prec_ == 0) return true;
        bool have_const = false;
        for (const auto& t : terms_) {
            if (t.exp.is_zero()) {
                have_const = true;
                if (t.coeff % p_ != 1 % p_) return false;
            } else if (t.coeff % p_ != 0) {
                return false;
            }
        }
        return have_const || p_ == 1;
    }

    LaurentSection pow(u64 e) const {
        LaurentSection r = constant(chart_, nvars_, PAdicElem(p_, 1, prec_));
        LaurentSection b = *this;
        while (e) {
            if (e & 1) r *= b;
            e >>= 1;
            if (e) b *= b;
        }
        return r;
    }

    /// (1 + y)^{-1} = sum (-y)^n for a 1-unit 1 + y, truncated at the precision.
    LaurentSection inverse_one_unit() const {
        auto [one, y] = split_one_unit("inverse_one_unit");
        int v = y.valuation();
        LaurentSection sum = one;
        if (y.is_zero()) return sum;
        LaurentSection neg = -y;
        LaurentSection term = one;
        for (int n = 1; static_cast<i64>(n) * v < prec_; ++n) {
            term *= neg;
            sum += term;
        }
        return sum;
    }

    /// (1 + y)^M = sum_j C(M, j) y^j, truncated once j * v(y) >= prec.
    LaurentSection binomial_power(const PAdicContext& ctx, u64 M) const {
        auto [one, y] = split_one_unit("binomial_power");
        LaurentSection sum = one;
        if (y.is_zero() || prec_ == 0) return sum;
        int v = y.valuation();
        LaurentSection power = one;
        for (u64 j = 1; j <= M && static_cast<i64>(j) * v < prec_; ++j) {
            power *= y;
            sum += power.scaled(binomial_padic(ctx, M, j, prec_));
        }
        return sum;
    }

    /// log(1 + y) coefficient-wise, with guard digits for the divisions by n.
    /// The result keeps the input precision.
    LaurentSection log_one_unit() const {
        auto [one, y] = split_one_unit("log_one_unit");
        LaurentSection out(chart_, nvars_, p_, prec_);
        if (y.is_zero() || prec_ == 0) return out;
        const int k = prec_;
        const int v = y.valuation();
        const int work = k + detail::log_guard(p_, k);
        const u64 mw = detail::ipow(p_, work);
        const u64 mk = detail::ipow(p_, k);
        std::vector<Term> power{{Exponent{}, 1}};
        std::unordered_map<Exponent, u64, ExponentHash> acc;
        for (u64 n = 1; static_cast<i64>(n) * v - detail::floor_log(p_, n) < k; ++n) {
            power = multiply_terms(power, y.terms_, mw);
            int vn = detail::valuation_u64(p_, n);
            u64 d = detail::ipow(p_, vn);
            u64 unit_inv = detail::inv_mod((n / d) % mk, mk);
            for (const auto& t : power) {
                u64 term = detail::mulmod((t.coeff / d) % mk, unit_inv, mk);
                if (!term) continue;
                u64& slot = acc[t.exp];
                slot = (n % 2 == 1) ? detail::addmod(slot, term, mk) : detail::submod(slot, term, mk);
            }
        }
        std::vector<Term> terms;
        terms.reserve(acc.size());
        for (const auto& [e, c] : acc)
            if (c) terms.push_back({e, c});
        return from_terms(chart_, nvars_, p_, k, std::move(terms));
    }

    bool operator==(const LaurentSection& o) const = default;

private:
    static void check_compatible(const LaurentSection& a, const LaurentSection& b) {
        if (a.chart_ != b.chart_ || a.nvars_ != b.nvars_)
            throw InvalidArgument("sections on different charts (" + std::to_string(a.chart_) + " vs " + std::to_string(b.chart_) + ")");
        if (a.p_ != b.p_) throw InvalidArgument("sections over different primes");
    }

    static LaurentSection combine(const LaurentSection& a, const LaurentSection& b, bool subtract) {
        check_compatible(a, b);
        int k = std::min(a.prec_, b.prec_);
        LaurentSection s(a.chart_, a.nvars_, a.p_, k);
        if (k == 0) return s;
        u64 m = detail::ipow(a.p_, k);
        auto i = a.terms_.begin(), j = b.terms_.begin();
        s.terms_.reserve(a.terms_.size() + b.terms_.size());
        auto push = [&](const Exponent& e, u64 c) {
            if (c) s.terms_.push_back({e, c});
        };
        while (i != a.terms_.end() || j != b.terms_.end()) {
            if (j == b.terms_.end() || (i != a.terms_.end() && i->exp < j->exp)) {
                push(i->exp, i->coeff % m);
                ++i;
            } else if (i == a.terms_.end() || j->exp < i->exp) {
                u64 c = j->coeff % m;
                push(j->exp, subtract ? (c ? m - c : 0) : c);
                ++j;
            } else {
                u64 x = i->coeff % m, y = j->coeff % m;
                push(i->exp, subtract ? detail::submod(x, y, m) : detail::addmod(x, y, m));
                ++i;
                ++j;
            }
        }
        return s;
    }

    static std::vector<Term> multiply_terms(const std::vector<Term>& a, const std::vector<Term>& b, u64 m) {
        std::unordered_map<Exponent, u64, ExponentHash> acc;
        acc.reserve(std::min<std::size_t>(a.size() * b.size(), 1u << 22));
        for (const auto& x : a) {
            u64 xc = x.coeff % m;
            if (!xc) continue;
            for (const auto& y : b) {
                u64 c = detail::mulmod(xc, y.coeff % m, m);
                if (!c) continue;
                u64& slot = acc[x.exp + y.exp];
                slot = detail::addmod(slot, c, m);
            }
        }
        std::vector<Term> out;
        out.reserve(acc.size());
        for (const auto& [e, c] : acc)
            if (c) out.push_back({e, c});
        std::sort(out.begin(), out.end(), [](const Term& s, const Term& t) { return s.exp < t.exp; });
        return out;
    }

    std::pair<LaurentSection, LaurentSection> split_one_unit(const char* who) const {
        if (!is_one_unit()) throw ValuationError(std::string(who) + " needs a 1-unit (constant 1 mod p, other terms 0 mod p)");
        LaurentSection one = constant(chart_, nvars_, PAdicElem(p_, 1, prec_));
        return {one, *this - one};
    }

    void normalize() {
        if (prec_ == 0) {
            terms_.clear();
            return;
        }
        u64 m = detail::ipow(p_, prec_);
        std::sort(terms_.begin(), terms_.end(), [](const Term& s, const Term& t) { return s.exp < t.exp; });
        std::vector<Term> out;
        out.reserve(terms_.size());
        for (const auto& t : terms_) {
            u64 c = t.coeff % m;
            if (!out.empty() && out.back().exp == t.exp)
                out.back().coeff = detail::addmod(out.back().coeff, c, m);
            else
                out.push_back({t.exp, c});
        }
        std::erase_if(out, [](const Term& t) { return t.coeff == 0; });
        terms_ = std::move(out);
    }

    int chart_ = 0;
    int nvars_ = 0;
    u64 p_ = 2;
    int prec_ = 0;
    std::vector<Term> terms_;
};

} // namespace rigidchern
