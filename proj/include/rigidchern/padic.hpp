#pragma once

/**
 * @file padic.hpp
 * @brief Truncated p-adic integers with per-element absolute precision.
 *
 * An element is a residue modulo p^prec.  prec is the number of known base-p
 * digits; prec == 0 is the "no information" element and absorbs arithmetic.
 * Residues are kept below 2^62 so that products fit an unsigned __int128.
 */

#include <algorithm>
#include <cstdint>
#include <string>

#include "rigidchern/errors.hpp"

namespace rigidchern {

using u64 = std::uint64_t;
using i64 = std::int64_t;
__extension__ typedef unsigned __int128 u128;

namespace detail {

inline constexpr u64 kModulusLimit = u64{1} << 62;

inline u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }
inline u64 addmod(u64 a, u64 b, u64 m) {
    u64 s = a + b;
    return s >= m ? s - m : s;
}
inline u64 submod(u64 a, u64 b, u64 m) { return a >= b ? a - b : a + (m - b); }

inline u64 powmod(u64 base, u64 e, u64 m) {
    if (m == 1) return 0;
    u64 r = 1 % m;
    base %= m;
    while (e) {
        if (e & 1) r = mulmod(r, base, m);
        base = mulmod(base, base, m);
        e >>= 1;
    }
    return r;
}

/// Reduce a signed integer into [0, m).
inline u64 reduce_signed(i64 v, u64 m) {
    if (v >= 0) return static_cast<u64>(v) % m;
    u64 a = static_cast<u64>(-(v + 1)) % m; // avoids overflow at INT64_MIN
    return m - 1 - a;
}

inline bool is_prime(u64 n) {
    if (n < 2) return false;
    for (u64 d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

/// p^k, throwing if it would exceed the modulus limit.
inline u64 ipow(u64 p, int k) {
    u64 r = 1;
    for (int i = 0; i < k; ++i) {
        if (r > kModulusLimit / p) throw InvalidArgument("p^k exceeds the 62-bit modulus limit");
        r *= p;
    }
    return r;
}

/// Largest k with p^k <= 2^62.
inline int max_digits(u64 p) {
    int k = 0;
    u64 r = 1;
    while (r <= kModulusLimit / p) {
        r *= p;
        ++k;
    }
    return k;
}

/// floor(log_p n) for n >= 1.
inline int floor_log(u64 p, u64 n) {
    int k = 0;
    while (n >= p) {
        n /= p;
        ++k;
    }
    return k;
}

inline int valuation_u64(u64 p, u64 n) {
    if (n == 0) return 1 << 30;
    int v = 0;
    while (n % p == 0) {
        n /= p;
        ++v;
    }
    return v;
}

/// Inverse of a modulo m by the extended Euclidean algorithm; gcd(a, m) must be 1.
inline u64 inv_mod(u64 a, u64 m) {
    if (m == 1) return 0;
    i64 old_r = static_cast<i64>(a % m), r = static_cast<i64>(m);
    i64 old_s = 1, s = 0;
    while (r != 0) {
        i64 q = old_r / r;
        i64 tmp = old_r - q * r;
        old_r = r;
        r = tmp;
        tmp = old_s - q * s;
        old_s = s;
        s = tmp;
    }
    if (old_r != 1) throw ValuationError("element is not invertible modulo p^k");
    return reduce_signed(old_s, m);
}

/// Guard digits needed to divide the log-series terms x^n/n exactly when the
/// target precision is k and v(x) >= 1.
inline int log_guard(u64 p, int k) {
    int g = 0;
    for (u64 n = 1; static_cast<i64>(n) - floor_log(p, n) < k; ++n) g = std::max(g, floor_log(p, n));
    return g;
}

} // namespace detail

/// Prime and maximal absolute precision shared by a computation.
struct PAdicContext {
    static constexpr int kDefaultBound = 64;

    u64 p = 5;
    int N = 8;
    int bound = kDefaultBound;

    /// Largest usable N for p: at most `bound`, and small enough that the log
    /// series can run with guard digits below the 62-bit modulus limit.
    static int max_precision(u64 p, int bound = kDefaultBound) {
        int digits = detail::max_digits(p);
        int best = 0;
        for (int n = 1; n <= bound; ++n)
            if (n + detail::log_guard(p, n) <= digits) best = n;
        return best;
    }

    void validate() const {
        if (p < 2 || !detail::is_prime(p)) throw InvalidArgument("p must be a prime, got " + std::to_string(p));
        if (N < 1) throw InvalidArgument("precision N must be >= 1");
        int cap = max_precision(p, bound);
        if (N > cap)
            throw InvalidArgument("precision N=" + std::to_string(N) + " exceeds the bound " + std::to_string(cap) +
                                  " for p=" + std::to_string(p));
    }

    u64 modulus(int k) const { return detail::ipow(p, k); }
};

class PAdicElem {
public:
    PAdicElem() = default;
    PAdicElem(u64 p, u64 residue, int prec) : p_(p), prec_(std::max(prec, 0)) {
        residue_ = prec_ == 0 ? 0 : residue % detail::ipow(p_, prec_);
    }

    /// Integer v at precision k (default: ctx.N).
    static PAdicElem from_int(const PAdicContext& ctx, i64 v, int prec = -1) {
        int k = prec < 0 ? ctx.N : std::min(prec, ctx.N);
        return PAdicElem(ctx.p, detail::reduce_signed(v, ctx.modulus(k)), k);
    }
    static PAdicElem unknown(u64 p) { return PAdicElem(p, 0, 0); }

    u64 p() const { return p_; }
    u64 residue() const { return residue_; }
    int prec() const { return prec_; }
    u64 modulus() const { return detail::ipow(p_, prec_); }

    /// v_p at known precision; a zero residue has valuation prec.
    int valuation() const { return residue_ == 0 ? prec_ : detail::valuation_u64(p_, residue_); }
    bool is_zero() const { return residue_ == 0; }
    bool is_unit() const { return prec_ > 0 && residue_ % p_ != 0; }

    PAdicElem with_prec(int k) const { return PAdicElem(p_, residue_, std::min(k, prec_)); }

    /// Symmetric integer lift in (-p^prec/2, p^prec/2].
    i64 signed_lift() const {
        u64 m = modulus();
        return residue_ > m / 2 ? -static_cast<i64>(m - residue_) : static_cast<i64>(residue_);
    }
    std::string to_string() const { return std::to_string(residue_) + " + O(" + std::to_string(p_) + "^" + std::to_string(prec_) + ")"; }

    friend PAdicElem operator+(const PAdicElem& a, const PAdicElem& b) {
        int k = common_prec(a, b);
        u64 p = a.p_ ? a.p_ : b.p_;
        if (k == 0) return unknown(p);
        u64 m = detail::ipow(p, k);
        return PAdicElem(p, detail::addmod(a.residue_ % m, b.residue_ % m, m), k);
    }
    friend PAdicElem operator-(const PAdicElem& a, const PAdicElem& b) {
        int k = common_prec(a, b);
        u64 p = a.p_ ? a.p_ : b.p_;
        if (k == 0) return unknown(p);
        u64 m = detail::ipow(p, k);
        return PAdicElem(p, detail::submod(a.residue_ % m, b.residue_ % m, m), k);
    }
    friend PAdicElem operator*(const PAdicElem& a, const PAdicElem& b) {
        int k = common_prec(a, b);
        u64 p = a.p_ ? a.p_ : b.p_;
        if (k == 0) return unknown(p);
        u64 m = detail::ipow(p, k);
        return PAdicElem(p, detail::mulmod(a.residue_ % m, b.residue_ % m, m), k);
    }
    PAdicElem operator-() const {
        if (prec_ == 0) return *this;
        u64 m = modulus();
        return PAdicElem(p_, residue_ == 0 ? 0 : m - residue_, prec_);
    }
    PAdicElem& operator+=(const PAdicElem& o) { return *this = *this + o; }
    PAdicElem& operator-=(const PAdicElem& o) { return *this = *this - o; }
    PAdicElem& operator*=(const PAdicElem& o) { return *this = *this * o; }

    PAdicElem pow(u64 e) const {
        if (prec_ == 0) return *this;
        return PAdicElem(p_, detail::powmod(residue_, e, modulus()), prec_);
    }

    /// Exact division by p^v; requires valuation >= v and costs v digits.
    PAdicElem divide_by_p_power(int v) const {
        if (v == 0) return *this;
        if (valuation() < v) throw ValuationError("division by p^" + std::to_string(v) + " of an element of valuation " + std::to_string(valuation()));
        if (prec_ - v <= 0) throw PrecisionExhausted("division by p^" + std::to_string(v) + " leaves no precision");
        return PAdicElem(p_, residue_ / detail::ipow(p_, v), prec_ - v);
    }

    /// Inverse of a unit by the extended Euclidean algorithm.
    PAdicElem unit_inverse() const {
        if (prec_ == 0) return *this;
        if (!is_unit()) throw ValuationError("inverse of a non-unit");
        return PAdicElem(p_, detail::inv_mod(residue_, modulus()), prec_);
    }

    /// Equality at the smaller of the two precisions.
    bool equals(const PAdicElem& o) const {
        int k = common_prec(*this, o);
        if (k == 0) return true;
        u64 m = detail::ipow(p_ ? p_ : o.p_, k);
        return residue_ % m == o.residue_ % m;
    }
    bool operator==(const PAdicElem& o) const = default;

private:
    static int common_prec(const PAdicElem& a, const PAdicElem& b) {
        if (a.p_ && b.p_ && a.p_ != b.p_) throw InvalidArgument("mixing p-adic elements of different primes");
        return std::min(a.prec_, b.prec_);
    }

    u64 p_ = 0;
    u64 residue_ = 0;
    int prec_ = 0;
};

/// v_p(n!) by Legendre's formula.
inline u64 vp_factorial(u64 p, u64 n) {
    u64 digits = 0;
    for (u64 m = n; m; m /= p) digits += m % p;
    return (n - digits) / (p - 1);
}
inline u64 vp_factorial(const PAdicContext& ctx, u64 n) { return vp_factorial(ctx.p, n); }

/// (1 + a)^{-1} by the truncated alternating geometric series.
inline PAdicElem inv_one_unit(const PAdicContext& ctx, const PAdicElem& a) {
    int k = std::min(a.prec(), ctx.N);
    if (k == 0) return PAdicElem::unknown(ctx.p);
    PAdicElem x = a.with_prec(k);
    int v = x.valuation();
    if (v == 0) throw ValuationError("inv_one_unit needs v_p(a) >= 1");
    PAdicElem sum = PAdicElem::from_int(ctx, 1, k);
    PAdicElem term = sum;
    PAdicElem neg = -x;
    // (-a)^n vanishes mod p^k once n*v >= k
    for (int n = 1; static_cast<i64>(n) * v < k; ++n) {
        term *= neg;
        sum += term;
    }
    return sum;
}

/// log(u) = sum_{n>=1} (-1)^{n-1} (u-1)^n / n for a 1-unit u.
/// The divisions by n run with guard digits, so the result keeps the input
/// precision (log is an isometry on 1 + pZ_p at that precision).
inline PAdicElem log_one_unit(const PAdicContext& ctx, const PAdicElem& u) {
    int k = std::min(u.prec(), ctx.N);
    if (k == 0) return PAdicElem::unknown(ctx.p);
    PAdicElem x = u.with_prec(k) - PAdicElem::from_int(ctx, 1, k);
    if (x.is_zero()) return PAdicElem::from_int(ctx, 0, k);
    int v = x.valuation();
    if (v == 0) throw ValuationError("log_one_unit needs v_p(u - 1) >= 1");
    const u64 p = ctx.p;
    const int work = k + detail::log_guard(p, k);
    const u64 mw = detail::ipow(p, work);
    const u64 mk = detail::ipow(p, k);
    u64 power = 1;
    u64 sum = 0;
    for (u64 n = 1; static_cast<i64>(n) * v - detail::floor_log(p, n) < k; ++n) {
        power = detail::mulmod(power, x.residue(), mw);
        int vn = detail::valuation_u64(p, n);
        u64 unit = n / detail::ipow(p, vn);
        u64 term = (power / detail::ipow(p, vn)) % mk;
        term = detail::mulmod(term, detail::inv_mod(unit % mk, mk), mk);
        sum = (n % 2 == 1) ? detail::addmod(sum, term, mk) : detail::submod(sum, term, mk);
    }
    return PAdicElem(p, sum, k);
}

/// C(M, j) as a p-adic element at precision k, from unit parts and Legendre valuations.
inline PAdicElem binomial_padic(const PAdicContext& ctx, u64 M, u64 j, int k) {
    if (j > M) return PAdicElem::from_int(ctx, 0, k);
    const u64 p = ctx.p;
    const u64 mk = detail::ipow(p, k);
    i64 val = 0;
    u64 num = 1 % mk, den = 1 % mk;
    for (u64 t = 0; t < j; ++t) {
        u64 a = M - t, b = t + 1;
        int va = detail::valuation_u64(p, a), vb = detail::valuation_u64(p, b);
        val += va - vb;
        num = detail::mulmod(num, (a / detail::ipow(p, va)) % mk, mk);
        den = detail::mulmod(den, (b / detail::ipow(p, vb)) % mk, mk);
    }
    if (val >= k) return PAdicElem(p, 0, k);
    u64 unit = detail::mulmod(num, detail::inv_mod(den, mk), mk);
    return PAdicElem(p, detail::mulmod(unit, detail::ipow(p, static_cast<int>(val)), mk), k);
}

} // namespace rigidchern
