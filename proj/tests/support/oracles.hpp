#pragma once

// Independent reference computations for the tests.  Nothing here calls the
// library's arithmetic kernels: integers are handled with __int128 and plain
// loops, so agreement is evidence rather than tautology.

#include <cstdint>
#include <vector>

#include "rigidchern/cech.hpp"

namespace oracle {

__extension__ typedef __int128 i128;
using u64 = std::uint64_t;
using i64 = std::int64_t;

inline u64 pow_int(u64 p, int k) {
    u64 r = 1;
    for (int i = 0; i < k; ++i) r *= p;
    return r;
}

inline u64 mod(i128 a, u64 m) {
    i128 r = a % static_cast<i128>(m);
    return static_cast<u64>(r < 0 ? r + m : r);
}

/// Modular inverse by the extended Euclidean algorithm on __int128.
inline u64 inverse(u64 a, u64 m) {
    i128 r0 = m, r1 = a % m, s0 = 0, s1 = 1;
    while (r1 != 0) {
        i128 q = r0 / r1;
        i128 t = r0 - q * r1;
        r0 = r1;
        r1 = t;
        t = s0 - q * s1;
        s0 = s1;
        s1 = t;
    }
    return r0 == 1 ? mod(s0, m) : 0;
}

/// Number of factors p in n! by counting each factor.
inline u64 vp_factorial_count(u64 p, u64 n) {
    u64 v = 0;
    for (u64 i = 2; i <= n; ++i)
        for (u64 t = i; t % p == 0; t /= p) ++v;
    return v;
}

/// C(M, j) mod m from Pascal's triangle.
inline u64 binomial_pascal(u64 M, u64 j, u64 m) {
    std::vector<u64> row(static_cast<std::size_t>(j) + 1, 0);
    row[0] = 1 % m;
    for (u64 r = 1; r <= M; ++r)
        for (u64 c = std::min(r, j); c >= 1; --c) row[c] = (row[c] + row[c - 1]) % m;
    return row[j];
}

/// log(1 + x) mod p^k from a fixed-length series at a much higher working
/// precision: every x^n is kept exactly modulo p^(hi), then divided by n.
inline u64 log_series(u64 p, u64 x, int k, int terms = 200) {
    int hi = k;
    while (pow_int(p, hi + 1) < (u64{1} << 62) / p && hi < k + 20) ++hi;
    const u64 mh = pow_int(p, hi), mk = pow_int(p, k);
    i128 sum = 0;
    u64 power = 1;
    for (int n = 1; n <= terms; ++n) {
        power = static_cast<u64>(static_cast<i128>(power) * x % mh);
        u64 nn = static_cast<u64>(n), pp = 1;
        while (nn % p == 0) {
            nn /= p;
            pp *= p;
        }
        if (pp >= mh) continue;  // n·v(x) far beyond the target precision for these n
        u64 q = power / pp;      // exact: v(x^n) >= n > v(n)
        u64 term = static_cast<u64>(static_cast<i128>(q % mk) * inverse(nn % mk, mk) % mk);
        sum += (n % 2 == 1) ? static_cast<i128>(term) : -static_cast<i128>(term);
    }
    return mod(sum, mk);
}

/// Elementary symmetric polynomials e_0..e_r.
inline std::vector<i64> elementary(const std::vector<int>& a) {
    std::vector<i64> e(a.size() + 1, 0);
    e[0] = 1;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = i + 1; j >= 1; --j) e[j] += e[j - 1] * a[i];
    return e;
}

/// Raw residue functional on P^n: coefficient of the weight-zero constant
/// in front of dlog t_1 ∧ ... ∧ dlog t_k (chart-0 coordinates) in the
/// C^k(Ω^k) component on the simplex {0, ..., k}.
inline u64 raw_residue(const rigidchern::ChartedSpace& X, const rigidchern::TotalCochain& z) {
    const int k = z.degree() / 2;
    const rigidchern::Cochain* c = z.find(k);
    if (!c) return 0;
    rigidchern::Simplex S;
    for (int i = 0; i <= k; ++i) S.push_back(i);
    const rigidchern::DiffForm& w = c->at(X, S);
    unsigned J = (1u << k) - 1;
    return w.component(J).coeff(rigidchern::Exponent{}).residue();
}

/// Residue normalized by the same functional on a reference class.
inline u64 residue_ratio(const rigidchern::ChartedSpace& X, const rigidchern::TotalCochain& z, const rigidchern::TotalCochain& reference, int k) {
    const u64 m = pow_int(X.p(), k);
    u64 ref = raw_residue(X, reference) % m;
    return static_cast<u64>(static_cast<i128>(raw_residue(X, z) % m) * inverse(ref, m) % m);
}

} // namespace oracle
